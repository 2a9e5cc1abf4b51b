"""Quadrature grid on the unit sphere.

Latitudes are Gauss-Legendre nodes in mu = sin(theta) (theta is latitude,
so mu in (-1, 1) and the poles are never grid points); longitudes are
equally spaced on [0, 2*pi).  Surface integrals of fields bandlimited to
the grid's resolution are exact up to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of the degree-n Legendre polynomial, returned in
    ascending order; the rule is exact for polynomials of degree <= 2n-1
    and the weights sum to 2.
    """
    if n < 1:
        raise ValueError("Gauss-Legendre rule needs n >= 1 nodes")
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Gauss-Legendre x equiangular-longitude grid for truncation degree L.

    n_lat >= L+1 and n_lon >= 2L+1 make the spherical-harmonic transform
    pair exact on bandlimited fields; the defaults n_lat = 2(L+1),
    n_lon = 4(L+1) add the margin needed so quadratic products of two
    degree-L fields are analyzed without aliasing.
    """

    L: int
    n_lat: int
    n_lon: int
    mu_nodes: np.ndarray  # sin(latitude), strictly increasing, in (-1, 1)
    weights: np.ndarray   # quadrature weights, sum to 2

    @cached_property
    def cos_theta(self) -> np.ndarray:
        return np.sqrt(1.0 - self.mu_nodes ** 2)

    @cached_property
    def phi(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_lon) / self.n_lon


def build_grid(L: int, n_lat: int | None = None, n_lon: int | None = None) -> GridSpec:
    """Build a GridSpec, validating the transform-exactness bounds."""
    if L < 2:
        raise ValueError(f"truncation degree L={L} must be >= 2")
    if n_lat is None:
        n_lat = 2 * (L + 1)
    if n_lon is None:
        n_lon = 4 * (L + 1)
    if n_lat < L + 1:
        raise ValueError(f"n_lat={n_lat} violates n_lat >= L+1 = {L + 1}")
    if n_lon < 2 * L + 1:
        raise ValueError(f"n_lon={n_lon} violates n_lon >= 2L+1 = {2 * L + 1}")
    mu, w = gauss_legendre(n_lat)
    return GridSpec(L=L, n_lat=n_lat, n_lon=n_lon, mu_nodes=mu, weights=w)


@dataclass(frozen=True, eq=False)
class GridField:
    """Real scalar field sampled on a GridSpec (n_lat x n_lon values)."""

    values: np.ndarray
    spec: GridSpec

    def __post_init__(self):
        if self.values.shape != (self.spec.n_lat, self.spec.n_lon):
            raise ValueError(
                f"field shape {self.values.shape} does not match grid "
                f"({self.spec.n_lat}, {self.spec.n_lon})"
            )


def integrate(f: GridField) -> float:
    """Surface integral of f over the sphere (d_sigma = cos(theta) dphi dtheta).

    Latitude-major reduction in fixed index order, so results are bitwise
    deterministic.
    """
    spec = f.spec
    row_sums = f.values.sum(axis=1)
    return float((2.0 * np.pi / spec.n_lon) * np.dot(spec.weights, row_sums))
