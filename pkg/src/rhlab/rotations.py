"""Symmetry-group actions on spectral fields.

Polar-axis rotations act diagonally on the coefficients; longitude
reflection flips the equiangular grid; full SO(3) rotations resample the
field at the rotated grid nodes.  All three are exact on bandlimited
fields up to transform roundoff.
"""

from __future__ import annotations

import numpy as np

from .grid import GridField, GridSpec
from .harmonics import SpectralField, analyze, default_grid, eval_point, synthesize


def rotate_polar(c: SpectralField, beta: float) -> SpectralField:
    """Coefficients of f(phi + beta, theta): c_j^m -> e^{i m beta} c_j^m."""
    m = np.arange(c.L + 1)
    return SpectralField(L=c.L, coeffs=c.coeffs * np.exp(1j * m * beta)[:, None])


def reflect_longitude(c: SpectralField, spec: GridSpec | None = None) -> SpectralField:
    """Coefficients of f(-phi, theta).

    Implemented on the grid: phi_i -> -phi_i is an index flip of the
    equiangular longitudes (column 0 fixed, the rest reversed), then a
    re-analysis.  Exact on bandlimited fields.
    """
    if spec is None:
        spec = default_grid(c.L)
    vals = synthesize(c, spec).values
    flipped = np.empty_like(vals)
    flipped[:, 0] = vals[:, 0]
    flipped[:, 1:] = vals[:, :0:-1]
    return analyze(GridField(values=flipped, spec=spec), c.L)


def euler_to_matrix(euler: tuple[float, float, float]) -> np.ndarray:
    """Rotation matrix R = Rz(alpha) Ry(beta) Rz(gamma) (Z-Y-Z convention)."""
    al, be, ga = euler

    def rz(t):
        return np.array([
            [np.cos(t), -np.sin(t), 0.0],
            [np.sin(t), np.cos(t), 0.0],
            [0.0, 0.0, 1.0],
        ])

    def ry(t):
        return np.array([
            [np.cos(t), 0.0, np.sin(t)],
            [0.0, 1.0, 0.0],
            [-np.sin(t), 0.0, np.cos(t)],
        ])

    return rz(al) @ ry(be) @ rz(ga)


def rotate_so3(c: SpectralField, euler: tuple[float, float, float]) -> SpectralField:
    """Active rotation of the field's argument: (Rf)(x) = f(R^{-1} x).

    R is the Z-Y-Z Euler rotation of `euler`; the output coefficients are
    obtained by evaluating f at the pre-image of every grid node and
    re-analyzing.  rotate_so3(c, (beta, 0, 0)) equals rotate_polar(c, -beta).
    """
    spec = default_grid(c.L)
    R = euler_to_matrix(euler)
    mu = spec.mu_nodes
    ct = spec.cos_theta
    phi = spec.phi
    # unit vectors of all grid nodes, shape (3, n_lat, n_lon)
    X = np.empty((3, spec.n_lat, spec.n_lon))
    X[0] = ct[:, None] * np.cos(phi)[None, :]
    X[1] = ct[:, None] * np.sin(phi)[None, :]
    X[2] = mu[:, None]
    Y = np.einsum("ab,bkn->akn", R.T, X)  # R^{-1} x
    theta_p = np.arcsin(np.clip(Y[2], -1.0, 1.0))
    phi_p = np.arctan2(Y[1], Y[0])
    vals = eval_point(c, phi_p, theta_p)
    return analyze(GridField(values=vals, spec=spec), c.L)
