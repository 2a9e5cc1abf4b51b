"""Spectral differential operators on the sphere.

Laplace-Beltrami, its zero-mean inverse (the Green operator), band
projections, velocity recovery from an absolute-vorticity field, the
advection tendency of the vorticity equation, and the spectral-gap
quantity behind the Poincare-type inequality.
"""

from __future__ import annotations

import numpy as np

from .grid import GridField, GridSpec
from .harmonics import (
    SQRT4PI,
    SpectralField,
    analyze,
    from_coeff_dict,
    inner_l2,
    synthesize_dphi,
    synthesize_dtheta,
)

# sin(theta) = sqrt(4 pi / 3) Y_1^0
SINTHETA_C10 = float(np.sqrt(4.0 * np.pi / 3.0))


def _require_zero_mean(c: SpectralField, what: str) -> None:
    if c.coeffs[0, 0] != 0.0:
        raise ValueError(f"{what} requires a zero-mean field (c_0^0 = 0)")


def laplacian(c: SpectralField) -> SpectralField:
    """Laplace-Beltrami operator: c_j^m -> -j(j+1) c_j^m."""
    j = np.arange(c.L + 1)
    return SpectralField(L=c.L, coeffs=c.coeffs * (-j * (j + 1.0))[None, :])


def green(c: SpectralField) -> SpectralField:
    """Inverse of -Laplacian on zero-mean fields: c_j^m -> c_j^m / (j(j+1))."""
    _require_zero_mean(c, "green")
    j = np.arange(c.L + 1)
    scale = np.zeros(c.L + 1)
    scale[1:] = 1.0 / (j[1:] * (j[1:] + 1.0))
    return SpectralField(L=c.L, coeffs=c.coeffs * scale[None, :])


def project_band(c: SpectralField, j: int, complement: bool = False) -> SpectralField:
    """Orthogonal projection onto degrees <= j (or > j when complement)."""
    if not (1 <= j <= c.L):
        raise ValueError(f"projection degree j={j} outside [1, {c.L}]")
    keep = np.arange(c.L + 1) <= j
    if complement:
        keep = ~keep
    return SpectralField(L=c.L, coeffs=c.coeffs * keep[None, :])


def stream_function(zeta: SpectralField, omega: float) -> SpectralField:
    """psi = omega sin(theta) - G(zeta)."""
    _require_zero_mean(zeta, "stream_function")
    psi = -green(zeta).coeffs
    psi[0, 1] += omega * SINTHETA_C10
    return SpectralField(L=zeta.L, coeffs=psi)


def velocity(zeta: SpectralField, omega: float, spec: GridSpec | None = None):
    """Velocity grids (u_phi, u_theta) of the flow driven by zeta.

    u_phi = -d_theta psi, u_theta = (1/cos theta) d_phi psi with
    psi = omega sin(theta) - G(zeta).
    """
    psi = stream_function(zeta, omega)
    return velocity_from_stream(psi, spec)


def velocity_from_stream(psi: SpectralField, spec: GridSpec | None = None):
    """Velocity grids of the rotated gradient of an arbitrary stream psi."""
    if spec is None:
        from .harmonics import default_grid

        spec = default_grid(psi.L)
    u_phi = GridField(values=-synthesize_dtheta(psi, spec).values, spec=spec)
    u_theta = GridField(
        values=synthesize_dphi(psi, spec).values / spec.cos_theta[:, None], spec=spec
    )
    return u_phi, u_theta


def advection_tendency(
    zeta: SpectralField,
    omega: float,
    spec: GridSpec | None = None,
    stream: SpectralField | None = None,
) -> SpectralField:
    """Tendency d_t zeta = -J grad(psi) . grad(zeta).

    psi = omega sin(theta) - G(zeta) in coupled mode, or the prescribed
    `stream` when given.  The Jacobian is assembled on the grid as
    (1/cos theta)(d_phi psi d_theta zeta - d_theta psi d_phi zeta) and
    analyzed back to degree <= L.
    """
    _require_zero_mean(zeta, "advection_tendency")
    if spec is None:
        from .harmonics import default_grid

        spec = default_grid(zeta.L)
    psi = stream if stream is not None else stream_function(zeta, omega)
    dpsi_phi = synthesize_dphi(psi, spec).values
    dpsi_th = synthesize_dtheta(psi, spec).values
    dz_phi = synthesize_dphi(zeta, spec).values
    dz_th = synthesize_dtheta(zeta, spec).values
    jac = (dpsi_phi * dz_th - dpsi_th * dz_phi) / spec.cos_theta[:, None]
    out = analyze(GridField(values=-jac, spec=spec), zeta.L)
    C = out.coeffs.copy()
    C[0, 0] = 0.0  # transport preserves the mean; drop quadrature dust
    return SpectralField(L=zeta.L, coeffs=C)


def poincare_gap(f: SpectralField, j: int) -> float:
    """Slack of the spectral-gap inequality beyond degree j.

    Returns ||P_j^perp f||^2 / ((j+1)(j+2)) - <P_j^perp f, G P_j^perp f>;
    nonnegative for every zero-mean f, and zero exactly when f lives in
    degrees <= j+1.
    """
    _require_zero_mean(f, "poincare_gap")
    deg = np.arange(f.L + 1)
    energy = np.abs(f.coeffs) ** 2
    energy[1:] *= 2.0  # both +/-m
    per_degree = energy.sum(axis=0)
    gap = 0.0
    for k in range(j + 1, f.L + 1):
        # the k = j+1 term is an exact floating-point zero (equality case)
        gap += per_degree[k] * (1.0 / ((j + 1.0) * (j + 2.0)) - 1.0 / (k * (k + 1.0)))
    return float(gap)


def sin_theta_field(L: int, scale: float = 1.0) -> SpectralField:
    """The zonal field scale * sin(theta) as a SpectralField."""
    return from_coeff_dict(L, {(1, 0): scale * SINTHETA_C10})
