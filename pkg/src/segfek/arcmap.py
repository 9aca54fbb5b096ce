"""The sliding-average integral operator on arc windows.

Averaging a function over [cos(t+rho), cos(t-rho)] is diagonal in the
Chebyshev-U basis: U_{j-1} is an eigenfunction with eigenvalue
mu_j = sin(j rho) / (j sin rho).  All coefficient-side operations work in
that basis; the operator is invertible on P_{r-1} exactly when rho < pi/r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .interpolation import average
from .lebesgue import _grid_scale, _refined_max, chebyshev_grid
from .polybasis import BasisKind, Polynomial, basis_matrix
from .supports import ArcFamily, Support, arc_to_supports
from .vandermonde import Mode, build, lagrange_basis


def spectral_eigenvalues(rho: float, r: int) -> np.ndarray:
    """Eigenvalues mu_j = sin(j rho)/(j sin rho) on basis elements U_0..U_{r-1}."""
    if not 0.0 < rho < math.pi / 2:
        raise ValueError(f"arc-radius {rho} outside (0, pi/2)")
    j = np.arange(1, r + 1)
    return np.sin(j * rho) / (j * math.sin(rho))


@dataclass(frozen=True)
class SpectralK:
    rho: float
    r: int
    eigenvalues: np.ndarray

    @classmethod
    def create(cls, rho: float, r: int) -> "SpectralK":
        return cls(rho, r, spectral_eigenvalues(rho, r))


def apply_K_pointwise(f, rho: float, t: float) -> float:
    """Average f over the arc window at angle t.

    For t in (0, pi) this is the mean of f over [cos(t+rho), cos(t-rho)].
    The endpoints t = 0 and t = pi use the one-sided windows [cos rho, 1] and
    [-1, -cos rho]; this boundary extension is diagnostic only.
    """
    if not 0.0 <= t <= math.pi:
        raise ValueError("t must lie in [0, pi]")
    if t == 0.0:
        window = Support(math.cos(rho), 1.0)
    elif t == math.pi:
        window = Support(-1.0, -math.cos(rho))
    else:
        window = Support(math.cos(t + rho), math.cos(t - rho))
    return average(f, window)


def _as_chebu(p: Polynomial) -> Polynomial:
    return p if p.basis is BasisKind.CHEBYSHEV_U else p.convert(BasisKind.CHEBYSHEV_U)


def apply_K_poly(p: Polynomial, rho: float) -> Polynomial:
    """Coefficientwise spectral action on a polynomial (maps P_{r-1} to itself)."""
    q = _as_chebu(p)
    return Polynomial(BasisKind.CHEBYSHEV_U, q.coeffs * spectral_eigenvalues(rho, q.size))


def apply_K_inverse(p: Polynomial, rho: float, r: int) -> Polynomial:
    """Inverse spectral action on P_{r-1}; refused when rho >= pi/r."""
    if rho >= math.pi / r:
        raise ValueError(f"operator not invertible on P_{r - 1}: rho {rho} >= pi/{r}")
    q = _as_chebu(p)
    if q.size > r:
        raise ValueError("polynomial degree exceeds the inversion space")
    return Polynomial(BasisKind.CHEBYSHEV_U, q.coeffs / spectral_eigenvalues(rho, q.size))


def fejer_functional(fam: ArcFamily, basis: BasisKind = BasisKind.CHEBYSHEV_U) -> float:
    """Max over I_rho of the squared sum of the averaged cardinal functions.

    The operator image of each segmental cardinal function is the nodal
    cardinal function of the corresponding arc-midpoint, so this equals the
    nodal squared-sum condition on I_rho: exactly 1 for the arc-family Fekete
    segments, strictly larger otherwise.
    """
    sset = arc_to_supports(fam)
    sys = build(basis, sset, Mode.NORMALIZED)
    lag = lagrange_basis(sys)
    coeffs = lag.coeff_matrix if basis is BasisKind.CHEBYSHEV_U else None
    if coeffs is None:
        rows = [
            _as_chebu(Polynomial(basis, row)).coeffs for row in lag.coeff_matrix
        ]
        coeffs = np.vstack(rows)
    k_coeffs = coeffs * spectral_eigenvalues(fam.rho, sset.r)[None, :]
    cos_rho = math.cos(fam.rho)
    n = max(2000, 50 * sset.r) * _grid_scale()
    grid = np.union1d(cos_rho * chebyshev_grid(n), fam.arc_midpoints)

    def fun(x):
        vals = basis_matrix(BasisKind.CHEBYSHEV_U, sset.r, x) @ k_coeffs.T
        return np.sum(vals**2, axis=1)

    _, best_val, _ = _refined_max(fun, grid)
    return best_val


def inverse_norm_estimate(rho: float, r: int, grid_size: int = 512):
    """Diagnostics for the inverse operator: (max 1/mu_j, grid sup-norm estimate).

    The sup-norm side samples K^{-1} over random coefficient vectors of unit
    sup norm; both numbers are indicative only.
    """
    mu = spectral_eigenvalues(rho, r)
    if np.any(mu <= 0):
        raise ValueError("operator not invertible for this rho")
    coeff_side = float(np.max(1.0 / mu))
    rng = np.random.default_rng(0)
    grid = chebyshev_grid(grid_size)
    design = basis_matrix(BasisKind.CHEBYSHEV_U, r, grid)
    worst = 0.0
    for _ in range(64):
        c = rng.standard_normal(r)
        p = design @ c
        q = design @ (c / mu)
        sup_p = np.max(np.abs(p))
        if sup_p > 0:
            worst = max(worst, float(np.max(np.abs(q)) / sup_p))
    return coeff_side, worst
