"""Vandermonde systems for nodal, segmental and normalized interpolation.

Matrix entries follow the three definitions: point evaluations B_j(xi_i),
segment integrals of B_j, and length-normalized segment averages.  In the
normalized mode a degenerate support row falls back to the point evaluation
at its midpoint, realizing the shrinking-segment limit without a special
matrix shape.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg as sla

from .polybasis import MONOMIAL_DET_LIMIT, BasisKind, basis_matrix, integrate_basis_all
from .supports import Support, SupportSet

# numerical-singularity pivot threshold for sign/log determinants
_PIVOT_FLOOR = 1e-300


class Mode(Enum):
    NODAL = "nodal"
    SEGMENTAL = "segmental"
    NORMALIZED = "normalized"


@dataclass(frozen=True)
class VandermondeSystem:
    matrix: np.ndarray
    basis: BasisKind
    supports: SupportSet
    mode: Mode

    @property
    def r(self) -> int:
        return self.matrix.shape[0]


def _chebu_segment_averages(r: int, support: Support) -> np.ndarray:
    """Averages of U_0..U_{r-1} over a segment, evaluated in angle form.

    With tau the mean of the endpoint angles and rho_hat their half-difference,
    the T_j/j antiderivative difference divided by the length equals
    sin(j tau) sin(j rho_hat) / (j sin tau sin rho_hat) exactly.  rho_hat is
    recovered from the segment length via sin(rho_hat) = |s| / (2 sin tau),
    which keeps its relative accuracy for very short segments, where the
    direct angle difference cancels catastrophically.
    """
    theta_a = math.acos(max(-1.0, min(1.0, support.alpha)))
    theta_b = math.acos(max(-1.0, min(1.0, support.beta)))
    tau = 0.5 * (theta_a + theta_b)
    sin_tau = math.sin(tau)
    sin_rho = min(1.0, support.length / (2.0 * sin_tau))
    rho_hat = math.asin(sin_rho)
    j = np.arange(1, r + 1)
    return (np.sin(j * tau) / sin_tau) * (np.sin(j * rho_hat) / (j * sin_rho))


def _row(basis: BasisKind, r: int, support: Support, mode: Mode) -> np.ndarray:
    if mode is Mode.NODAL or (mode is Mode.NORMALIZED and support.is_node):
        return basis_matrix(basis, r, support.midpoint)[0]
    if basis is BasisKind.CHEBYSHEV_U:
        averages = _chebu_segment_averages(r, support)
        return averages * support.length if mode is Mode.SEGMENTAL else averages
    integrals = integrate_basis_all(basis, r, support.alpha, support.beta)
    return integrals if mode is Mode.SEGMENTAL else integrals / support.length


def build(basis: BasisKind, sset: SupportSet, mode: Mode) -> VandermondeSystem:
    """Assemble the r x r Vandermonde matrix for the given mode.

    Nodal mode requires a pure node set, segmental mode a pure segment set;
    normalized mode accepts any mix and treats node rows as point evaluations.
    """
    if basis is BasisKind.MONOMIAL and sset.r > MONOMIAL_DET_LIMIT:
        raise ValueError(
            f"monomial systems are limited to r <= {MONOMIAL_DET_LIMIT}; use ChebyshevU or Legendre"
        )
    if mode is Mode.NODAL and not sset.all_nodes:
        raise ValueError("nodal mode requires all supports to be nodes")
    if mode is Mode.SEGMENTAL and not sset.all_segments:
        raise ValueError("segmental mode requires all supports to have positive length")
    rows = [_row(basis, sset.r, s, mode) for s in sset.supports]
    return VandermondeSystem(np.vstack(rows), basis, sset, mode)


def _lu(matrix: np.ndarray):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # lapack warns on exact zero pivots
        return sla.lu_factor(matrix)


def sign_log_det(sys: VandermondeSystem):
    """(sign, log|det|) via pivoted LU; sign 0 flags numerical singularity."""
    lu, piv = _lu(sys.matrix)
    diag = np.diag(lu)
    if np.any(np.abs(diag) < _PIVOT_FLOOR) or not np.all(np.isfinite(diag)):
        return 0, -math.inf
    sign = 1 if np.sum(piv != np.arange(len(piv))) % 2 == 0 else -1
    sign *= int(np.prod(np.sign(diag)))
    return sign, float(np.sum(np.log(np.abs(diag))))


@dataclass(frozen=True)
class LagrangeBasis:
    """Cardinal basis dual to the data functionals; row i holds the coefficients
    of ell_i in `basis`."""

    coeff_matrix: np.ndarray
    basis: BasisKind
    supports: SupportSet
    mode: Mode

    @property
    def r(self) -> int:
        return self.coeff_matrix.shape[0]

    def evaluate(self, x) -> np.ndarray:
        """Values ell_i(x_k) as a (len(x), r) array."""
        return basis_matrix(self.basis, self.r, x) @ self.coeff_matrix.T

    def integrals(self, a: float, b: float) -> np.ndarray:
        """Exact integrals of every ell_i over [a, b]."""
        return self.coeff_matrix @ integrate_basis_all(self.basis, self.r, a, b)


def lagrange_basis(sys: VandermondeSystem) -> LagrangeBasis:
    """Solve for the cardinal basis (one LU factorization, r right-hand sides)."""
    lu_piv = _lu(sys.matrix)
    diag = np.diag(lu_piv[0])
    if np.any(np.abs(diag) < _PIVOT_FLOOR) or not np.all(np.isfinite(diag)):
        raise np.linalg.LinAlgError("singular Vandermonde system")
    # duality: row i of C must satisfy (C V^T)[i, j] = delta_ij
    coeff = sla.lu_solve(lu_piv, np.eye(sys.r), trans=1)
    return LagrangeBasis(coeff, sys.basis, sys.supports, sys.mode)


class ProductForm(Enum):
    NODAL_PRODUCT = "nodal-product"
    CONCAT_HAT = "concat-hat"
    CONCAT_NORMALIZED = "concat-normalized"


def product_formula_det(xs, which: ProductForm):
    """Closed-form monomial determinants as (sign, log|det|).

    NODAL_PRODUCT: prod_{i<j} (x_j - x_i) for r nodes.
    CONCAT_HAT: (1/r!) prod_{i<j} (x_j - x_i) over the r+1 breakpoints.
    CONCAT_NORMALIZED: (1/r!) prod_{j>i+1} (x_j - x_i); adjacent gaps are
    absent, so collapsed segments are tolerated.
    """
    xs = np.asarray(xs, dtype=float)
    if np.any(np.diff(xs) < 0):
        raise ValueError("node vector must be sorted")
    n = xs.size
    skip_adjacent = which is ProductForm.CONCAT_NORMALIZED
    log_abs = 0.0
    for i in range(n):
        lo = i + 2 if skip_adjacent else i + 1
        for j in range(lo, n):
            d = xs[j] - xs[i]
            if d <= 0.0:
                return 0, -math.inf
            log_abs += math.log(d)
    if which is not ProductForm.NODAL_PRODUCT:
        log_abs -= math.lgamma(n)  # ln r! with r = n - 1
    return 1, log_abs


def log_basis_change_det(kind: BasisKind, r: int) -> float:
    """ln|det| of the change of basis from monomials, i.e. the constant by which
    every r x r determinant in `kind` differs from its monomial counterpart."""
    if kind is BasisKind.MONOMIAL:
        return 0.0
    if kind is BasisKind.CHEBYSHEV_U:
        return math.log(2.0) * (r * (r - 1) // 2)
    if kind is BasisKind.LEGENDRE:
        # leading coefficient of P_m is binom(2m, m) / 2^m
        total = 0.0
        for m in range(r):
            total += math.lgamma(2 * m + 1) - 2 * math.lgamma(m + 1) - m * math.log(2.0)
        return total
    raise ValueError(f"unknown basis {kind}")
