"""Polynomial bases on the reference interval [-1, 1].

Three bases are supported: monomials 1, x, x^2, ..., Chebyshev polynomials
of the second kind U_0, U_1, ..., and Legendre polynomials P_0, P_1, ....
Basis elements are indexed j = 1..r so that element j has exact degree j-1.
Chebyshev-U and Legendre values are always produced by their three-term
recurrences; the trigonometric quotient sin(j arccos x)/sin(arccos x) is
singular at x = +-1 and is never used for evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

# Monomial Vandermonde conditioning explodes quickly; determinant-grade work
# beyond this size must use ChebyshevU or Legendre.
MONOMIAL_DET_LIMIT = 30


class BasisKind(Enum):
    MONOMIAL = "monomial"
    CHEBYSHEV_U = "chebu"
    LEGENDRE = "legendre"


def basis_matrix(kind: BasisKind, r: int, x) -> np.ndarray:
    """Evaluate B_1..B_r at the points x.

    Parameters
    ----------
    kind : BasisKind
    r : number of basis elements (max degree r-1)
    x : scalar or 1-d array of evaluation points

    Returns
    -------
    (len(x), r) array with column j-1 holding B_j(x).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if r < 1:
        raise ValueError("need at least one basis element")
    out = np.empty((x.size, r))
    out[:, 0] = 1.0
    if kind is BasisKind.MONOMIAL:
        for j in range(1, r):
            out[:, j] = out[:, j - 1] * x
    elif kind is BasisKind.CHEBYSHEV_U:
        if r > 1:
            out[:, 1] = 2.0 * x
        for j in range(2, r):
            out[:, j] = 2.0 * x * out[:, j - 1] - out[:, j - 2]
    elif kind is BasisKind.LEGENDRE:
        if r > 1:
            out[:, 1] = x
        for j in range(2, r):
            # (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1} with k = j-1
            out[:, j] = ((2 * j - 1) * x * out[:, j - 1] - (j - 1) * out[:, j - 2]) / j
    else:
        raise ValueError(f"unknown basis {kind}")
    return out


def eval_basis(kind: BasisKind, j: int, x):
    """Value of the j-th basis element (degree j-1) at x, scalar in scalar out."""
    if j < 1:
        raise ValueError("basis index starts at 1")
    vals = basis_matrix(kind, j, x)[:, j - 1]
    return vals[0] if np.isscalar(x) or np.ndim(x) == 0 else vals


def _chebyshev_t_values(r: int, x: float) -> np.ndarray:
    """T_1(x)..T_r(x) by recurrence."""
    t = np.empty(r)
    t_prev, t_cur = 1.0, x
    t[0] = x
    for j in range(1, r):
        t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
        t[j] = t_cur
    return t


def _legendre_values(n_max: int, x: float) -> np.ndarray:
    """P_0(x)..P_{n_max}(x) by recurrence."""
    p = np.empty(n_max + 1)
    p[0] = 1.0
    if n_max >= 1:
        p[1] = x
    for k in range(1, n_max):
        p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1)
    return p


def integrate_basis_all(kind: BasisKind, r: int, a: float, b: float) -> np.ndarray:
    """Exact integrals of B_1..B_r over [a, b] via antiderivatives, no quadrature.

    Monomials integrate to x^j/j, Chebyshev-U to T_j/j, and Legendre via
    (P_j - P_{j-2})/(2j-1).
    """
    if not (-1.0 - 1e-9 <= a <= b <= 1.0 + 1e-9):
        raise ValueError(f"integration bounds [{a}, {b}] outside [-1, 1]")
    j = np.arange(1, r + 1)
    if kind is BasisKind.MONOMIAL:
        return (b ** j.astype(float) - a ** j.astype(float)) / j
    if kind is BasisKind.CHEBYSHEV_U:
        return (_chebyshev_t_values(r, b) - _chebyshev_t_values(r, a)) / j
    if kind is BasisKind.LEGENDRE:
        dp = _legendre_values(r, b) - _legendre_values(r, a)
        out = np.empty(r)
        out[0] = b - a
        for jj in range(2, r + 1):
            out[jj - 1] = (dp[jj] - dp[jj - 2]) / (2 * jj - 1)
        return out
    raise ValueError(f"unknown basis {kind}")


def integrate_basis(kind: BasisKind, j: int, a: float, b: float) -> float:
    """Exact integral of the j-th basis element over [a, b]."""
    if j < 1:
        raise ValueError("basis index starts at 1")
    return float(integrate_basis_all(kind, j, a, b)[j - 1])


def legendre_deriv(degree: int, x):
    """Derivative P'_degree evaluated by the recurrence P'_{k+1} = P'_{k-1} + (2k+1) P_k."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    x = np.asarray(x, dtype=float)
    p_prev, p_cur = np.ones_like(x), x
    d_prev, d_cur = np.zeros_like(x), np.ones_like(x)
    for k in range(1, degree):
        p_next = ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
        d_next = d_prev + (2 * k + 1) * p_cur
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
    return d_cur if d_cur.ndim else float(d_cur)


def legendre_with_derivs(degree: int, x):
    """Return (P_n, P'_n, P''_n) at interior points; P'' uses the Legendre ODE."""
    x = np.asarray(x, dtype=float)
    p = _legendre_batch(degree, x)
    dp = legendre_deriv(degree, x) if degree >= 1 else np.zeros_like(x)
    # (1-x^2) P'' = 2x P' - n(n+1) P, valid away from the endpoints
    ddp = (2.0 * x * dp - degree * (degree + 1) * p) / (1.0 - x * x)
    return p, dp, ddp


def _legendre_batch(degree: int, x: np.ndarray) -> np.ndarray:
    p_prev, p_cur = np.ones_like(x), x.copy()
    if degree == 0:
        return p_prev
    for k in range(1, degree):
        p_prev, p_cur = p_cur, ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
    return p_cur


def _chebyshev_points(n: int) -> np.ndarray:
    # Chebyshev-Gauss-Lobatto points, ascending
    return np.cos(np.pi * np.arange(n - 1, -1, -1) / (n - 1))


@dataclass(frozen=True)
class Polynomial:
    """A polynomial of degree <= r-1 given by coefficients in a declared basis."""

    basis: BasisKind
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=float)))

    @property
    def size(self) -> int:
        return self.coeffs.size

    def __call__(self, x):
        vals = basis_matrix(self.basis, self.size, x) @ self.coeffs
        return float(vals[0]) if np.ndim(x) == 0 else vals

    def convert(self, kind: BasisKind) -> "Polynomial":
        """Re-express in another basis by sampling at Chebyshev points + least squares."""
        if kind is self.basis:
            return self
        r = self.size
        pts = _chebyshev_points(max(2 * r, 8))
        target = self(pts)
        design = basis_matrix(kind, r, pts)
        coeffs, *_ = np.linalg.lstsq(design, target, rcond=None)
        return Polynomial(kind, coeffs)

    def integral(self, a: float, b: float) -> float:
        """Exact integral over [a, b]."""
        return float(integrate_basis_all(self.basis, self.size, a, b) @ self.coeffs)
