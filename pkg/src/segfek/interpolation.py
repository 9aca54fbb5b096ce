"""Apply the interpolation operators to user functions.

Sampling (point values, segment integrals, segment averages) is separated
from solving so cached samples can be reused; segmental and normalized data
differ only by the length scaling.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.integrate import quad

from .polybasis import BasisKind, Polynomial
from .supports import Support, SupportSet
from .vandermonde import Mode, build, lagrange_basis, sign_log_det

QUAD_ABS_TOL = 1e-11
QUAD_LEVEL_CAP = 50


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested absolute tolerance."""


def _adaptive_integral(f, a: float, b: float) -> float:
    out = quad(f, a, b, epsabs=QUAD_ABS_TOL, epsrel=0.0, limit=QUAD_LEVEL_CAP, full_output=True)
    value, abserr = out[0], out[1]
    if len(out) > 3:  # QUADPACK flagged the run; out[3] is its message
        if abserr > 1e-8:
            raise QuadratureError(
                f"integral over [{a}, {b}] did not converge (error estimate {abserr:.2e}): {out[3]}"
            )
        warnings.warn(f"quadrature refinement cap on [{a}, {b}]: {out[3]}", stacklevel=2)
    return value


def segment_integral(f, support: Support) -> float:
    """Integral of f over a segment by adaptive Gauss-Kronrod quadrature."""
    if support.is_node:
        raise ValueError("segment integral of a degenerate support; use average()")
    return _adaptive_integral(f, support.alpha, support.beta)


def average(f, support: Support) -> float:
    """The data functional: f(xi) on a node, mean value of f on a segment."""
    if support.is_node:
        return float(f(support.midpoint))
    return _adaptive_integral(f, support.alpha, support.beta) / support.length


def data_vector(f, sset: SupportSet, mode: Mode) -> np.ndarray:
    """Sample f as required by the mode: values, integrals, or averages."""
    if mode is Mode.NODAL:
        return np.array([float(f(s.midpoint)) for s in sset.supports])
    if mode is Mode.SEGMENTAL:
        return np.array([segment_integral(f, s) for s in sset.supports])
    return np.array([average(f, s) for s in sset.supports])


def interpolate(sset: SupportSet, basis: BasisKind, mode: Mode, f) -> Polynomial:
    """Interpolating polynomial of degree r-1 matching the sampled data.

    Solves V c = d, which is the coefficient form of sum_i d_i ell_i; for
    f already in P_{r-1} this reproduces f (projector property).
    """
    sys = build(basis, sset, mode)
    sign, _ = sign_log_det(sys)
    if sign == 0:
        raise np.linalg.LinAlgError("singular Vandermonde system")
    d = data_vector(f, sset, mode)
    coeffs = np.linalg.solve(sys.matrix, d)
    return Polynomial(basis, coeffs)


def idempotence_check(sset: SupportSet, basis: BasisKind, mode: Mode, f, grid_size: int = 1000) -> float:
    """Max deviation between Pi(Pi f) and Pi f.

    Both a sup-norm on an evaluation grid and a direct ChebyshevU coefficient
    comparison are taken; the reported value is the larger of the two, so
    basis-level drift cannot hide behind a benign grid.
    """
    p1 = interpolate(sset, basis, mode, f)
    p2 = interpolate(sset, basis, mode, p1)
    grid = np.linspace(-1.0, 1.0, grid_size)
    grid_dev = float(np.max(np.abs(p2(grid) - p1(grid))))
    c1 = p1.convert(BasisKind.CHEBYSHEV_U).coeffs
    c2 = p2.convert(BasisKind.CHEBYSHEV_U).coeffs
    coeff_dev = float(np.max(np.abs(c2 - c1)))
    return max(grid_dev, coeff_dev)


def _runge(x):
    return 1.0 / (1.0 + 25.0 * np.asarray(x) ** 2)


def _step(x):
    return np.sign(np.asarray(x, dtype=float))


TEST_FUNCTIONS = {
    "runge": _runge,
    "abs": lambda x: np.abs(np.asarray(x, dtype=float)),
    "step": _step,
    "exp": lambda x: np.exp(np.asarray(x, dtype=float)),
}


def get_test_function(name: str):
    """Look up a registry function; "poly:c0,c1,..." builds a monomial polynomial."""
    if name.startswith("poly:"):
        coeffs = [float(c) for c in name[5:].split(",") if c.strip()]
        if not coeffs:
            raise ValueError("poly: needs at least one coefficient")
        return Polynomial(BasisKind.MONOMIAL, np.array(coeffs))
    try:
        return TEST_FUNCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown test function {name!r}; have {sorted(TEST_FUNCTIONS)} and poly:<coeffs>") from None
