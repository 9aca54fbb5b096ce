"""Fekete supports: LGL nodes, concatenated segments (both normalizations),
and uniform arc-length segments, plus the arc-radius sweep and a brute-force
grid oracle for small sizes.

Determinant conventions per problem: the non-normalized concatenated problem
reports the monomial hat-determinant (1/r!) prod(xi_j - xi_i); the normalized
problem reports the monomial normalized determinant, whose product form drops
adjacent gaps; the arc problem reports the ChebyshevU normalized determinant.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .arcmap import spectral_eigenvalues
from .polybasis import BasisKind, legendre_with_derivs
from .supports import ArcFamily, SupportSet, arc_to_supports, concat_from_nodes
from .vandermonde import (
    Mode,
    ProductForm,
    build,
    log_basis_change_det,
    product_formula_det,
    sign_log_det,
)

STATIONARITY_TOL = 1e-7


class FeketeError(RuntimeError):
    """A Fekete computation failed to converge or verify."""


@dataclass(frozen=True)
class OptimizerDiagnostics:
    starts: int
    iterations: int
    best_gap: float
    converged: bool


@dataclass(frozen=True)
class FeketeResult:
    set: SupportSet
    problem: str
    endpoints: tuple
    log_abs_det: float
    method: str  # "closed-form" or "optimized"
    diagnostics: OptimizerDiagnostics
    symmetric: bool
    non_unique: bool = False

    def to_json_dict(self) -> dict:
        return {
            "r": self.set.r,
            "mode": self.problem,
            "endpoints": [list(e) if isinstance(e, tuple) else e for e in self.endpoints],
            "log_abs_det": self.log_abs_det,
            "diagnostics": {
                "method": self.method,
                "starts": self.diagnostics.starts,
                "iterations": self.diagnostics.iterations,
                "best_gap": self.diagnostics.best_gap,
                "converged": self.diagnostics.converged,
                "symmetric": self.symmetric,
                "non_unique": self.non_unique,
            },
        }


_CLOSED_FORM = OptimizerDiagnostics(starts=0, iterations=0, best_gap=0.0, converged=True)


def _is_symmetric(sset: SupportSet, tol: float = 1e-8) -> bool:
    sups = sset.supports
    for s, m in zip(sups, reversed(sups)):
        if abs(s.alpha + m.beta) > tol or abs(s.beta + m.alpha) > tol:
            return False
    return True


def lgl_nodes(r: int) -> np.ndarray:
    """Legendre-Gauss-Lobatto nodes: +-1 and the roots of P'_{r-1}.

    Newton iteration from Chebyshev-Gauss-Lobatto guesses; the output is
    symmetrized and checked against the residual (1-x^2) P'_{r-1}(x).
    """
    if r < 2:
        raise ValueError("need at least two nodes")
    if r == 2:
        return np.array([-1.0, 1.0])
    degree = r - 1
    x = np.cos(np.pi * np.arange(r - 1, 0, -1)[1:] / (r - 1))  # interior CGL guesses, ascending
    for _ in range(200):
        _, dp, ddp = legendre_with_derivs(degree, x)
        step = dp / ddp
        x -= step
        if np.max(np.abs(step)) < 5e-16:
            break
    else:
        raise FeketeError(f"LGL Newton did not converge for r={r}")
    x = 0.5 * (x - x[::-1])  # exact symmetry
    nodes = np.concatenate(([-1.0], x, [1.0]))
    _, dp, _ = legendre_with_derivs(degree, nodes[1:-1])
    residual = np.max(np.abs((1.0 - nodes[1:-1] ** 2) * dp))
    # the residual polynomial scales like r, so its evaluation noise at the
    # converged roots grows ~ r^1.5 * eps; 1e-13 is attainable only up to r ~ 100
    tol = max(1e-13, 5e-16 * r**1.5)
    if residual > tol or np.any(np.diff(nodes) <= 0):
        raise FeketeError(f"LGL residual {residual:.2e} too large for r={r}")
    return nodes


def _verify_logdet(sset: SupportSet, mode: Mode, expected: float, tol: float = 1e-9) -> None:
    """Cross-check a closed-form log-determinant against the ChebyshevU matrix."""
    sign, logdet = sign_log_det(build(BasisKind.CHEBYSHEV_U, sset, mode))
    if sign == 0:
        raise FeketeError("determinant verification hit a singular matrix")
    gap = abs(logdet - log_basis_change_det(BasisKind.CHEBYSHEV_U, sset.r) - expected)
    if gap > tol:
        raise FeketeError(f"determinant verification failed: gap {gap:.2e}")


def fekete_concat_nonnormalized(r: int) -> FeketeResult:
    """Concatenated segments maximizing the non-normalized determinant.

    Closed form: the breakpoints are the LGL nodes of order r+1.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    nodes = lgl_nodes(r + 1)
    sset = concat_from_nodes(nodes)
    _, logdet = product_formula_det(nodes, ProductForm.CONCAT_HAT)
    _verify_logdet(sset, Mode.SEGMENTAL, logdet)
    return FeketeResult(
        sset, "c1-fekete", tuple(nodes), logdet, "closed-form", _CLOSED_FORM, _is_symmetric(sset)
    )


def _pair_mask(n: int) -> np.ndarray:
    return np.triu(np.ones((n, n), dtype=bool), k=2)


def _norm_objective(xs: np.ndarray, mask: np.ndarray):
    """F = sum over non-adjacent pairs of ln(xs_j - xs_i) and its gradient."""
    diff = xs[None, :] - xs[:, None]
    vals = diff[mask]
    if np.any(vals <= 0.0):
        return -math.inf, np.zeros_like(xs)
    ratio = np.zeros_like(diff)
    ratio[mask] = 1.0 / vals
    grad = ratio.sum(axis=0) - ratio.sum(axis=1)
    return float(np.log(vals).sum()), grad


def _xs_from_gaps(u: np.ndarray, n: int) -> np.ndarray:
    w = np.exp(u - u.max())
    gaps = 2.0 * w / w.sum()
    xs = np.empty(n)
    xs[0] = xs[1] = -1.0
    xs[2 : n - 2] = -1.0 + np.cumsum(gaps[:-1])
    xs[n - 2] = xs[n - 1] = 1.0
    return xs


def _pinned_minimize(u0: np.ndarray, n: int, mask: np.ndarray, gtol: float):
    n_free = n - 4

    def fun(u):
        xs = _xs_from_gaps(u, n)
        f, grad = _norm_objective(xs, mask)
        if not math.isfinite(f):
            return math.inf, np.zeros_like(u)
        w = np.exp(u - u.max())
        gaps = 2.0 * w / w.sum()
        g_free = grad[2 : n - 2]
        suffix = np.concatenate((np.cumsum(g_free[::-1])[::-1], [0.0]))
        du = gaps * (suffix - 0.5 * np.dot(gaps, suffix))
        return -f, -du

    return optimize.minimize(
        fun, u0, jac=True, method="L-BFGS-B",
        options={"maxiter": 5000, "ftol": 1e-15, "gtol": min(gtol, 1e-11)},
    ), n_free


def _newton_polish(xs: np.ndarray, mask: np.ndarray, max_iter: int = 60) -> np.ndarray:
    """Drive the free-coordinate gradient to machine level from a near-optimum."""
    n = xs.size
    free = slice(2, n - 2)
    if n <= 4:
        return xs
    xs = xs.copy()
    f_cur, grad = _norm_objective(xs, mask)
    for _ in range(max_iter):
        g_free = grad[free]
        if np.max(np.abs(g_free)) < 1e-12:
            break
        pts = xs[free]
        diff = xs[None, :] - xs[:, None]
        inv_sq = np.zeros_like(diff)
        inv_sq[mask] = 1.0 / diff[mask] ** 2
        inv_sq = inv_sq + inv_sq.T
        idx = np.arange(2, n - 2)
        # d2F/dxi_k dxi_l = 1/(xi_k - xi_l)^2 off the diagonal (non-adjacent),
        # and -sum_j 1/(xi_k - xi_j)^2 on it
        hess = inv_sq[np.ix_(idx, idx)] - np.diag(inv_sq[idx, :].sum(axis=1))
        try:
            step = np.linalg.solve(hess, -g_free)
        except np.linalg.LinAlgError:
            break
        scale = 1.0
        improved = False
        while scale > 1e-10:
            cand = xs.copy()
            cand[free] = pts + scale * step
            f_new, g_new = _norm_objective(cand, mask)
            if f_new >= f_cur and math.isfinite(f_new):
                xs, f_cur, grad = cand, f_new, g_new
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
    return xs


def _optimize_pinned(r: int, starts: int, seed: int, tol: float):
    n = r + 1
    mask = _pair_mask(n)
    n_gaps = r - 2
    attempts = 0
    starts_eff = starts
    while True:
        candidates = []
        iterations = 0
        for s in range(starts_eff):
            if s == 0:
                u0 = np.zeros(n_gaps)
            else:
                rng = np.random.default_rng([seed, attempts, s])
                u0 = 0.5 * rng.standard_normal(n_gaps)
            res, _ = _pinned_minimize(u0, n, mask, tol)
            iterations += int(res.nit)
            xs = _xs_from_gaps(res.x, n)
            f, _ = _norm_objective(xs, mask)
            candidates.append((f, tuple(xs)))
        candidates.sort(key=lambda c: (-c[0], c[1]))
        best_f, best_xs = candidates[0]
        xs = _newton_polish(np.array(best_xs), mask)
        best_f, _ = _norm_objective(xs, mask)
        mirrored = 0.5 * (xs - xs[::-1])
        mirrored[0] = mirrored[1] = -1.0
        mirrored[-2] = mirrored[-1] = 1.0
        f_mirror, _ = _norm_objective(mirrored, mask)
        if f_mirror >= best_f:
            xs, best_f = mirrored, f_mirror
        _, grad = _norm_objective(xs, mask)
        gap = float(np.max(np.abs(grad[2 : n - 2]))) if n > 4 else 0.0
        if gap <= STATIONARITY_TOL:
            return xs, OptimizerDiagnostics(starts_eff, iterations, gap, True)
        attempts += 1
        if starts_eff >= 4 * starts:
            raise FeketeError(f"normalized Fekete optimizer stalled at gradient {gap:.2e} for r={r}")
        starts_eff = min(2 * starts_eff, 4 * starts)


def _optimize_unpinned(r: int, tol: float):
    """Diagnostic run with no endpoints pinned; interior-point on the raw breakpoints."""
    n = r + 1
    mask = _pair_mask(n)
    x0 = np.linspace(-0.95, 0.95, n)
    diff = np.zeros((n - 1, n))
    for i in range(n - 1):
        diff[i, i], diff[i, i + 1] = -1.0, 1.0

    def fun(xs):
        f, _ = _norm_objective(xs, mask)
        return math.inf if not math.isfinite(f) else -f

    def jac(xs):
        _, grad = _norm_objective(xs, mask)
        return -grad

    with warnings.catch_warnings():
        # at the collapsed corner the BFGS update sees a flat direction
        warnings.filterwarnings("ignore", message="delta_grad == 0.0")
        res = optimize.minimize(
            fun, x0, jac=jac, method="trust-constr",
            bounds=optimize.Bounds(-np.ones(n), np.ones(n)),
            constraints=[optimize.LinearConstraint(diff, 0.0, np.inf)],
            options={"gtol": 1e-14, "xtol": 1e-16, "barrier_tol": 1e-14, "maxiter": 10000},
        )
    xs = np.sort(np.clip(res.x, -1.0, 1.0))
    f, grad = _norm_objective(xs, mask)
    gap = float(np.max(np.abs(grad[2 : n - 2]))) if n > 4 else 0.0
    return xs, OptimizerDiagnostics(1, int(res.nit), gap, bool(res.success))


def fekete_concat_normalized(
    r: int, *, starts: int = 16, seed: int = 0, tol: float = 1e-10, pinned: bool = True
) -> FeketeResult:
    """Concatenated segments maximizing the normalized determinant.

    For r >= 3 the extremal breakpoints satisfy xi_1 = xi_2 = -1 and
    xi_r = xi_{r+1} = 1 (the two outer segments collapse to nodes); the
    default run pins them and optimizes the interior breakpoints through a
    log-gap parametrization.  `pinned=False` is the diagnostic mode that lets
    the optimizer discover the collapse on its own.  r = 1 and r = 2 have
    degenerate objectives; the symmetric convention is returned and flagged
    as non-unique.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if r <= 2:
        xs = np.array([-1.0, 1.0]) if r == 1 else np.array([-1.0, 0.0, 1.0])
        _, logdet = product_formula_det(xs, ProductForm.CONCAT_NORMALIZED)
        sset = concat_from_nodes(xs)
        return FeketeResult(
            sset, "c1-fekete-normalized", tuple(xs), logdet, "closed-form",
            _CLOSED_FORM, True, non_unique=True,
        )
    if r == 3 and pinned:
        xs = np.array([-1.0, -1.0, 1.0, 1.0])
        diag = _CLOSED_FORM
        method = "closed-form"
    elif pinned:
        xs, diag = _optimize_pinned(r, starts, seed, tol)
        method = "optimized"
    else:
        xs, diag = _optimize_unpinned(r, tol)
        method = "optimized"
    _, logdet = product_formula_det(xs, ProductForm.CONCAT_NORMALIZED)
    sset = concat_from_nodes(xs)
    _verify_logdet(sset, Mode.NORMALIZED, logdet, tol=1e-8)
    return FeketeResult(
        sset, "c1-fekete-normalized", tuple(xs), logdet, method, diag, _is_symmetric(sset)
    )


def fekete_arc(r: int, rho: float) -> FeketeResult:
    """Uniform arc-length segments maximizing the normalized determinant.

    Closed form: arc-midpoints cos(tau_i) = xi_i * cos(rho) with xi the LGL
    nodes of order r.  Requires 0 < rho < pi/r so the diagonal spectral factor
    stays positive; the factorization |det V(S)| = |det V(T)| * prod mu_j is
    verified on every call.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if not 0.0 < rho < math.pi / r:
        raise ValueError(f"arc-radius {rho} outside (0, pi/{r})")
    xi = lgl_nodes(r)
    mids = xi * math.cos(rho)
    # arccos near +-1 loses ~1e-10 absolutely; the extreme taus are exactly rho
    # and pi - rho, so clamp before the family validates its bounds
    taus = np.clip(np.arccos(mids[::-1]), rho, math.pi - rho)
    fam = ArcFamily(rho, tuple(taus))
    sset = arc_to_supports(fam)
    sys = build(BasisKind.CHEBYSHEV_U, sset, Mode.NORMALIZED)
    sign, logdet = sign_log_det(sys)
    nodal = build(BasisKind.CHEBYSHEV_U, SupportSet.from_nodes(mids), Mode.NODAL)
    _, log_nodal = sign_log_det(nodal)
    mu = spectral_eigenvalues(rho, r)
    gap = abs(logdet - (log_nodal + float(np.sum(np.log(mu)))))
    if sign == 0 or gap > 1e-9:
        raise FeketeError(f"arc determinant factorization failed: gap {gap:.2e}")
    endpoints = tuple((s.alpha, s.beta) for s in sset.supports)
    return FeketeResult(
        sset, "c2-fekete", endpoints, logdet, "closed-form", _CLOSED_FORM, _is_symmetric(sset)
    )


@dataclass(frozen=True)
class RhoRow:
    rho: float
    log_abs_det: float
    error: str | None = None


def det_rho_sweep(r: int, rho_grid) -> list:
    """log|det| of the arc-family Fekete solution over an arc-radius grid.

    The determinant decreases strictly in rho and approaches the nodal LGL
    determinant as rho -> 0.  Failures propagate per row.
    """
    rows = []
    for rho in rho_grid:
        try:
            rows.append(RhoRow(float(rho), fekete_arc(r, float(rho)).log_abs_det))
        except Exception as exc:  # noqa: BLE001 - per-row propagation by contract
            rows.append(RhoRow(float(rho), math.nan, f"{type(exc).__name__}: {exc}"))
    return rows


def nodal_logdet_chebu(r: int) -> float:
    """log|det| of the nodal ChebyshevU Vandermonde at the LGL nodes (rho -> 0 limit)."""
    sys = build(BasisKind.CHEBYSHEV_U, SupportSet.from_nodes(lgl_nodes(r)), Mode.NODAL)
    _, logdet = sign_log_det(sys)
    return logdet


def _symmetric_vector(free: np.ndarray, size: int) -> np.ndarray:
    """Assemble [-1, -t_k.., (0,) .., t_k, 1] from ascending free values."""
    m = size - 2
    parts = [np.array([-1.0]), -free[::-1]]
    if m % 2 == 1:
        parts.append(np.array([0.0]))
    parts.extend([free, np.array([1.0])])
    return np.concatenate(parts)


def fekete_nodes_bruteforce(r: int, grid_step: float = 0.01, which: str = "nodes") -> np.ndarray:
    """Independent grid-search oracle for the small Fekete problems (r <= 6).

    which="nodes" maximizes the full pairwise product over symmetric node
    vectors with endpoints +-1; which="concat-normalized" maximizes the
    normalized concatenated product over symmetric breakpoints, where the free
    values may reach 1 (collapsed outer segments).  An exhaustive symmetric
    grid scan is followed by a Nelder-Mead polish.
    """
    if r > 6:
        raise ValueError("brute force is limited to r <= 6")
    if which == "nodes":
        size = r
        allow_one = False
    elif which == "concat-normalized":
        size = r + 1
        allow_one = True
    else:
        raise ValueError("which must be 'nodes' or 'concat-normalized'")
    m = size - 2
    k = m // 2

    def objective(free: np.ndarray) -> float:
        if k:
            if np.any(np.diff(free) <= 0):
                return -math.inf
            if free[0] <= 0 or free[-1] > (1.0 if allow_one else 1.0 - 1e-12):
                return -math.inf
        xs = _symmetric_vector(free, size)
        if which == "nodes":
            diffs = xs[None, :] - xs[:, None]
            vals = diffs[np.triu_indices(size, k=1)]
            if np.any(vals <= 0):
                return -math.inf
            return float(np.log(vals).sum())
        sign, logdet = product_formula_det(xs, ProductForm.CONCAT_NORMALIZED)
        return logdet if sign != 0 else -math.inf

    if k == 0:
        return _symmetric_vector(np.empty(0), size)

    stop = 1.0 + grid_step / 2 if allow_one else 1.0 - grid_step / 2
    ticks = np.arange(grid_step, stop, grid_step)
    best_free, best_val = None, -math.inf
    for combo in itertools.combinations(ticks, k):
        free = np.array(combo)
        val = objective(free)
        if val > best_val:
            best_free, best_val = free, val
    res = optimize.minimize(
        lambda t: -objective(np.asarray(t)), best_free, method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
    )
    free = np.asarray(res.x) if -res.fun >= best_val else best_free
    return _symmetric_vector(np.sort(np.abs(free)), size)
