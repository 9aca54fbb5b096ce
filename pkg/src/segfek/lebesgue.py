"""Lebesgue constants for nodal, segmental and mixed support sets.

The functional evaluated is sum_i |ell_i(x)| with the length weighting
|s_i| |ell_hat_i(x)| in segmental mode, so all three modes compute the same
quantity.  The evaluation grid is Chebyshev-distributed (maxima cluster near
the endpoints) and the best local maxima are polished by golden-section
search, which tolerates the kinks of the absolute-value sum.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .polybasis import BasisKind
from .supports import SupportSet, check_regular
from .vandermonde import Mode, build, lagrange_basis

# Kharshiladze-Lozinski floor: every projector norm is >= this
def lower_bound_floor(r: int) -> float:
    if r < 2:
        return 1.0
    return (2.0 / math.pi**2) * math.log(r - 1) - 0.5


def _grid_scale() -> int:
    scale = int(os.environ.get("FEKETE_GRID_SCALE", "1"))
    if scale < 1:
        raise ValueError("FEKETE_GRID_SCALE must be a positive integer")
    return scale


def chebyshev_grid(n: int) -> np.ndarray:
    """n Chebyshev-Gauss-Lobatto points on [-1, 1], ascending (denser near +-1)."""
    return np.cos(np.pi * np.arange(n - 1, -1, -1) / (n - 1))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fun, a: float, b: float, xtol: float = 1e-10):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def _refined_max(fun, grid: np.ndarray, n_local: int = 10, xtol: float = 1e-10):
    """Grid scan followed by golden-section polish around the best local maxima."""
    vals = fun(grid)
    interior = np.zeros(grid.size, dtype=bool)
    interior[1:-1] = (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    interior[0] = vals[0] >= vals[1]
    interior[-1] = vals[-1] >= vals[-2]
    candidates = np.nonzero(interior)[0]
    candidates = candidates[np.argsort(vals[candidates])[::-1][:n_local]]
    grid_best_idx = int(np.argmax(vals))
    best_x, best_val = float(grid[grid_best_idx]), float(vals[grid_best_idx])
    scalar = lambda t: float(fun(np.array([t]))[0])
    for idx in candidates:
        lo = grid[max(idx - 1, 0)]
        hi = grid[min(idx + 1, grid.size - 1)]
        if hi - lo <= xtol:
            continue
        x, v = _golden_max(scalar, float(lo), float(hi), xtol)
        if v > best_val:
            best_x, best_val = x, v
    return best_x, best_val, float(vals[grid_best_idx])


@dataclass(frozen=True)
class LebesgueEstimate:
    value: float
    argmax_x: float
    grid_size: int
    refined: bool
    upper_bound_only: bool = False


def lebesgue_constant(sset: SupportSet, basis: BasisKind, mode: Mode) -> LebesgueEstimate:
    """Estimate sup_x sum_i |ell_i(x)| on [-1, 1].

    For irregular sets the value is still computed but flagged: it is then
    only an upper bound for the operator norm.
    """
    sys = build(basis, sset, mode)
    lag = lagrange_basis(sys)
    weights = sset.lengths if mode is Mode.SEGMENTAL else np.ones(sset.r)
    n = max(2000, 50 * sset.r) * _grid_scale()
    grid = np.union1d(chebyshev_grid(n), sset.midpoints)
    fun = lambda x: np.abs(lag.evaluate(x)) @ weights
    best_x, best_val, grid_val = _refined_max(fun, grid)
    refined = (best_val - grid_val) < 1e-6 * best_val
    regular = check_regular(sset).is_regular
    return LebesgueEstimate(best_val, best_x, int(grid.size), refined, not regular)


@dataclass(frozen=True)
class GrowthRow:
    r: int
    lebesgue: float
    argmax_x: float
    grid_size: int
    error: str | None = None


def growth_profile(family, r_values, basis: BasisKind, mode: Mode):
    """Lebesgue constants for family(r) over the requested degrees.

    Rows are independent; a failing row is reported with its error message
    rather than dropped.
    """
    rows = []
    for r in r_values:
        try:
            est = lebesgue_constant(family(r), basis, mode)
            rows.append(GrowthRow(int(r), est.value, est.argmax_x, est.grid_size))
        except Exception as exc:  # noqa: BLE001 - per-row propagation by contract
            rows.append(GrowthRow(int(r), math.nan, math.nan, 0, f"{type(exc).__name__}: {exc}"))
    return rows


def rows_to_csv(rows) -> str:
    lines = ["r,lebesgue,argmax_x,grid_size"]
    for row in rows:
        lines.append(f"{row.r},{row.lebesgue:.17g},{row.argmax_x:.17g},{row.grid_size}")
    return "\n".join(lines) + "\n"


def fejer_sum_sq(sset: SupportSet, basis: BasisKind = BasisKind.CHEBYSHEV_U) -> float:
    """Max over [-1, 1] of sum_i ell_i(x)^2 for a nodal set.

    Equals 1 exactly at the Fekete (Legendre-Gauss-Lobatto) nodes and exceeds
    1 for non-extremal node sets.
    """
    if not sset.all_nodes:
        raise ValueError("the squared-sum condition applies to node sets")
    sys = build(basis, sset, Mode.NODAL)
    lag = lagrange_basis(sys)
    n = max(2000, 50 * sset.r) * _grid_scale()
    grid = np.union1d(chebyshev_grid(n), sset.midpoints)
    fun = lambda x: np.sum(lag.evaluate(x) ** 2, axis=1)
    _, best_val, _ = _refined_max(fun, grid)
    return best_val
