"""Named support families used by the CLI, growth studies and tests."""

from __future__ import annotations

import math

import numpy as np

from .fekete import (
    FeketeResult,
    fekete_arc,
    fekete_concat_nonnormalized,
    fekete_concat_normalized,
    lgl_nodes,
)
from .supports import SupportSet, concat_from_nodes

NODE_FAMILIES = ("lgl", "uniform-nodes")
SEGMENT_FAMILIES = ("c1-fekete", "c1-fekete-normalized", "c2-fekete", "uniform-c1")
ALL_FAMILIES = NODE_FAMILIES + SEGMENT_FAMILIES


def random_spaced_breakpoints(rng, count: int, min_gap: float = 0.05) -> np.ndarray:
    """Random sorted vector in [-1, 1] with a guaranteed minimum separation.

    Gaps are min_gap plus exponential slack rescaled to fill the interval.
    The separation keeps monomial Vandermonde determinants certifiable in
    double precision; clustered draws make the matrix-vs-product comparison
    meaningless long before the formulas are at fault.
    """
    slack = 2.0 - (count + 1) * min_gap
    if slack <= 0:
        raise ValueError(f"cannot place {count} points with min gap {min_gap}")
    w = rng.exponential(1.0, count + 1)
    gaps = min_gap + slack * w / w.sum()
    return -1.0 + np.cumsum(gaps)[:-1]


def family_nodes(name: str, r: int) -> np.ndarray:
    if name == "lgl":
        return lgl_nodes(r)
    if name == "uniform-nodes":
        return np.linspace(-1.0, 1.0, r)
    raise ValueError(f"unknown node family {name!r}")


def family_result(name: str, r: int, *, lam: float = 0.5, seed: int = 0, starts: int = 16):
    """FeketeResult for the Fekete families, None for the reference families."""
    if name == "c1-fekete":
        return fekete_concat_nonnormalized(r)
    if name == "c1-fekete-normalized":
        return fekete_concat_normalized(r, starts=starts, seed=seed)
    if name == "c2-fekete":
        if not 0.0 < lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")
        return fekete_arc(r, lam * math.pi / r)
    return None


def support_family(
    name: str, r: int, *, lam: float = 0.5, seed: int = 0, starts: int = 16
) -> SupportSet:
    """Build the named support set of size r."""
    if name in NODE_FAMILIES:
        return SupportSet.from_nodes(family_nodes(name, r))
    if name == "uniform-c1":
        return concat_from_nodes(np.linspace(-1.0, 1.0, r + 1))
    result = family_result(name, r, lam=lam, seed=seed, starts=starts)
    if isinstance(result, FeketeResult):
        return result.set
    raise ValueError(f"unknown family {name!r}; have {ALL_FAMILIES}")
