"""Supports (nodes and segments) on [-1, 1] and their regularity rules.

A support is a closed interval [alpha, beta]; a node is the degenerate case
beta - alpha <= EPS_LEN.  Support sets carry an optional class tag: "C1" for
concatenated segments built from breakpoints, "C2" for uniform arc-length
families, "general" otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

# Single global node/segment threshold for the node-vs-segment trichotomy.
EPS_LEN = 1e-12

_CLASS_TAGS = ("C1", "C2", "general")


@dataclass(frozen=True)
class Support:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if b < a:
            raise ValueError(f"support endpoints out of order: [{a}, {b}]")
        if a < -1.0 - 1e-9 or b > 1.0 + 1e-9:
            raise ValueError(f"support [{a}, {b}] outside [-1, 1]")
        object.__setattr__(self, "alpha", max(a, -1.0))
        object.__setattr__(self, "beta", min(b, 1.0))

    @classmethod
    def node(cls, x: float) -> "Support":
        return cls(x, x)

    @property
    def length(self) -> float:
        return self.beta - self.alpha

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.alpha + self.beta)

    @property
    def is_node(self) -> bool:
        return self.length <= EPS_LEN


@dataclass(frozen=True)
class SupportSet:
    supports: tuple
    class_tag: str = "general"

    def __post_init__(self):
        sups = tuple(s if isinstance(s, Support) else Support(*s) for s in self.supports)
        if len(sups) < 1:
            raise ValueError("a support set needs at least one support")
        if self.class_tag not in _CLASS_TAGS:
            raise ValueError(f"unknown class tag {self.class_tag!r}")
        # canonical order: ascending midpoints
        sups = tuple(sorted(sups, key=lambda s: s.midpoint))
        object.__setattr__(self, "supports", sups)

    @property
    def r(self) -> int:
        return len(self.supports)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([s.length for s in self.supports])

    @property
    def midpoints(self) -> np.ndarray:
        return np.array([s.midpoint for s in self.supports])

    @property
    def all_nodes(self) -> bool:
        return all(s.is_node for s in self.supports)

    @property
    def all_segments(self) -> bool:
        return all(not s.is_node for s in self.supports)

    def to_json(self) -> str:
        return json.dumps(
            {"supports": [[s.alpha, s.beta] for s in self.supports], "class": self.class_tag}
        )

    @classmethod
    def from_json(cls, text: str) -> "SupportSet":
        data = json.loads(text)
        return cls(tuple(Support(a, b) for a, b in data["supports"]), data.get("class", "general"))

    @classmethod
    def from_nodes(cls, xs) -> "SupportSet":
        return cls(tuple(Support.node(float(x)) for x in xs))


@dataclass(frozen=True)
class RegularityReport:
    is_regular: bool
    violations: tuple = field(default_factory=tuple)


def check_regular(sset: SupportSet) -> RegularityReport:
    """Check the three regularity conditions guaranteeing unisolvence.

    (i) nodes pairwise distinct, (ii) segments overlap at most in their
    endpoints, (iii) no node interior to a segment.  Endpoint coincidence is
    judged with the EPS_LEN tolerance; the verdict does not depend on the
    input order.
    """
    nodes = [(i, s) for i, s in enumerate(sset.supports) if s.is_node]
    segments = [(i, s) for i, s in enumerate(sset.supports) if not s.is_node]
    violations = []
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            (i, si), (j, sj) = nodes[a], nodes[b]
            if abs(si.midpoint - sj.midpoint) <= EPS_LEN:
                violations.append(f"(i) coincident nodes #{i} and #{j} at {si.midpoint:.6g}")
    for a in range(len(segments)):
        for b in range(a + 1, len(segments)):
            (i, si), (j, sj) = segments[a], segments[b]
            overlap = min(si.beta, sj.beta) - max(si.alpha, sj.alpha)
            if overlap > EPS_LEN:
                violations.append(f"(ii) segments #{i} and #{j} overlap by {overlap:.6g}")
    for i, node in nodes:
        x = node.midpoint
        for j, seg in segments:
            if seg.alpha + EPS_LEN < x < seg.beta - EPS_LEN:
                violations.append(f"(iii) node #{i} interior to segment #{j}")
    return RegularityReport(not violations, tuple(violations))


@dataclass(frozen=True)
class ArcFamily:
    """Segments of uniform arc-length 2*rho with arc-midpoints cos(tau_i)."""

    rho: float
    taus: tuple

    def __post_init__(self):
        rho = float(self.rho)
        taus = tuple(float(t) for t in self.taus)
        if not 0.0 < rho < math.pi / 2:
            raise ValueError(f"arc-radius {rho} outside (0, pi/2)")
        if any(t2 <= t1 for t1, t2 in zip(taus, taus[1:])):
            raise ValueError("taus must be strictly increasing")
        if taus[0] < rho - 1e-12 or taus[-1] > math.pi - rho + 1e-12:
            raise ValueError("arc-midpoints leave I_rho: need rho <= tau <= pi - rho")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "taus", taus)

    @property
    def r(self) -> int:
        return len(self.taus)

    @property
    def arc_midpoints(self) -> np.ndarray:
        return np.cos(np.array(self.taus))


def arc_to_supports(fam: ArcFamily) -> SupportSet:
    """Build the C2 support set [cos(tau+rho), cos(tau-rho)] from an arc family.

    Supports come out sorted by midpoint, i.e. in the order of decreasing tau.
    """
    sups = []
    for t in fam.taus:
        alpha = math.cos(t + fam.rho)
        beta = math.cos(t - fam.rho)
        sups.append(Support(alpha, beta))
    return SupportSet(tuple(sups), class_tag="C2")


def arc_parameters(sset: SupportSet):
    """Recover (rho, taus) from a C2 support set; taus aligned with the supports.

    The angles are tau = (arccos(alpha) + arccos(beta))/2 and
    rho = (arccos(alpha) - arccos(beta))/2, which must be uniform over the set.
    """
    alphas = np.clip(np.array([s.alpha for s in sset.supports]), -1.0, 1.0)
    betas = np.clip(np.array([s.beta for s in sset.supports]), -1.0, 1.0)
    theta_a = np.arccos(alphas)
    theta_b = np.arccos(betas)
    taus = 0.5 * (theta_a + theta_b)
    rhos = 0.5 * (theta_a - theta_b)
    if rhos.max() - rhos.min() > 1e-8:
        raise ValueError("supports do not share a common arc-radius")
    return float(rhos.mean()), taus


def concat_from_nodes(xs) -> SupportSet:
    """Concatenated segments [x_i, x_{i+1}] from r+1 sorted breakpoints (class C1).

    Equal adjacent breakpoints yield degenerate node supports.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size < 2:
        raise ValueError("need a vector of at least two breakpoints")
    if np.any(np.diff(xs) < 0):
        raise ValueError("breakpoints must be sorted")
    sups = tuple(Support(xs[i], xs[i + 1]) for i in range(xs.size - 1))
    return SupportSet(sups, class_tag="C1")
