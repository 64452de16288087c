"""Circuit-depth bound arithmetic and a combinatorial causal-cone simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..constraints import make_rng
from ..errors import InvalidArgument
from ..lattice import Lattice, subset_diameter


def _positive(name: str, x) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise InvalidArgument(f"{name} must be a positive integer, got {x!r}")
    return x


def depth_threshold(P: int, L: int) -> Fraction:
    """Lattice diameter above which an L-layer, patch-P circuit cannot prepare Psi."""
    return Fraction(16, 3) * P * L - Fraction(8, 3) * P + Fraction(5, 3)


def depth_bound(P: int, L: int) -> dict:
    P = _positive("P", P)
    L = _positive("L", L)
    thr = depth_threshold(P, L)
    g = 1
    while (1 << g) - 1 < thr:
        g += 1
    return {"threshold": thr, "min_generation": g, "dj_cap": (2 * L - 1) * P}


def inverse_depth_bound(diameter: int, P: int) -> dict:
    """Strict lower bound on L, and the smallest integer depth satisfying it."""
    P = _positive("P", P)
    if not isinstance(diameter, int) or diameter < 0:
        raise InvalidArgument("diameter must be a nonnegative integer")
    bound = Fraction(3 * diameter, 16 * P) + Fraction(1, 2) - Fraction(5, 16 * P)
    return {"l_strict_lower": bound, "min_depth": math.floor(bound) + 1}


# ----------------------------------------------------------------------
# causal cone
# ----------------------------------------------------------------------
def random_patch_partition(lattice: Lattice, P: int, rng) -> list[frozenset[int]]:
    """Cover the lattice with disjoint connected patches of induced diameter <= P."""
    uncovered = set(lattice.vertices)
    order = list(lattice.vertices)
    rng.shuffle(order)
    patches = []
    for seed in order:
        if seed not in uncovered:
            continue
        patch = {seed}
        uncovered.discard(seed)
        frontier = [w for w in lattice.neighbors(seed) if w in uncovered]
        while frontier:
            w = frontier.pop(int(rng.integers(len(frontier))))
            if w not in uncovered:
                continue
            if subset_diameter(lattice, patch | {w}) > P:
                continue
            patch.add(w)
            uncovered.discard(w)
            frontier.extend(u for u in lattice.neighbors(w) if u in uncovered)
        patches.append(frozenset(patch))
    return patches


def grow_support(support: set[int], patches: list[frozenset[int]]) -> set[int]:
    grown = set(support)
    for p in patches:
        if p & support:
            grown |= p
    return grown


@dataclass
class CausalConeReport:
    generation: int
    P: int
    L: int
    cap: int
    starts: int
    max_diameter: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "generation": self.generation,
            "P": self.P,
            "L": self.L,
            "cap": self.cap,
            "starts": self.starts,
            "max_diameter": self.max_diameter,
            "violations": self.violations,
            "passed": self.passed,
        }


def causal_cone_check(lattice: Lattice, P: int, L: int, seed: int = 0, starts: int = 1000) -> CausalConeReport:
    """Grow single-vertex supports through L random patch layers.

    A support meeting a patch absorbs all of it.  The first layer adds at
    most P to the diameter and later layers at most 2P, so the final
    diameter stays within (2L-1)P; the graph diameter of the support (an
    upper bound on what the circuit can spread) is what gets checked.
    """
    P = _positive("P", P)
    if not isinstance(L, int) or L < 0:
        raise InvalidArgument("L must be a nonnegative integer")
    cap = max(0, (2 * L - 1) * P)
    rng = make_rng(seed)
    report = CausalConeReport(lattice.generation, P, L, cap, starts)
    for k in range(starts):
        v = int(rng.integers(lattice.n_vertices))
        support = {v}
        for _ in range(L):
            support = grow_support(support, random_patch_partition(lattice, P, rng))
        d = _graph_diameter(lattice, support)
        report.max_diameter = max(report.max_diameter, d)
        if d > cap:
            report.violations.append({"start": v, "trial": k, "diameter": d})
    return report


def _graph_diameter(lattice: Lattice, subset: set[int]) -> int:
    best = 0
    for v in subset:
        dist = lattice.bfs(v)
        best = max(best, max(dist[w] for w in subset))
    return best
