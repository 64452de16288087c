"""Products of single-site S gates that flip a prescribed set of loop parities.

S^k at vertex v recolours the two sides other than ``k`` and therefore flips
the two loops carrying them.  Finding a product with a given net flip pattern
is a GF(2) solve over the columns ``(v, k)``; forbidding vertices just drops
their columns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..algebra import s_sides
from ..constraints import build_system, sample_solution, syndrome_mask
from ..lattice import Lattice, largest_four_loops
from ..states import (
    CosetState,
    LocalOperator,
    apply_gates,
    build_phi,
    build_psi,
    materialize,
    matrix_element,
    s_placements,
)
from ..algebra import s_perm

SFlip = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class FlipperQuery:
    target: int  # loop mask
    forbidden: frozenset[int] = frozenset()


def s_flip_mask(lattice: Lattice, v: int, k: int) -> int:
    m = 0
    for s in s_sides(k):
        m ^= 1 << lattice.loop_at(v, s)
    return m


def four_loop_mask(lattice: Lattice) -> int:
    m = 0
    for i in largest_four_loops(lattice):
        m |= 1 << i
    return m


def _merge(chosen: Iterable[tuple[int, int]]) -> SFlip:
    # S^1 S^2 = S^3 on one site
    per: dict[int, int] = {}
    for v, k in chosen:
        per[v] = per.get(v, 0) ^ k
    return tuple(sorted((v, k) for v, k in per.items() if k))


def product_flip_mask(lattice: Lattice, flipper: Sequence[tuple[int, int]]) -> int:
    m = 0
    for v, k in flipper:
        m ^= s_flip_mask(lattice, v, k)
    return m


def find_syndrome_flipper(
    lattice: Lattice,
    query: FlipperQuery | None = None,
    *,
    forbidden: Iterable[int] = (),
    min_weight_search: int = 3,
) -> SFlip | None:
    """An S-product avoiding ``forbidden`` whose flip pattern is ``query.target``.

    Products on up to ``min_weight_search`` sites are searched exhaustively
    first (smallest first); otherwise any GF(2) solution is returned.
    ``None`` means no such product exists.
    """
    if query is None:
        query = FlipperQuery(four_loop_mask(lattice), frozenset(forbidden))
    target = query.target
    allowed = [v for v in lattice.vertices if v not in query.forbidden]
    if target == 0:
        return ()

    masks = {(v, k): s_flip_mask(lattice, v, k) for v in allowed for k in (1, 2, 3)}
    for w in range(1, min_weight_search + 1):
        for sites in itertools.combinations(allowed, w):
            for ks in itertools.product((1, 2, 3), repeat=w):
                m = 0
                for v, k in zip(sites, ks):
                    m ^= masks[(v, k)]
                if m == target:
                    return tuple(zip(sites, ks))

    n_loops = len(lattice.loops)
    pivots: dict[int, int] = {}
    cols = [(v, k) for v in allowed for k in (1, 2)]
    for idx, (v, k) in enumerate(cols):
        r = masks[(v, k)] | (1 << (n_loops + idx))
        while r & ((1 << n_loops) - 1):
            low = r & -r
            if low in pivots:
                r ^= pivots[low]
            else:
                pivots[low] = r
                break
    r = target
    while r & ((1 << n_loops) - 1):
        low = r & -r
        if low not in pivots:
            return None
        r ^= pivots[low]
    tags = r >> n_loops
    chosen = [cols[i] for i in range(len(cols)) if tags >> i & 1]
    return _merge(chosen)


def flipper_operator(flipper: Sequence[tuple[int, int]]) -> LocalOperator:
    return LocalOperator.s_product(flipper)


def apply_flipper(config: Sequence[int], flipper: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    c = list(config)
    for v, k in flipper:
        c[v] = s_perm(k)[c[v]]
    return tuple(c)


def validate_flipper_explicit(lattice: Lattice, flipper: Sequence[tuple[int, int]]) -> bool:
    """Apply the product to materialized Psi and compare with Phi (small lattices)."""
    psi = materialize(build_psi(lattice))
    phi = materialize(build_phi(lattice))
    return apply_gates(psi, s_placements(flipper)) == phi


def validate_flipper_sampled(
    lattice: Lattice, flipper: Sequence[tuple[int, int]], samples: int = 1000, seed: int = 0
) -> bool:
    """Sampled Psi solutions must land in the Phi coset.

    The product permutes configurations, so landing in Phi for every Psi
    solution plus equal coset sizes makes it a bijection Psi -> Phi.
    """
    psi = build_system(lattice)
    phi_mask = four_loop_mask(lattice)
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(samples):
        x = sample_solution(psi, rng)
        if syndrome_mask(lattice, apply_flipper(x, flipper)) != phi_mask:
            return False
    return True


def negative_control_value(lattice: Lattice, flipper: Sequence[tuple[int, int]]) -> dict:
    """Matrix elements of the flipper itself between Psi and Phi.

    A flipper mapping Psi onto Phi is an undetected error: <Psi|V|Phi> = 1.
    """
    psi, phi = build_psi(lattice), build_phi(lattice)
    op = flipper_operator(flipper)
    return {
        "psi_v_phi": matrix_element(psi, op, phi),
        "phi_v_psi": matrix_element(phi, op, psi),
        "expect_psi": matrix_element(psi, op, psi),
        "expect_phi": matrix_element(phi, op, phi),
    }


def v1_flipper(lattice: Lattice) -> SFlip:
    """S^1 on one endpoint of each top-level LINK edge."""
    g = lattice.generation
    return tuple(sorted((e.u, 1) for e in lattice.edges if e.kind == "LINK" and e.level == g))
