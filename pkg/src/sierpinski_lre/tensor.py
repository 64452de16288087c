"""Independent tensor-network route to Psi.

One copy of ``A`` sits on every vertex with its three virtual legs on ports
1, 2, 3.  Bonds contract with a Kronecker delta and the three corner anchors
are fixed to |1>.  Because the side colour between two ports is the XOR of
their bond bits, delta bonds make every loop parity even by telescoping, so
no constraint logic is used here at all.
"""

from __future__ import annotations

import itertools
from typing import Mapping

from .algebra import LETTERS, _W
from .errors import ConventionViolation, ResourceLimit
from .lattice import ANCHOR, Lattice, build_lattice
from .scalar import ONE, ZERO, ExactScalar
from .states import SparseState

Bits = tuple[int, int, int]

# A = A0 + A1 + A2 + A3, A_alpha = |alpha> (x) (pattern + complement)
_A_PATTERNS = {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}


def tensor_a() -> dict[tuple[int, Bits], int]:
    entries = {}
    for alpha, pat in _A_PATTERNS.items():
        entries[(alpha, pat)] = 1
        entries[(alpha, tuple(1 - b for b in pat))] = 1
    return entries


A = tensor_a()
# each virtual triple appears in exactly one A_alpha
_LETTER_OF = {beta: alpha for (alpha, beta) in A}


def letter_for_legs(beta: Bits) -> int:
    return _LETTER_OF[beta]


# ----------------------------------------------------------------------
# full-network contraction
# ----------------------------------------------------------------------
def contract_network_dense(lattice: Lattice) -> SparseState:
    """Sum over every bond assignment; kept for auditing the recursive route."""
    if lattice.generation > 2:
        raise ResourceLimit("dense contraction is limited to generation <= 2")
    edges = lattice.edges
    bond = {}
    for k, e in enumerate(edges):
        bond[(e.u, e.v)] = k
        bond[(e.v, e.u)] = k
    amps: dict[tuple[int, ...], int] = {}
    for assignment in itertools.product((0, 1), repeat=len(edges)):
        conf = []
        for v in lattice.vertices:
            legs = tuple(1 if w == ANCHOR else assignment[bond[(v, w)]] for w in lattice.ports[v])
            conf.append(_LETTER_OF[legs])
        key = tuple(conf)
        amps[key] = amps.get(key, 0) + 1
    return SparseState(lattice, {k: ExactScalar(n) for k, n in amps.items()})


def _block_tensor(offset: int = 0) -> dict[Bits, dict[tuple[int, ...], int]]:
    """Three A copies on one block with the internal bonds contracted.

    Keys are the external (port 1) bits of the t, l, r vertices.
    """
    out: dict[Bits, dict[tuple[int, ...], int]] = {}
    # bonds: t-l (t port 2, l port 3), l-r (l port 2, r port 3), r-t (r port 2, t port 3)
    for ext in itertools.product((0, 1), repeat=3):
        for tl, lr, rt in itertools.product((0, 1), repeat=3):
            legs_t = (ext[0], tl, rt)
            legs_l = (ext[1], lr, tl)
            legs_r = (ext[2], rt, lr)
            conf = (_LETTER_OF[legs_t], _LETTER_OF[legs_l], _LETTER_OF[legs_r])
            d = out.setdefault(ext, {})
            d[conf] = d.get(conf, 0) + 1
    return out


def _contract_sub(generation: int) -> dict[Bits, dict[tuple[int, ...], int]]:
    """Big tensor of a generation-``generation`` sub-lattice keyed by corner legs."""
    if generation == 1:
        return _block_tensor()
    sub = _contract_sub(generation - 1)
    out: dict[Bits, dict[tuple[int, ...], int]] = {}
    # corner legs of sub-lattices: T=(Tt, Tl, Tr), L=(Lt, Ll, Lr), R=(Rt, Rl, Rr)
    # links: Tl-Lt, Tr-Rt, Lr-Rl
    for kt, dt in sub.items():
        for kl, dl in sub.items():
            if kt[1] != kl[0]:
                continue
            for kr, dr in sub.items():
                if kt[2] != kr[0] or kl[2] != kr[1]:
                    continue
                ext = (kt[0], kl[1], kr[2])
                d = out.setdefault(ext, {})
                for ct, wt in dt.items():
                    for cl, wl in dl.items():
                        for cr, wr in dr.items():
                            conf = ct + cl + cr
                            d[conf] = d.get(conf, 0) + wt * wl * wr
    return out


def contract_network(lattice: Lattice, max_generation: int = 2) -> SparseState:
    """Contract the whole network recursively and close it with corner tensors |1>."""
    if lattice.generation > max_generation:
        raise ResourceLimit(f"contraction is limited to generation <= {max_generation}")
    big = _contract_sub(lattice.generation)
    amps = big.get((1, 1, 1), {})
    return SparseState(lattice, {k: ExactScalar(n) for k, n in amps.items()})


# ----------------------------------------------------------------------
# local checks
# ----------------------------------------------------------------------
def block_contraction_support() -> set[tuple[int, int, int]]:
    """Letter triples with a nonzero block contraction (external legs left open)."""
    return {conf for d in _block_tensor().values() for conf in d}


def a2_a3_even(triple: tuple[int, int, int]) -> bool:
    return sum(1 for a in triple if a in (2, 3)) % 2 == 0


def contract_block_with_w(orientation: int = 1) -> dict[tuple[int, Bits], ExactScalar]:
    """``W+ Tr[A (x) A (x) A]`` for a block, indexed by (coarse letter, coarse legs).

    ``orientation=-1`` wires the block bonds and coarse ports with the cyclic
    order reversed; it exists as a negative control.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    raw: dict[tuple[tuple[int, int, int], Bits], int] = {}
    for ext in itertools.product((0, 1), repeat=3):
        for b01, b12, b20 in itertools.product((0, 1), repeat=3):
            if orientation == 1:
                # port 2 -> next, port 3 -> prev, order t -> l -> r
                legs = ((ext[0], b01, b20), (ext[1], b12, b01), (ext[2], b20, b12))
            else:
                legs = ((ext[0], b20, b01), (ext[1], b01, b12), (ext[2], b12, b20))
            conf = tuple(_LETTER_OF[x] for x in legs)
            coarse_legs = ext if orientation == 1 else (ext[0], ext[2], ext[1])
            key = (conf, coarse_legs)
            raw[key] = raw.get(key, 0) + 1
    out: dict[tuple[int, Bits], ExactScalar] = {}
    for (conf, legs), n in raw.items():
        hit = _W.lookup(conf)
        if hit is None:
            continue
        key = (hit[0], legs)
        out[key] = out.get(key, ZERO) + _W.weight * n
    return {k: v for k, v in out.items() if v}


def check_scale_invariance(orientation: int = 1) -> ExactScalar:
    """Return lambda with ``W+ Tr[A A A] = lambda A`` entrywise."""
    result = contract_block_with_w(orientation)
    support = set(A)
    if set(result) != support:
        raise ConventionViolation("coarse-grained block tensor does not have the support of A")
    values = set(result.values())
    if len(values) != 1:
        raise ConventionViolation(f"entries are not a single multiple of A: {sorted(map(str, values))}")
    return values.pop()


def oracle_equivalence(lattice: Lattice, reference: SparseState) -> bool:
    """Whether the contraction equals ``reference`` up to one positive scalar."""
    ratio = contract_network(lattice).proportionality(reference)
    return ratio is not None and float(ratio) > 0
