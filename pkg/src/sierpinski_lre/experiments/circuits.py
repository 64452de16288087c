"""Preparation by the (1+T)/sqrt2 circuit, T-orbit ergodicity and canonical forms.

Canonicalization works bottom-up.  A block's T orbit always holds exactly two
triples made of letters 0 and 1 only; one is chosen.  Three canonical
sub-lattices are then glued: each can be traded for its partner form by
applying every T inside it (that is S^1 on its three corners), and the
flips are solved so that each connecting link carries (0,0) or (1,1).  T on
the (1,1) links clears them.  At the top the two surviving forms differ by
S^1 on the three lattice corners.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from ..algebra import t_gate
from ..constraints import _letter_syndromes, build_system, count_solutions, syndrome_mask
from ..errors import InvalidArgument, ResourceLimit
from ..lattice import LATERAL, Edge, Lattice
from ..states import SparseState, apply_half_projector, build_psi, materialize

Move = tuple[int, int]


# ----------------------------------------------------------------------
# circuit preparation
# ----------------------------------------------------------------------
def prepare_by_circuit(lattice: Lattice, order: Sequence[Edge] | None = None, max_generation: int = 2) -> dict:
    if lattice.generation > max_generation:
        raise ResourceLimit(f"explicit preparation is limited to generation <= {max_generation}")
    edges = list(lattice.edges) if order is None else list(order)
    state = SparseState.product(lattice, (0,) * lattice.n_vertices)
    for e in edges:
        state = apply_half_projector(state, e)
    psi = materialize(build_psi(lattice))
    scalar = state.proportionality(psi)
    return {"state": state, "equals_psi": scalar is not None, "scalar": scalar}


# ----------------------------------------------------------------------
# moves
# ----------------------------------------------------------------------
def _gate_cache(lattice: Lattice) -> dict:
    cache = lattice.__dict__.setdefault("_t_gates", {})
    return cache


def apply_move(lattice: Lattice, config: list[int], move: Move) -> None:
    cache = _gate_cache(lattice)
    hit = cache.get(move)
    if hit is None:
        hit = cache[move] = t_gate(lattice, move)
    gate, (u, v) = hit
    config[u], config[v] = gate((config[u], config[v]))


def replay(lattice: Lattice, config: Sequence[int], moves: Sequence[Move]) -> tuple[int, ...]:
    for u, v in moves:
        if not lattice.are_adjacent(u, v):
            raise InvalidArgument(f"move ({u}, {v}) is not a lattice edge")
    c = list(config)
    for m in moves:
        apply_move(lattice, c, m)
    return tuple(c)


def ergodicity_check(lattice: Lattice, max_generation: int = 2) -> dict:
    """BFS over single T moves starting at the all-zero configuration."""
    if lattice.generation > max_generation:
        raise ResourceLimit(f"orbit BFS is limited to generation <= {max_generation}")
    moves = [(e.u, e.v) for e in lattice.edges]
    start = (0,) * lattice.n_vertices
    seen = {start}
    queue = deque([start])
    nonzero = 0
    while queue:
        conf = queue.popleft()
        for m in moves:
            c = list(conf)
            apply_move(lattice, c, m)
            t = tuple(c)
            if t not in seen:
                seen.add(t)
                queue.append(t)
                if syndrome_mask(lattice, t):
                    nonzero += 1
    M = count_solutions(build_system(lattice))
    return {"orbit_size": len(seen), "M": M, "nonzero_syndrome": nonzero, "ergodic": len(seen) == M and not nonzero}


# ----------------------------------------------------------------------
# canonicalization
# ----------------------------------------------------------------------
@dataclass
class CanonicalResult:
    forms: list[tuple[tuple[int, ...], list[Move]]]

    @property
    def chi0(self) -> tuple[int, ...]:
        return self.forms[0][0]

    def to_json(self) -> dict:
        return {"forms": [{"config": list(c), "moves": [list(m) for m in mv]} for c, mv in self.forms]}


def _sub_edges(lattice: Lattice, prefix: int, k: int) -> list[Move]:
    cache = lattice.__dict__.setdefault("_sub_edges", {})
    key = (prefix, k)
    if key not in cache:
        lo, hi = prefix * 3**k, (prefix + 1) * 3**k
        cache[key] = [(e.u, e.v) for e in lattice.edges if lo <= e.u < hi and lo <= e.v < hi]
    return cache[key]


def _corners(prefix: int, k: int) -> tuple[int, int, int]:
    base, n = prefix * 3**k, 3**k
    return (base, base + (n - 1) // 2, base + n - 1)


def _canon_block(lattice: Lattice, conf: list[int], b: int, moves: list[Move]) -> None:
    edges = _sub_edges(lattice, b, 1)
    sites = (3 * b, 3 * b + 1, 3 * b + 2)
    start = tuple(conf[s] for s in sites)
    parent: dict[tuple, tuple] = {start: None}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for m in edges:
            c = list(conf)
            for s, x in zip(sites, t):
                c[s] = x
            apply_move(lattice, c, m)
            nt = tuple(c[s] for s in sites)
            if nt not in parent:
                parent[nt] = (t, m)
                queue.append(nt)
    binary = sorted(t for t in parent if all(x in (0, 1) for x in t))
    if len(binary) != 2:
        raise InvalidArgument(f"block {b} is not in a constraint-satisfying sector")
    path = []
    t = binary[0]
    while parent[t] is not None:
        t, m = parent[t]
        path.append(m)
    path.reverse()
    for m in path:
        apply_move(lattice, conf, m)
    moves.extend(path)


def _canon(lattice: Lattice, conf: list[int], prefix: int, k: int, moves: list[Move]) -> None:
    if k == 1:
        _canon_block(lattice, conf, prefix, moves)
        return
    kids = [3 * prefix + c for c in range(3)]
    for kid in kids:
        _canon(lattice, conf, kid, k - 1, moves)
    ct, cl, cr = (tuple(conf[v] for v in _corners(kid, k - 1)) for kid in kids)
    # links T.l-L.t, T.r-R.t, L.r-R.l
    f = [0, ct[1] ^ cl[0], ct[2] ^ cr[0]]
    if cl[2] ^ f[1] != cr[1] ^ f[2]:
        raise InvalidArgument("ring constraint violated: no matching corner flips")
    for kid, flip in zip(kids, f):
        if flip:
            for m in _sub_edges(lattice, kid, k - 1):
                apply_move(lattice, conf, m)
                moves.append(m)
    pairs = (
        (_corners(kids[0], k - 1)[1], _corners(kids[1], k - 1)[0]),
        (_corners(kids[0], k - 1)[2], _corners(kids[2], k - 1)[0]),
        (_corners(kids[1], k - 1)[2], _corners(kids[2], k - 1)[1]),
    )
    for u, v in pairs:
        if conf[u] == 1 and conf[v] == 1:
            apply_move(lattice, conf, (u, v))
            moves.append((u, v))
        elif conf[u] or conf[v]:
            raise InvalidArgument("link pair left unmatched after corner flips")


def canonicalize(lattice: Lattice, config: Sequence[int], respect_laterals: bool = False) -> CanonicalResult:
    """Map ``config`` by T moves to product forms with every non-corner letter 0.

    Without ``respect_laterals`` two forms are returned, smaller first.  With
    it the input must satisfy every loop and the all-zero form is returned.
    """
    if len(config) != lattice.n_vertices:
        raise InvalidArgument("configuration length mismatch")
    if any(a not in (0, 1, 2, 3) for a in config):
        raise InvalidArgument("letters must be 0..3")
    syn = syndrome_mask(lattice, config)
    lateral = 0
    for i in lattice.loop_indices(LATERAL):
        lateral |= 1 << i
    if syn & ~lateral:
        raise InvalidArgument("configuration violates a non-lateral loop constraint")
    if respect_laterals and syn:
        raise InvalidArgument("configuration violates a lateral loop constraint")

    conf = list(config)
    moves: list[Move] = []
    _canon(lattice, conf, 0, lattice.generation, moves)
    first = (tuple(conf), moves)
    all_edges = _sub_edges(lattice, 0, lattice.generation)
    for m in all_edges:
        apply_move(lattice, conf, m)
    second = (tuple(conf), moves + list(all_edges))
    forms = sorted([first, second], key=lambda f: f[0])
    if respect_laterals:
        zero = (0,) * lattice.n_vertices
        forms = [f for f in forms if f[0] == zero]
        if len(forms) != 1:
            raise InvalidArgument("no all-zero canonical form for a lateral-respecting input")
    return CanonicalResult(forms)
