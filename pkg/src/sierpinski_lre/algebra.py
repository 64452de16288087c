"""Qudit letters, single-qudit S gates, pair gates T and the block isometry W+.

A letter 0..3 colours the three sides of its triangle; the red sides are
encoded as a 3-bit mask (bit ``s - 1`` for side ``s``)::

    0 -> {}      1 -> {2, 3}      2 -> {1, 3}      3 -> {1, 2}

Every gate in this module permutes letters, so operators are applied by
rewriting configurations rather than by matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidArgument
from .lattice import ANCHOR, BLOCK, LINK, Edge, Lattice
from .scalar import INV_SQRT8, ExactScalar

LETTERS = (0, 1, 2, 3)

RED_SIDES: dict[int, tuple[int, ...]] = {0: (), 1: (2, 3), 2: (1, 3), 3: (1, 2)}
SIDE_MASK: tuple[int, ...] = tuple(sum(1 << (s - 1) for s in RED_SIDES[a]) for a in LETTERS)
_MASK_TO_LETTER = {m: a for a, m in enumerate(SIDE_MASK)}


def letter_from_mask(mask: int) -> int:
    try:
        return _MASK_TO_LETTER[mask]
    except KeyError:
        raise InvalidArgument(f"side mask {mask:03b} has odd red count") from None


def is_red(letter: int, side: int) -> bool:
    return bool(SIDE_MASK[letter] >> (side - 1) & 1)


@dataclass(frozen=True)
class GateTable:
    """A letter permutation on ``arity`` qudits."""

    arity: int
    mapping: Mapping[tuple[int, ...], tuple[int, ...]]

    def __call__(self, letters: tuple[int, ...]) -> tuple[int, ...]:
        return self.mapping[letters]

    def compose(self, other: "GateTable") -> "GateTable":
        """``self`` after ``other``."""
        return GateTable(self.arity, {k: self.mapping[v] for k, v in other.mapping.items()})

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())

    def to_json(self) -> list:
        return [[list(k), list(v)] for k, v in sorted(self.mapping.items())]


# S^1 = |0><1| + |1><0| + |2><3| + |3><2|, etc.
_S_PERMS = {
    1: (1, 0, 3, 2),
    2: (2, 3, 0, 1),
    3: (3, 2, 1, 0),
}


def s_perm(k: int) -> tuple[int, int, int, int]:
    if k not in _S_PERMS:
        raise InvalidArgument(f"S superscript must be 1, 2 or 3, got {k!r}")
    return _S_PERMS[k]


def s_gate(k: int) -> GateTable:
    perm = s_perm(k)
    return GateTable(1, {(a,): (perm[a],) for a in LETTERS})


def s_sides(k: int) -> tuple[int, int]:
    """The two sides recoloured by S^k."""
    return tuple(s for s in (1, 2, 3) if s != k)  # type: ignore[return-value]


def product_gate(k1: int, k2: int) -> GateTable:
    p1, p2 = s_perm(k1), s_perm(k2)
    return GateTable(2, {(a, b): (p1[a], p2[b]) for a in LETTERS for b in LETTERS})


def t_superscripts(lattice: Lattice, edge: Edge) -> tuple[int, int]:
    """S superscripts applied at ``edge.u`` and ``edge.v`` by T on that edge.

    A LINK edge gets S^1 on both ends.  On a BLOCK edge each endpoint gets
    S^p where p is its port pointing at the other endpoint; that recolours the
    block-loop side and the side shared with the loop running along the edge,
    so every loop parity is preserved.
    """
    if edge.kind == LINK:
        return (1, 1)
    if edge.kind == BLOCK:
        return (lattice.port_to(edge.u, edge.v), lattice.port_to(edge.v, edge.u))
    raise InvalidArgument(f"not a lattice edge: {edge!r}")


def t_gate(lattice: Lattice, edge: Edge | tuple[int, int]) -> tuple[GateTable, tuple[int, int]]:
    if not isinstance(edge, Edge):
        u, v = edge
        if ANCHOR in (u, v):
            raise InvalidArgument("corner anchors carry no T gate")
        edge = lattice.edge_between(u, v)
    k1, k2 = t_superscripts(lattice, edge)
    return product_gate(k1, k2), (edge.u, edge.v)


# ----------------------------------------------------------------------
# coarse graining
# ----------------------------------------------------------------------
_W_ROWS = (
    "000 111 023 132 213 230 302 321",
    "011 032 100 123 202 221 313 330",
    "010 033 101 122 203 220 312 331",
    "001 110 022 133 212 231 303 320",
)


@dataclass(frozen=True)
class WPlusTable:
    """W+ = (1/sqrt 8) * sum_alpha |alpha><row(alpha)|, rows as letter triples."""

    rows: tuple[tuple[tuple[int, int, int], ...], ...]
    weight: ExactScalar = INV_SQRT8

    def lookup(self, triple: tuple[int, int, int]) -> tuple[int, int] | None:
        return self._index.get(tuple(triple))

    @property
    def _index(self) -> dict[tuple[int, int, int], tuple[int, int]]:
        idx = {}
        for alpha, row in enumerate(self.rows):
            for gamma, triple in enumerate(row, start=1):
                idx[triple] = (alpha, gamma)
        return idx

    def to_json(self) -> dict:
        return {
            "weight": self.weight.to_json(),
            "rows": {str(a): ["".join(map(str, t)) for t in row] for a, row in enumerate(self.rows)},
        }


def w_plus_table() -> WPlusTable:
    rows = tuple(tuple(tuple(int(c) for c in word) for word in line.split()) for line in _W_ROWS)
    return WPlusTable(rows)


_W = w_plus_table()
_U_INDEX = _W._index


def u_block(triple: tuple[int, int, int], table: Mapping | None = None) -> tuple[int, int] | None:
    """Block unitary on the a-sector: triple -> (coarse letter, gamma label).

    Returns ``None`` for b-sector triples (block loop violated); their image is
    never needed.
    """
    index = _U_INDEX if table is None else table
    return index.get(tuple(triple))


def block_parity(triple: tuple[int, int, int]) -> int:
    """Red count of the block loop (side 1 at each vertex) modulo 2."""
    return sum(SIDE_MASK[a] & 1 for a in triple) & 1


def gamma_state() -> dict[int, ExactScalar]:
    """|Gamma> = (|1> + ... + |8>) / sqrt 8."""
    return {g: INV_SQRT8 for g in range(1, 9)}


def dump_tables() -> dict:
    return {
        "S": {str(k): s_gate(k).to_json() for k in (1, 2, 3)},
        "T": {
            "LINK": product_gate(1, 1).to_json(),
            "BLOCK_next": product_gate(2, 3).to_json(),
        },
        "W_plus": _W.to_json(),
        "letters": {str(a): list(RED_SIDES[a]) for a in LETTERS},
    }
