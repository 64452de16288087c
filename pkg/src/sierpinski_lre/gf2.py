"""GF(2) elimination on rows stored as Python int bitsets."""

from __future__ import annotations

from typing import Iterable


class Echelon:
    """Incremental echelon basis keyed by the lowest set bit of each row."""

    __slots__ = ("pivots",)

    def __init__(self, rows: Iterable[int] = ()):
        self.pivots: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, r: int) -> int:
        pivots = self.pivots
        while r:
            low = r & -r
            p = pivots.get(low)
            if p is None:
                return r
            r ^= p
        return 0

    def add(self, r: int) -> bool:
        """Insert ``r``; return True when it was independent."""
        r = self.reduce(r)
        if r:
            self.pivots[r & -r] = r
            return True
        return False

    def contains(self, r: int) -> bool:
        return self.reduce(r) == 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.pivots = dict(self.pivots)
        return e


def rank(rows: Iterable[int]) -> int:
    return Echelon(rows).rank


def solve(rows: list[int], rhs: list[int], n_cols: int) -> tuple[int | None, list[int]]:
    """Solve ``rows . x = rhs`` over GF(2).

    Returns ``(x0, basis)`` with ``x0`` a particular solution (``None`` when the
    system is inconsistent) and ``basis`` a nullspace basis.
    """
    aug = 1 << n_cols
    ech = Echelon()
    for r, b in zip(rows, rhs):
        ech.add(r | (aug if b else 0))
    if aug in ech.pivots:
        return None, []
    # back-substitute into reduced row echelon form
    order = sorted(ech.pivots.items(), key=lambda kv: kv[0], reverse=True)
    reduced: dict[int, int] = {}
    pivot_mask = 0
    for low, r in order:
        rest = r ^ low
        hit = rest & pivot_mask
        while hit:
            q = hit & -hit
            hit ^= q
            rest ^= reduced[q]  # reduced rows carry no other pivot bits
        reduced[low] = low | rest
        pivot_mask |= low
    x0 = 0
    for low, r in reduced.items():
        if r & aug:
            x0 |= low
    full = (1 << n_cols) - 1
    free = full & ~pivot_mask
    basis = []
    f = free
    while f:
        col = f & -f
        f ^= col
        vec = col
        for low, r in reduced.items():
            if r & col:
                vec |= low
        basis.append(vec)
    return x0, basis
