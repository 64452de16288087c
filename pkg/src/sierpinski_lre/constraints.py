"""Loop parity constraints as a GF(2) system over side bits.

Variable ``3*v + (s - 1)`` is the red bit of side ``s`` at vertex ``v``.  The
system holds one even-parity row per vertex (letters have an even number of
red sides) and one row per constrained loop whose right-hand side is the
target syndrome bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import gf2
from .algebra import SIDE_MASK, letter_from_mask
from .errors import InvalidArgument, NoSolution, ResourceLimit
from .lattice import Lattice

ENUMERATION_CAP = 24

Configuration = tuple[int, ...]
Syndrome = tuple[int, ...]


# ----------------------------------------------------------------------
# encoding helpers
# ----------------------------------------------------------------------
def config_to_bits(config: Sequence[int]) -> int:
    x = 0
    for v, a in enumerate(config):
        x |= SIDE_MASK[a] << (3 * v)
    return x


def bits_to_config(x: int, n: int) -> Configuration:
    return tuple(letter_from_mask((x >> (3 * v)) & 7) for v in range(n))


def syndrome_to_mask(syndrome: Sequence[int]) -> int:
    m = 0
    for i, b in enumerate(syndrome):
        if b & 1:
            m |= 1 << i
    return m


def mask_to_syndrome(mask: int, n_loops: int) -> Syndrome:
    return tuple((mask >> i) & 1 for i in range(n_loops))


def loop_rows(lattice: Lattice) -> list[int]:
    """Each loop as a bitmask over side variables."""
    rows = []
    for lp in lattice.loops:
        r = 0
        for v, s in lp.incidences:
            r |= 1 << (3 * v + s - 1)
        rows.append(r)
    return rows


def vertex_letter_syndromes(lattice: Lattice) -> list[tuple[int, int, int, int]]:
    """Loop mask toggled by each letter at each vertex (relative to letter 0)."""
    out = []
    for v in lattice.vertices:
        per = []
        for a in range(4):
            m = 0
            for s in (1, 2, 3):
                if SIDE_MASK[a] >> (s - 1) & 1:
                    m ^= 1 << lattice.loop_at(v, s)
            per.append(m)
        out.append(tuple(per))
    return out


def syndrome_mask(lattice: Lattice, config: Sequence[int]) -> int:
    if len(config) != lattice.n_vertices:
        raise InvalidArgument(f"configuration length {len(config)} != {lattice.n_vertices}")
    table = _letter_syndromes(lattice)
    m = 0
    for v, a in enumerate(config):
        m ^= table[v][a]
    return m


def syndrome_of(lattice: Lattice, config: Sequence[int]) -> Syndrome:
    """Red-side parity of every loop, in canonical loop order."""
    return mask_to_syndrome(syndrome_mask(lattice, config), len(lattice.loops))


def _letter_syndromes(lattice: Lattice) -> list[tuple[int, int, int, int]]:
    cache = lattice.__dict__
    if "_letter_syndromes" not in cache:
        cache["_letter_syndromes"] = vertex_letter_syndromes(lattice)
    return cache["_letter_syndromes"]


# ----------------------------------------------------------------------
# the system
# ----------------------------------------------------------------------
@dataclass(eq=False)
class GF2System:
    """Configurations whose constrained loop parities equal ``target``."""

    lattice: Lattice
    target: Syndrome
    free_loops: frozenset[int] = frozenset()
    _projections: dict = field(default_factory=dict, repr=False)

    @property
    def n_vars(self) -> int:
        return 3 * self.lattice.n_vertices

    @property
    def target_mask(self) -> int:
        return syndrome_to_mask(self.target)

    @cached_property
    def constrained_loops(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.lattice.loops)) if i not in self.free_loops)

    @cached_property
    def _rows(self) -> tuple[list[int], list[int]]:
        rows, rhs = [], []
        for v in self.lattice.vertices:
            rows.append(7 << (3 * v))
            rhs.append(0)
        all_loops = loop_rows(self.lattice)
        for i in self.constrained_loops:
            rows.append(all_loops[i])
            rhs.append(self.target[i])
        return rows, rhs

    @cached_property
    def rank(self) -> int:
        return gf2.rank(self._rows[0])

    @cached_property
    def loop_rank(self) -> int:
        """Rank of the loop rows restricted to the per-vertex-even subspace."""
        n = self.lattice.n_vertices
        return self.rank - n

    @property
    def nullity(self) -> int:
        return self.n_vars - self.rank

    @cached_property
    def _solution(self) -> tuple[int | None, list[int]]:
        rows, rhs = self._rows
        return gf2.solve(rows, rhs, self.n_vars)

    @cached_property
    def consistent(self) -> bool:
        aug = 1 << self.n_vars
        rows, rhs = self._rows
        ech = gf2.Echelon(r | (aug if b else 0) for r, b in zip(rows, rhs))
        return aug not in ech.pivots

    @property
    def particular(self) -> int:
        x0 = self._solution[0]
        if x0 is None:
            raise NoSolution("target syndrome is not reachable")
        return x0

    @property
    def basis(self) -> list[int]:
        self.particular
        return self._solution[1]

    def contains(self, config: Sequence[int]) -> bool:
        m = syndrome_mask(self.lattice, config)
        return all(((m >> i) & 1) == self.target[i] for i in self.constrained_loops)

    def projection(self, support: Sequence[int]) -> "SupportProjection":
        key = tuple(support)
        proj = self._projections.get(key)
        if proj is None:
            proj = SupportProjection(self, key)
            self._projections[key] = proj
        return proj


class SupportProjection:
    """The solution space restricted to the side bits of a vertex subset.

    Solutions are ``x0 + span(basis)``; restricted to ``support`` they form an
    affine subspace whose linear part is the span of the projected basis.
    Counting solutions that agree with an assignment on ``support`` is then a
    membership test plus ``2 ** (nullity - rank)``.
    """

    def __init__(self, system: GF2System, support: tuple[int, ...]):
        for v in support:
            system.lattice._check_vertex(v)
        if len(set(support)) != len(support):
            raise InvalidArgument("support has repeated vertices")
        self.system = system
        self.support = support
        self.offset = self._project(system.particular)
        self.echelon = gf2.Echelon(self._project(b) for b in system.basis)
        self.rank = self.echelon.rank
        self.fibre = system.nullity - self.rank

    def _project(self, x: int) -> int:
        p = 0
        for k, v in enumerate(self.support):
            p |= ((x >> (3 * v)) & 7) << (3 * k)
        return p

    def encode(self, letters: Sequence[int]) -> int:
        p = 0
        for k, a in enumerate(letters):
            p |= SIDE_MASK[a] << (3 * k)
        return p

    def count(self, letters: Sequence[int]) -> int:
        if self.echelon.contains(self.encode(letters) ^ self.offset):
            return 1 << self.fibre
        return 0


# ----------------------------------------------------------------------
# public operations
# ----------------------------------------------------------------------
def build_system(lattice: Lattice, target: Sequence[int] | None = None, free_loops: Iterable[int] = ()) -> GF2System:
    n_loops = len(lattice.loops)
    if target is None:
        target = (0,) * n_loops
    target = tuple(int(b) & 1 for b in target)
    if len(target) != n_loops:
        raise InvalidArgument(f"target length {len(target)} != loop count {n_loops}")
    return GF2System(lattice, target, frozenset(free_loops))


def count_solutions(system: GF2System) -> int:
    if not system.consistent:
        return 0
    return 1 << system.nullity


def count_with_assignment(system: GF2System, fixed: Mapping[int, int]) -> int:
    """Number of solutions taking the given letters on the given vertices."""
    if not system.consistent:
        return 0
    if not fixed:
        return count_solutions(system)
    support = tuple(sorted(fixed))
    return system.projection(support).count([fixed[v] for v in support])


def enumerate_solutions(system: GF2System, cap: int = ENUMERATION_CAP) -> Iterator[Configuration]:
    """All solutions in Gray-code order over the nullspace basis."""
    if not system.consistent:
        return
    if system.nullity > cap:
        raise ResourceLimit(f"nullity {system.nullity} exceeds enumeration cap {cap}")
    n = system.lattice.n_vertices
    basis = system.basis
    x = system.particular
    yield bits_to_config(x, n)
    for i in range(1, 1 << len(basis)):
        x ^= basis[(i & -i).bit_length() - 1]
        yield bits_to_config(x, n)


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample_solution(system: GF2System, seed: int | np.random.Generator | None = None) -> Configuration:
    """Uniform random solution (particular solution plus random nullspace combination)."""
    if not system.consistent:
        raise NoSolution("target syndrome is not reachable")
    rng = make_rng(seed)
    x = system.particular
    coins = rng.integers(0, 2, size=len(system.basis))
    for c, b in zip(coins, system.basis):
        if c:
            x ^= b
    return bits_to_config(x, system.lattice.n_vertices)
