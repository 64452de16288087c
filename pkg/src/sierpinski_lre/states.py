"""Coset states, local operators and the two evaluation backends.

The counting backend evaluates matrix elements of uniform coset states
through GF(2) rank queries and never lists configurations.  The explicit
backend stores a sparse amplitude map and is the ground truth for small
lattices (generation <= 2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import LETTERS, GateTable, product_gate, t_gate, u_block
from .constraints import (
    ENUMERATION_CAP,
    GF2System,
    _letter_syndromes,
    build_system,
    count_solutions,
    enumerate_solutions,
)
from .errors import InvalidArgument, ResourceLimit, UnsupportedGeneration
from .lattice import Edge, Lattice, build_lattice, largest_four_loops
from .scalar import INV_SQRT2, INV_SQRT8, ONE, ZERO, ExactScalar

SUPPORT_CAP = 8
MATERIALIZE_CAP = 1 << 24

Letters = tuple[int, ...]


# ----------------------------------------------------------------------
# coset states
# ----------------------------------------------------------------------
@dataclass(eq=False)
class CosetState:
    """Uniform superposition of every solution of ``system``."""

    system: GF2System
    name: str = ""

    @property
    def lattice(self) -> Lattice:
        return self.system.lattice

    @cached_property
    def M(self) -> int:
        return count_solutions(self.system)

    @property
    def log2_M(self) -> int:
        return self.system.nullity

    def count(self, support: Sequence[int], letters: Sequence[int]) -> int:
        return self.system.projection(tuple(support)).count(letters)


def build_psi(lattice: Lattice) -> CosetState:
    return CosetState(build_system(lattice), "Psi")


def phi_syndrome(lattice: Lattice) -> tuple[int, ...]:
    flipped = set(largest_four_loops(lattice))
    return tuple(int(i in flipped) for i in range(len(lattice.loops)))


def build_phi(lattice: Lattice) -> CosetState:
    if lattice.generation < 2:
        raise UnsupportedGeneration("Phi needs the four largest loops, which exist from generation 2")
    return CosetState(build_system(lattice, phi_syndrome(lattice)), "Phi")


# ----------------------------------------------------------------------
# local operators
# ----------------------------------------------------------------------
@dataclass
class LocalOperator:
    """Finite-support operator as a map ``(out letters, in letters) -> scalar``."""

    support: tuple[int, ...]
    matrix: dict[tuple[Letters, Letters], ExactScalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.support = tuple(self.support)
        if len(set(self.support)) != len(self.support):
            raise InvalidArgument("operator support has repeated vertices")
        k = len(self.support)
        clean = {}
        for (out, inp), c in self.matrix.items():
            out, inp = tuple(out), tuple(inp)
            if len(out) != k or len(inp) != k:
                raise InvalidArgument("matrix index length does not match the support")
            c = ExactScalar.coerce(c)
            if c:
                clean[(out, inp)] = c
        self.matrix = clean

    @classmethod
    def dyad(cls, support: Sequence[int], out: Sequence[int], inp: Sequence[int]) -> "LocalOperator":
        """``|out><inp|`` on ``support``."""
        return cls(tuple(support), {(tuple(out), tuple(inp)): ONE})

    @classmethod
    def identity(cls, support: Sequence[int] = ()) -> "LocalOperator":
        k = len(support)
        return cls(tuple(support), {(t, t): ONE for t in itertools.product(LETTERS, repeat=k)})

    @classmethod
    def from_permutation(cls, support: Sequence[int], perm: Mapping[Letters, Letters]) -> "LocalOperator":
        return cls(tuple(support), {(tuple(perm[t]), tuple(t)): ONE for t in perm})

    @classmethod
    def s_product(cls, placements: Iterable[tuple[int, int]]) -> "LocalOperator":
        """Product of single-site S gates given as (vertex, superscript) pairs."""
        from .algebra import s_perm

        placements = list(placements)
        support = tuple(v for v, _ in placements)
        perms = [s_perm(k) for _, k in placements]
        matrix = {}
        for t in itertools.product(LETTERS, repeat=len(support)):
            matrix[(tuple(p[a] for p, a in zip(perms, t)), t)] = ONE
        return cls(support, matrix)

    def tensor(self, other: "LocalOperator") -> "LocalOperator":
        if set(self.support) & set(other.support):
            raise InvalidArgument("tensor product needs disjoint supports")
        matrix = {}
        for (o1, i1), c1 in self.matrix.items():
            for (o2, i2), c2 in other.matrix.items():
                matrix[(o1 + o2, i1 + i2)] = c1 * c2
        return LocalOperator(self.support + other.support, matrix)

    def __len__(self) -> int:
        return len(self.support)


def basis_operators(support: Sequence[int]) -> Iterator[LocalOperator]:
    """All ``16 ** |support|`` letter dyads on ``support``."""
    tuples = list(itertools.product(LETTERS, repeat=len(support)))
    for out in tuples:
        for inp in tuples:
            yield LocalOperator.dyad(support, out, inp)


# ----------------------------------------------------------------------
# counting backend
# ----------------------------------------------------------------------
def letters_syndrome(lattice: Lattice, support: Sequence[int], letters: Sequence[int]) -> int:
    table = _letter_syndromes(lattice)
    m = 0
    for v, a in zip(support, letters):
        m ^= table[v][a]
    return m


def _norm(bra: CosetState, ket: CosetState) -> ExactScalar:
    return ExactScalar.sqrt2_power(-(bra.log2_M + ket.log2_M))


def _check_pair(bra: CosetState, ket: CosetState) -> None:
    if bra.lattice is not ket.lattice:
        raise InvalidArgument("states live on different lattice objects")
    if bra.system.free_loops != ket.system.free_loops:
        raise InvalidArgument("states constrain different loop sets")


def matrix_element(
    bra: CosetState, op: LocalOperator, ket: CosetState, support_cap: int = SUPPORT_CAP
) -> ExactScalar:
    """``<bra| op |ket>`` exactly, from counting queries only."""
    _check_pair(bra, ket)
    if len(op.support) > support_cap:
        raise ResourceLimit(f"support size {len(op.support)} exceeds cap {support_cap}")
    if not bra.M or not ket.M:
        return ZERO
    lattice = ket.lattice
    diff = bra.system.target_mask ^ ket.system.target_mask
    free = 0
    for i in ket.system.free_loops:
        free |= 1 << i
    proj = ket.system.projection(op.support)
    total = 0
    acc = ZERO
    for (out, inp), c in op.matrix.items():
        delta = letters_syndrome(lattice, op.support, inp) ^ letters_syndrome(lattice, op.support, out)
        if (delta ^ diff) & ~free:
            continue
        n = proj.count(inp)
        if n:
            if c == ONE:
                total += n
            else:
                acc = acc + c * n
    if total:
        acc = acc + total
    return acc * _norm(bra, ket)


def expectation(state: CosetState, op: LocalOperator) -> ExactScalar:
    return matrix_element(state, op, state)


def connected_correlation(psi: CosetState, op_a: LocalOperator, op_b: LocalOperator) -> ExactScalar:
    if set(op_a.support) & set(op_b.support):
        raise InvalidArgument("connected correlation needs disjoint supports")
    both = expectation(psi, op_a.tensor(op_b))
    return both - expectation(psi, op_a) * expectation(psi, op_b)


# ----------------------------------------------------------------------
# explicit backend
# ----------------------------------------------------------------------
@dataclass
class SparseState:
    """Explicit amplitude map; zero amplitudes are never stored."""

    lattice: Lattice
    amplitudes: dict[Letters, ExactScalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.amplitudes = {k: v for k, v in self.amplitudes.items() if v}

    def __len__(self) -> int:
        return len(self.amplitudes)

    def inner(self, other: "SparseState") -> ExactScalar:
        """``<self|other>`` (amplitudes are real)."""
        small, large = sorted((self.amplitudes, other.amplitudes), key=len)
        acc = ZERO
        for k, a in small.items():
            b = large.get(k)
            if b is not None:
                acc = acc + a * b
        return acc

    def norm2(self) -> ExactScalar:
        return self.inner(self)

    def scaled(self, c: ExactScalar | int) -> "SparseState":
        c = ExactScalar.coerce(c)
        return SparseState(self.lattice, {k: a * c for k, a in self.amplitudes.items()})

    def __add__(self, other: "SparseState") -> "SparseState":
        out = dict(self.amplitudes)
        for k, a in other.amplitudes.items():
            out[k] = out.get(k, ZERO) + a
        return SparseState(self.lattice, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseState):
            return NotImplemented
        return self.amplitudes == other.amplitudes

    def proportionality(self, other: "SparseState") -> ExactScalar | None:
        """Scalar c with ``self == c * other`` or None."""
        if set(self.amplitudes) != set(other.amplitudes) or not self.amplitudes:
            return None
        key = next(iter(other.amplitudes))
        # c = self[key] / other[key]; amplitudes here are units times powers of two
        ratio = _divide(self.amplitudes[key], other.amplitudes[key])
        if ratio is None:
            return None
        for k, b in other.amplitudes.items():
            if self.amplitudes[k] != ratio * b:
                return None
        return ratio

    @classmethod
    def product(cls, lattice: Lattice, letters: Sequence[int]) -> "SparseState":
        if len(letters) != lattice.n_vertices:
            raise InvalidArgument("configuration length mismatch")
        return cls(lattice, {tuple(letters): ONE})


def _divide(x: ExactScalar, y: ExactScalar) -> ExactScalar | None:
    # 1 / (a + b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2); only exact when a^2 - 2b^2 = +-2^k
    den = y.a * y.a - 2 * y.b * y.b
    sign = 1 if den > 0 else -1
    den = abs(den)
    if den & (den - 1):
        return None
    inv = ExactScalar(sign * y.a, -sign * y.b, -y.e - (den.bit_length() - 1))
    return x * inv


def materialize(state: CosetState, cap: int = MATERIALIZE_CAP) -> SparseState:
    if state.M > cap:
        raise ResourceLimit(f"{state.M} configurations exceed the materialization cap {cap}")
    amp = ExactScalar.sqrt2_power(-state.log2_M)
    limit = max(ENUMERATION_CAP, state.system.nullity)
    return SparseState(state.lattice, {c: amp for c in enumerate_solutions(state.system, cap=limit)})


GatePlacement = tuple[GateTable, Sequence[int]]


def apply_gates(state: SparseState, gates: Iterable[GatePlacement]) -> SparseState:
    """Apply letter-permutation gates one after another."""
    amps = state.amplitudes
    for gate, sites in gates:
        sites = tuple(sites)
        if len(sites) != gate.arity:
            raise InvalidArgument("gate arity does not match its sites")
        new = {}
        for conf, a in amps.items():
            c = list(conf)
            out = gate(tuple(conf[s] for s in sites))
            for s, x in zip(sites, out):
                c[s] = x
            new[tuple(c)] = a
        amps = new
    return SparseState(state.lattice, amps)


def s_placements(placements: Iterable[tuple[int, int]]) -> list[GatePlacement]:
    from .algebra import s_gate

    return [(s_gate(k), (v,)) for v, k in placements]


def apply_half_projector(state: SparseState, edge: Edge | tuple[int, int]) -> SparseState:
    """``(1 + T) / sqrt 2`` on one edge."""
    gate, sites = t_gate(state.lattice, edge)
    moved = apply_gates(state, [(gate, sites)])
    return (state + moved).scaled(INV_SQRT2)


def apply_operator(state: SparseState, op: LocalOperator) -> SparseState:
    by_in: dict[Letters, list[tuple[Letters, ExactScalar]]] = {}
    for (out, inp), c in op.matrix.items():
        by_in.setdefault(inp, []).append((out, c))
    sup = op.support
    new: dict[Letters, ExactScalar] = {}
    for conf, a in state.amplitudes.items():
        rows = by_in.get(tuple(conf[s] for s in sup))
        if not rows:
            continue
        for out, c in rows:
            x = list(conf)
            for s, letter in zip(sup, out):
                x[s] = letter
            key = tuple(x)
            new[key] = new.get(key, ZERO) + c * a
    return SparseState(state.lattice, new)


def explicit_matrix_element(bra: SparseState, op: LocalOperator, ket: SparseState) -> ExactScalar:
    return bra.inner(apply_operator(ket, op))


def dyad_elements(bra: SparseState, ket: SparseState, support: Sequence[int]) -> dict[tuple[Letters, Letters], ExactScalar]:
    """Every nonzero ``<bra| |out><in| |ket>`` on ``support`` in one pass."""
    sup = tuple(support)
    sset = set(sup)
    rest_idx = [v for v in range(bra.lattice.n_vertices) if v not in sset]

    def split(conf: Letters) -> tuple[Letters, Letters]:
        return tuple(conf[s] for s in sup), tuple(conf[v] for v in rest_idx)

    bra_groups: dict[Letters, list[tuple[Letters, ExactScalar]]] = {}
    for conf, b in bra.amplitudes.items():
        on, rest = split(conf)
        bra_groups.setdefault(rest, []).append((on, b))
    table: dict[tuple[Letters, Letters], ExactScalar] = {}
    for conf, a in ket.amplitudes.items():
        inp, rest = split(conf)
        for out, b in bra_groups.get(rest, ()):
            key = (out, inp)
            table[key] = table.get(key, ZERO) + a * b
    return {k: v for k, v in table.items() if v}


# ----------------------------------------------------------------------
# coarse graining
# ----------------------------------------------------------------------
def block_sites(b: int) -> tuple[int, int, int]:
    """Vertices of block ``b`` in W+ leg order.

    The legs start at the vertex whose external edge becomes port 1 of the
    coarse vertex (the one sharing the block's own position symbol), then
    follow the block's cyclic order.
    """
    x = b % 3
    return (3 * b + x, 3 * b + (x + 1) % 3, 3 * b + (x + 2) % 3)


def block_triple(conf: Sequence[int], b: int) -> Letters:
    return tuple(conf[s] for s in block_sites(b))


def coarse_grain(state: SparseState, coarse: Lattice | None = None) -> SparseState:
    """Apply W+ on every block; b-sector blocks annihilate the configuration."""
    lattice = state.lattice
    if lattice.generation < 2:
        raise UnsupportedGeneration("coarse graining needs generation >= 2")
    if coarse is None:
        coarse = build_lattice(lattice.generation - 1)
    n_blocks = lattice.n_blocks
    weight = INV_SQRT8
    factor = ONE
    for _ in range(n_blocks):
        factor = factor * weight
    out: dict[Letters, ExactScalar] = {}
    for conf, a in state.amplitudes.items():
        letters = []
        for b in range(n_blocks):
            hit = u_block(block_triple(conf, b))
            if hit is None:
                break
            letters.append(hit[0])
        else:
            key = tuple(letters)
            out[key] = out.get(key, ZERO) + a * factor
    return SparseState(coarse, out)


@dataclass
class BlockDecomposition:
    passed: bool
    coarse_configurations: int
    gamma_tuples_per_coarse: int
    total: int
    per_block_gamma: dict[int, dict[int, int]]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "coarse_configurations": self.coarse_configurations,
            "gamma_tuples_per_coarse": self.gamma_tuples_per_coarse,
            "total": self.total,
        }


def block_decompose_check(lattice: Lattice, table: Mapping | None = None) -> BlockDecomposition:
    """Check that relabelling Psi by the block unitary factorizes it.

    Every solution should map to (coarse configuration, gamma tuple) with each
    coarse configuration a Psi solution one generation down and paired with
    every gamma tuple exactly once.
    """
    if lattice.generation != 2:
        raise UnsupportedGeneration("block decomposition check runs at generation 2")
    coarse = build_lattice(1)
    coarse_psi = set(enumerate_solutions(build_system(coarse)))
    psi = build_psi(lattice)
    seen: dict[Letters, set[Letters]] = {}
    per_block: dict[int, dict[int, set[int]]] = {b: {} for b in range(lattice.n_blocks)}
    ok = True
    total = 0
    for conf in enumerate_solutions(psi.system):
        total += 1
        letters, gammas = [], []
        for b in range(lattice.n_blocks):
            hit = u_block(block_triple(conf, b), table)
            if hit is None:
                ok = False
                break
            letters.append(hit[0])
            gammas.append(hit[1])
            per_block[b].setdefault(hit[0], set()).add(hit[1])
        else:
            bucket = seen.setdefault(tuple(letters), set())
            if tuple(gammas) in bucket:
                ok = False
            bucket.add(tuple(gammas))
    n_gamma = 8**lattice.n_blocks
    if set(seen) != coarse_psi:
        ok = False
    sizes = {len(v) for v in seen.values()}
    if sizes != {n_gamma}:
        ok = False
    return BlockDecomposition(
        passed=ok,
        coarse_configurations=len(seen),
        gamma_tuples_per_coarse=min(sizes) if sizes else 0,
        total=total,
        per_block_gamma={b: {a: len(g) for a, g in d.items()} for b, d in per_block.items()},
    )
