"""Exact correlation sweeps on Psi.

Every dyad expectation on a coset state is either zero or ``2**(f - n)``,
where ``n = log2 M`` and ``f`` is the fibre exponent of the support
projection.  A whole sweep is therefore a boolean array plus one exponent,
and a connected correlation vanishes exactly when the joint boolean array
is the outer product of the single ones and the exponents add up.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..algebra import u_block
from ..errors import UnsupportedGeneration
from ..lattice import Lattice, build_lattice
from ..scalar import ExactScalar
from ..states import CosetState, LocalOperator, block_sites, build_psi, expectation, letters_syndrome


@dataclass
class SupportTable:
    """Syndrome and support membership of every letter tuple in ``tuples``."""

    tuples: list[tuple[int, ...]]
    syndromes: np.ndarray  # object array of python ints (loop masks)
    consistent: np.ndarray  # bool
    exponent: int  # log2 of every nonzero expectation

    def dyad_values(self) -> tuple[np.ndarray, int]:
        """Nonzero pattern of <|out><in|> over (out, in) and its common log2 value."""
        same = self.syndromes[:, None] == self.syndromes[None, :]
        return same & self.consistent[None, :], self.exponent


def support_table(state: CosetState, support, tuples=None) -> SupportTable:
    support = tuple(support)
    if tuples is None:
        tuples = list(itertools.product(range(4), repeat=len(support)))
    proj = state.system.projection(support)
    syn = np.array([letters_syndrome(state.lattice, support, t) for t in tuples], dtype=object)
    cons = np.array([proj.count(t) > 0 for t in tuples], dtype=bool)
    return SupportTable(list(tuples), syn, cons, proj.fibre - state.log2_M)


def connected_pattern_check(
    state: CosetState, sup_i, sup_j, tuples_i=None, tuples_j=None
) -> tuple[bool, dict]:
    """Whether every dyad-pair connected correlation on (sup_i, sup_j) is exactly zero.

    The joint value of ``|a><a'| (x) |c><c'|`` is nonzero iff the combined
    syndrome change vanishes and (a', c') occurs in the state.
    """
    ti = support_table(state, sup_i, tuples_i)
    tj = support_table(state, sup_j, tuples_j)
    joint_tuples = [a + c for a in ti.tuples for c in tj.tuples]
    proj = state.system.projection(tuple(sup_i) + tuple(sup_j))
    cons_ij = np.array([proj.count(t) > 0 for t in joint_tuples], dtype=bool).reshape(len(ti.tuples), len(tj.tuples))
    e_ij = proj.fibre - state.log2_M

    xi = ti.syndromes[:, None] ^ ti.syndromes[None, :]
    xj = tj.syndromes[:, None] ^ tj.syndromes[None, :]
    # integer codes for the syndrome differences so the 4-index comparison is numeric
    codes: dict[int, int] = {}
    ci = np.vectorize(lambda m: codes.setdefault(m, len(codes)), otypes=[np.int64])(xi)
    cj = np.vectorize(lambda m: codes.setdefault(m, len(codes)), otypes=[np.int64])(xj)
    joint = (ci[:, :, None, None] == cj[None, None, :, :]) & cons_ij[None, :, None, :]
    zero = codes.get(0, -1)
    single_i = (ci == zero) & ti.consistent[None, :]
    single_j = (cj == zero) & tj.consistent[None, :]
    product = single_i[:, :, None, None] & single_j[None, None, :, :]
    pattern_ok = bool(np.array_equal(joint, product))
    exponent_ok = (not joint.any()) or e_ij == ti.exponent + tj.exponent
    info = {
        "pairs_checked": int(joint.size),
        "nonzero_joint": int(joint.sum()),
        "joint_exponent": e_ij,
        "single_exponents": [ti.exponent, tj.exponent],
    }
    return pattern_ok and exponent_ok, info


# ----------------------------------------------------------------------
# single-site suite
# ----------------------------------------------------------------------
@dataclass
class CorrelationReport:
    generation: int
    checks: int = 0
    failures: list[dict] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "generation": self.generation,
            "checks": self.checks,
            "failures": self.failures,
            "values": {k: (v.to_json() if isinstance(v, ExactScalar) else v) for k, v in self.values.items()},
            "passed": self.passed,
        }


QUARTER = ExactScalar(1, 0, -2)
SIXTEENTH = ExactScalar(1, 0, -4)


def single_site_suite(lattice: Lattice, pairs=None) -> CorrelationReport:
    """Single-qudit expectations and nonadjacent pair correlations of Psi."""
    psi = build_psi(lattice)
    rep = CorrelationReport(lattice.generation)
    for v in lattice.vertices:
        for a, b in itertools.product(range(4), repeat=2):
            val = expectation(psi, LocalOperator.dyad((v,), (a,), (b,)))
            want = QUARTER if a == b else ExactScalar(0)
            rep.checks += 1
            if val != want:
                rep.failures.append({"site": v, "out": a, "in": b, "value": val.to_json()})
    if pairs is None:
        pairs = [
            (i, j)
            for i in lattice.vertices
            for j in lattice.vertices
            if i < j and not lattice.are_adjacent(i, j)
        ]
    for i, j in pairs:
        ok, info = connected_pattern_check(psi, (i,), (j,))
        rep.checks += info["pairs_checked"]
        if not ok:
            rep.failures.append({"pair": [i, j], "kind": "connected", **info})
        for a, c in itertools.product(range(4), repeat=2):
            val = expectation(psi, LocalOperator.dyad((i, j), (a, c), (a, c)))
            rep.checks += 1
            if val != SIXTEENTH:
                rep.failures.append({"pair": [i, j], "letters": [a, c], "value": val.to_json()})
    rep.values = {"single_diagonal": QUARTER, "pair_diagonal": SIXTEENTH, "nonadjacent_pairs": len(pairs)}
    return rep


# ----------------------------------------------------------------------
# block-level suite
# ----------------------------------------------------------------------
A_SECTOR = [t for t in itertools.product(range(4), repeat=3) if u_block(t) is not None]


def blocks_adjacent(lattice: Lattice, b1: int, b2: int) -> bool:
    s1 = set(range(3 * b1, 3 * b1 + 3))
    return any(w // 3 == b2 for v in s1 for w in lattice.neighbors(v) if w >= 0)


def _value_array(state: CosetState, sup_i, sup_j, tuples_i, tuples_j):
    """Exact joint dyad values as (nonzero pattern [a, a', c, c'], log2 value)."""
    ti = support_table(state, sup_i, tuples_i)
    tj = support_table(state, sup_j, tuples_j)
    proj = state.system.projection(tuple(sup_i) + tuple(sup_j))
    cons = np.array([[proj.count(a + c) > 0 for c in tj.tuples] for a in ti.tuples], dtype=bool)
    xi = ti.syndromes[:, None] ^ ti.syndromes[None, :]
    xj = tj.syndromes[:, None] ^ tj.syndromes[None, :]
    eq = np.frompyfunc(lambda p, q: p == q, 2, 1)
    joint = eq(xi[:, :, None, None], xj[None, None, :, :]).astype(bool) & cons[None, :, None, :]
    single_i = ((xi == 0) & ti.consistent[None, :]).astype(bool)
    return joint, proj.fibre - state.log2_M, single_i, ti.exponent


def block_correlation_suite(lattice: Lattice, block_pairs=None) -> CorrelationReport:
    """Nonadjacent block pairs: direct connected correlations and the coarse reduction.

    The reduction predicts ``<E_i E_j> = <o o'>_coarse / 64`` and
    ``<E_i> = <o>_coarse / 8`` where ``o`` carries the coarse letters of the
    a-sector triples and each Gamma overlap contributes 1/sqrt8.
    """
    if lattice.generation < 3:
        raise UnsupportedGeneration("block-level correlations need generation >= 3")
    psi = build_psi(lattice)
    coarse = build_lattice(lattice.generation - 1)
    cpsi = build_psi(coarse)
    rep = CorrelationReport(lattice.generation)
    coarse_of = np.array([u_block(t)[0] for t in A_SECTOR])

    # b-sector annihilation: no Psi solution puts a b-sector triple on a block
    b_sector = [t for t in itertools.product(range(4), repeat=3) if u_block(t) is None]
    for b in range(lattice.n_blocks):
        tab = support_table(psi, block_sites(b), b_sector)
        rep.checks += len(b_sector)
        if tab.consistent.any():
            rep.failures.append({"block": b, "kind": "b_sector_support"})

    if block_pairs is None:
        block_pairs = [
            (b1, b2)
            for b1 in range(lattice.n_blocks)
            for b2 in range(b1 + 1, lattice.n_blocks)
            if not blocks_adjacent(lattice, b1, b2)
        ]
    letters = [(a,) for a in range(4)]
    for b1, b2 in block_pairs:
        s1, s2 = block_sites(b1), block_sites(b2)
        ok, info = connected_pattern_check(psi, s1, s2, A_SECTOR, A_SECTOR)
        rep.checks += info["pairs_checked"]
        if not ok:
            rep.failures.append({"blocks": [b1, b2], "kind": "connected", **info})

        joint, e_joint, single, e_single = _value_array(psi, s1, s2, A_SECTOR, A_SECTOR)
        cjoint, ce_joint, csingle, ce_single = _value_array(cpsi, (b1,), (b2,), letters, letters)
        ix = np.ix_(coarse_of, coarse_of, coarse_of, coarse_of)
        pred_joint = cjoint[ix]
        pred_single = csingle[np.ix_(coarse_of, coarse_of)]
        same_joint = np.array_equal(joint, pred_joint) and (not joint.any() or e_joint == ce_joint - 6)
        same_single = np.array_equal(single, pred_single) and (not single.any() or e_single == ce_single - 3)
        if not (same_joint and same_single):
            rep.failures.append({"blocks": [b1, b2], "kind": "reduction_mismatch"})
    rep.values = {"block_pairs": len(block_pairs)}
    return rep
