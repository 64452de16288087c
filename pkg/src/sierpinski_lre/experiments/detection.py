"""Error detection of the Psi/Phi pair by local letter-dyad operators.

For a dyad ``|out><in|`` on support J the three detection equalities reduce
to syndrome arithmetic.  With ``D(t)`` the loop mask toggled by letters ``t``
on J and ``s`` the Phi syndrome:

* ``<Psi|E|Phi> != 0``  iff  D(in)^D(out) == s and ``in`` occurs in Phi
* ``<Phi|E|Psi> != 0``  iff  D(in)^D(out) == s and ``in`` occurs in Psi
* ``<E>_Psi != <E>_Phi`` iff  D(in) == D(out) and the two counts differ

so all ``16**|J|`` dyads are covered by a histogram of D over ``4**|J|``
tuples.  A random subset of (J, E) is re-evaluated through the generic
matrix element routine as an independent path.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from ..constraints import make_rng
from ..errors import UnsupportedGeneration
from ..lattice import Lattice, connected_subsets_up_to, subset_diameter
from ..states import LocalOperator, build_phi, build_psi, letters_syndrome, matrix_element
from ..scalar import ZERO
from .flipper import FlipperQuery, find_syndrome_flipper, four_loop_mask


def detection_diameter_bound(diameter: int) -> int:
    return (3 * diameter - 5) // 8


@dataclass
class SupportResult:
    support: tuple[int, ...]
    diameter: int
    ops_checked: int
    failures: int
    flipper: tuple | None

    def csv_row(self) -> list:
        return [" ".join(map(str, self.support)), self.diameter, self.ops_checked, self.failures]


@dataclass
class DetectionReport:
    generation: int
    diameter: int
    bound: int
    supports_exhaustive: int = 0
    supports_sampled: int = 0
    ops_exhaustive: int = 0
    ops_sampled: int = 0
    seed: int = 0
    sample_budget: int = 0
    failures: list[dict] = field(default_factory=list)
    per_support: list[SupportResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "generation": self.generation,
            "diameter": self.diameter,
            "bound": self.bound,
            "supports_exhaustive": self.supports_exhaustive,
            "supports_sampled": self.supports_sampled,
            "ops_exhaustive": self.ops_exhaustive,
            "ops_sampled": self.ops_sampled,
            "seed": self.seed,
            "sample_budget": self.sample_budget,
            "failures": self.failures,
            "passed": self.passed,
        }

    def csv_rows(self) -> list[list]:
        return [["support", "diameter", "ops_checked", "failures"]] + [r.csv_row() for r in self.per_support]


def _check_support(lattice, psi, phi, s_phi, support) -> dict[str, int]:
    """Count dyads on ``support`` violating each detection equality."""
    k = len(support)
    p_psi = psi.system.projection(support)
    p_phi = phi.system.projection(support)
    tuples = list(itertools.product(range(4), repeat=k))
    d = [letters_syndrome(lattice, support, t) for t in tuples]
    hist = Counter(d)
    bad = {"psi_e_phi": 0, "phi_e_psi": 0, "expectation": 0}
    for t, dt in zip(tuples, d):
        c_psi = p_psi.count(t)
        c_phi = p_phi.count(t)
        partners = hist.get(dt ^ s_phi, 0)
        if c_phi:
            bad["psi_e_phi"] += partners
        if c_psi:
            bad["phi_e_psi"] += partners
        # <E>_Psi = c_psi / M, <E>_Phi = c_phi / M and both cosets have the same M
        if c_psi != c_phi:
            bad["expectation"] += hist[dt]
    return bad


def _check_dyad(psi, phi, support, out, inp) -> list[str]:
    op = LocalOperator.dyad(support, out, inp)
    wrong = []
    if matrix_element(psi, op, phi) != ZERO:
        wrong.append("psi_e_phi")
    if matrix_element(phi, op, psi) != ZERO:
        wrong.append("phi_e_psi")
    if matrix_element(psi, op, psi) != matrix_element(phi, op, phi):
        wrong.append("expectation")
    return wrong


def error_detection_suite(
    lattice: Lattice,
    max_exhaustive_size: int = 4,
    sample_budget: int = 100_000,
    seed: int = 0,
    max_sampled_size: int | None = None,
    diameter_bound: int | None = None,
) -> DetectionReport:
    """Check detection for every small connected support within the diameter bound.

    Supports up to ``max_exhaustive_size`` vertices get all dyads checked.
    Larger supports (up to ``max_sampled_size``) and a uniform sample of
    ``sample_budget`` (J, E) pairs go through the generic matrix element route.
    """
    if lattice.generation < 2:
        raise UnsupportedGeneration("detection needs Phi, which exists from generation 2")
    diameter = lattice.diameter
    bound = detection_diameter_bound(diameter) if diameter_bound is None else diameter_bound
    report = DetectionReport(lattice.generation, diameter, bound, seed=seed, sample_budget=sample_budget)
    if bound < 0:
        return report
    psi, phi = build_psi(lattice), build_phi(lattice)
    s_phi = four_loop_mask(lattice)
    if max_sampled_size is None:
        max_sampled_size = max_exhaustive_size + 2

    small, large = [], []
    for sup in connected_subsets_up_to(lattice, bound, max_sampled_size):
        (small if len(sup) <= max_exhaustive_size else large).append(sup)

    for sup in small:
        diam = subset_diameter(lattice, sup)
        bad = _check_support(lattice, psi, phi, s_phi, sup)
        flip = find_syndrome_flipper(lattice, FlipperQuery(s_phi, frozenset(sup)), min_weight_search=0)
        n_bad = sum(bad.values())
        if n_bad:
            report.failures.append({"support": list(sup), "kind": "detection", **bad})
        if flip is None:
            report.failures.append({"support": list(sup), "kind": "no_disjoint_flipper"})
        report.supports_exhaustive += 1
        report.ops_exhaustive += 16 ** len(sup)
        report.per_support.append(SupportResult(sup, diam, 16 ** len(sup), n_bad + (flip is None), flip))

    rng = make_rng(seed)
    for sup in large:
        flip = find_syndrome_flipper(lattice, FlipperQuery(s_phi, frozenset(sup)), min_weight_search=0)
        if flip is None:
            report.failures.append({"support": list(sup), "kind": "no_disjoint_flipper"})
        report.supports_sampled += 1
        report.per_support.append(SupportResult(sup, subset_diameter(lattice, sup), 0, int(flip is None), flip))

    pool = small + large
    if pool and sample_budget > 0:
        picks = rng.integers(0, len(pool), size=sample_budget)
        for i in picks:
            sup = pool[int(i)]
            letters = rng.integers(0, 4, size=2 * len(sup))
            out = tuple(int(x) for x in letters[: len(sup)])
            inp = tuple(int(x) for x in letters[len(sup):])
            wrong = _check_dyad(psi, phi, sup, out, inp)
            if wrong:
                report.failures.append(
                    {"support": list(sup), "kind": "sampled", "out": list(out), "in": list(inp), "violated": wrong}
                )
        report.ops_sampled = sample_budget
    return report


def flipper_negative_control(lattice: Lattice, flipper) -> dict:
    """The flipper as an error on its own support: it must not be detected."""
    psi, phi = build_psi(lattice), build_phi(lattice)
    op = LocalOperator.s_product(flipper)
    psi_v_phi = matrix_element(psi, op, phi)
    phi_v_psi = matrix_element(phi, op, psi)
    same = matrix_element(psi, op, psi) == matrix_element(phi, op, phi)
    return {
        "support": [v for v, _ in flipper],
        "psi_e_phi": psi_v_phi,
        "phi_e_psi": phi_v_psi,
        "expectations_equal": same,
        "detected": psi_v_phi == ZERO and phi_v_psi == ZERO and same,
    }
