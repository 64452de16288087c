"""Aggregate checks run by ``verify-all``; each returns a pass flag and details."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .constraints import build_system, count_solutions, enumerate_solutions, make_rng, sample_solution
from .errors import ConventionViolation
from .lattice import LATERAL, build_lattice, expected_loop_count
from .scalar import ZERO
from .states import (
    LocalOperator,
    block_decompose_check,
    build_phi,
    build_psi,
    materialize,
    matrix_element,
)
from .tensor import a2_a3_even, block_contraction_support, check_scale_invariance, contract_network


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def check_lattice(max_gen: int) -> CheckResult:
    rows = []
    ok = True
    for g in range(1, max_gen + 1):
        lat = build_lattice(g)
        n = lat.n_vertices
        inc = Counter((v, s) for lp in lat.loops for v, s in lp.incidences)
        per_vertex = Counter(v for lp in lat.loops for v in set(lp.vertices))
        lateral_links = 2**g - 1
        good = (
            n == 3**g
            and len(lat.loops) == expected_loop_count(g)
            and lat.diameter == lateral_links
            and len(inc) == 3 * n
            and all(c == 1 for c in inc.values())
            and all(per_vertex[v] == 3 for v in lat.vertices)
        )
        ok &= good
        rows.append({"generation": g, "vertices": n, "loops": len(lat.loops), "diameter": lat.diameter, "ok": good})
    return CheckResult("lattice_structure", ok, {"generations": rows})


def check_oracle(max_gen: int) -> CheckResult:
    out = {}
    ok = True
    for g in range(1, min(max_gen, 2) + 1):
        lat = build_lattice(g)
        psi = materialize(build_psi(lat))
        ratio = contract_network(lat).proportionality(psi)
        good = ratio is not None and float(ratio) > 0
        out[f"gen{g}"] = {"states": len(psi), "ratio": ratio.to_json() if ratio is not None else None, "ok": good}
        ok &= good
    return CheckResult("oracle_equivalence", ok, out)


def check_lambda() -> CheckResult:
    try:
        lam = check_scale_invariance()
    except ConventionViolation as exc:
        return CheckResult("scale_invariance", False, {"error": str(exc)})
    support_ok = all(a2_a3_even(t) for t in block_contraction_support())
    return CheckResult("scale_invariance", support_ok, {"lambda": lam.to_json()})


def check_correlations(gen: int) -> CheckResult:
    from .experiments.correlations import single_site_suite

    if gen < 2:
        return CheckResult("correlations", True, {"skipped": "needs generation >= 2"})
    rep = single_site_suite(build_lattice(gen))
    return CheckResult("correlations", rep.passed, {"checks": rep.checks, "failures": rep.failures[:10]})


def check_blocks(gen: int) -> CheckResult:
    from .experiments.correlations import block_correlation_suite

    details = {}
    ok = True
    if gen >= 2:
        dec = block_decompose_check(build_lattice(2))
        details["decomposition"] = dec.to_json()
        ok &= dec.passed and dec.total == 4096
    if gen >= 3:
        rep = block_correlation_suite(build_lattice(3))
        details["block_suite"] = {"checks": rep.checks, "failures": rep.failures[:10]}
        ok &= rep.passed
    return CheckResult("block_correlations", ok, details)


def check_code(gen: int) -> CheckResult:
    from .experiments.flipper import find_syndrome_flipper, validate_flipper_explicit, validate_flipper_sampled

    if gen < 2:
        return CheckResult("psi_phi_code", True, {"skipped": "needs generation >= 2"})
    lat = build_lattice(gen)
    psi, phi = build_psi(lat), build_phi(lat)
    overlap = matrix_element(phi, LocalOperator.identity(), psi)
    # corners excluded: a corner S^1 flips two laterals at once and gives a shorter, nonlocal flipper
    flip = find_syndrome_flipper(lat, forbidden=lat.corners)
    shortest = find_syndrome_flipper(lat)
    if flip is None:
        return CheckResult("psi_phi_code", False, {"overlap": overlap.to_json(), "flipper": None})
    if gen <= 2:
        maps = validate_flipper_explicit(lat, flip)
    else:
        maps = validate_flipper_sampled(lat, flip)
    ok = overlap == ZERO and maps and len(flip) == 3
    details = {
        "overlap": overlap.to_json(),
        "flipper": [list(p) for p in flip],
        "maps_psi_to_phi": maps,
        "shortest_flipper": [list(p) for p in shortest],
    }
    return CheckResult("psi_phi_code", ok, details)


def check_detection(gen: int, samples: int, seed: int) -> CheckResult:
    from .experiments.detection import error_detection_suite, flipper_negative_control
    from .experiments.flipper import v1_flipper

    if gen < 2:
        return CheckResult("error_detection", True, {"skipped": "needs generation >= 2"})
    lat = build_lattice(gen)
    rep = error_detection_suite(lat, max_exhaustive_size=4, sample_budget=samples, seed=seed)
    neg = flipper_negative_control(lat, v1_flipper(lat))
    ok = rep.passed and not neg["detected"]
    details = rep.to_json()
    details["failures"] = details["failures"][:10]
    details["negative_control_detected"] = neg["detected"]
    return CheckResult("error_detection", ok, details)


def check_depth(gen: int, seed: int, starts: int) -> CheckResult:
    from .experiments.depth import causal_cone_check, depth_bound, inverse_depth_bound

    ok = True
    table = []
    for P in (1, 2, 3):
        for L in (1, 2, 3, 4):
            b = depth_bound(P, L)
            D = 2 ** b["min_generation"] - 1
            inv = inverse_depth_bound(D, P)
            # at the threshold diameter the depth L is too shallow: L must exceed the inverse bound
            good = inv["l_strict_lower"] >= L and b["dj_cap"] == (2 * L - 1) * P
            ok &= good
            table.append({"P": P, "L": L, "threshold": str(b["threshold"]), "min_generation": b["min_generation"], "ok": good})
    cones = []
    lat = build_lattice(min(max(gen, 1), 4))
    for P, L in ((1, 1), (1, 2), (2, 1)):
        rep = causal_cone_check(lat, P, L, seed=seed, starts=starts)
        ok &= rep.passed
        cones.append(rep.to_json())
    return CheckResult("depth_bound", ok, {"table": table, "causal_cone": cones})


def check_circuits(gen: int, samples: int, seed: int) -> CheckResult:
    from .experiments.circuits import canonicalize, ergodicity_check, prepare_by_circuit, replay

    details = {}
    ok = True
    for g in range(1, min(gen, 2) + 1):
        lat = build_lattice(g)
        prep = prepare_by_circuit(lat)
        erg = ergodicity_check(lat)
        ok &= prep["equals_psi"] and erg["ergodic"]
        details[f"gen{g}"] = {"equals_psi": prep["equals_psi"], "orbit_size": erg["orbit_size"], "M": erg["M"]}
    lat = build_lattice(gen)
    rng = make_rng(seed)
    full = build_system(lat)
    free = build_system(lat, free_loops=lat.loop_indices(LATERAL))
    zero = (0,) * lat.n_vertices
    bad = 0
    for _ in range(samples):
        x = sample_solution(full, rng)
        r = canonicalize(lat, x, respect_laterals=True)
        bad += r.chi0 != zero or replay(lat, x, r.forms[0][1]) != zero
        y = sample_solution(free, rng)
        r = canonicalize(lat, y)
        bad += len(r.forms) != 2 or any(replay(lat, y, m) != f for f, m in r.forms)
    ok &= bad == 0
    details["canonicalize"] = {"generation": gen, "samples": samples, "failures": bad}
    return CheckResult("circuits_ergodicity", ok, details)


def check_m_values(max_gen: int) -> CheckResult:
    rows = []
    ok = True
    for g in range(1, max_gen + 1):
        lat = build_lattice(g)
        s = build_system(lat)
        M = count_solutions(s)
        want = 2 ** (2 * 3**g - len(lat.loops) + 1)
        good = M == want
        if g <= 2:
            enumerated = sum(1 for _ in enumerate_solutions(s))
            good &= enumerated == M
        ok &= good
        rows.append({"generation": g, "log2_M": s.nullity, "ok": good})
    ok &= count_solutions(build_system(build_lattice(1))) == 8
    ok &= count_solutions(build_system(build_lattice(2))) == 4096
    return CheckResult("m_values", ok, {"generations": rows})


def run_all(gen: int, seed: int = 0, samples: int = 100_000, canon_samples: int = 1000, cone_starts: int = 1000) -> list[CheckResult]:
    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("1", lambda: check_lattice(max(gen, 6))),
        ("2", lambda: check_oracle(gen)),
        ("3", check_lambda),
        ("4", lambda: check_correlations(gen)),
        ("5", lambda: check_blocks(gen)),
        ("6", lambda: check_code(gen)),
        ("7", lambda: check_detection(gen, samples, seed)),
        ("8", lambda: check_depth(gen, seed, cone_starts)),
        ("9", lambda: check_circuits(gen, canon_samples, seed)),
        ("10", lambda: check_m_values(max(gen, 6))),
    ]
    results = []
    for _, fn in checks:
        t = time.perf_counter()
        r = fn()
        r.seconds = time.perf_counter() - t
        results.append(r)
    return results
