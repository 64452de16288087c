"""Command-line entry point.

Every subcommand prints (or writes with ``--out``) a deterministic report:
sorted keys, rationals as ``"num/den"`` strings and exact scalars as
``{a, b, e}``.  A run manifest goes next to the output file, or to stderr.
Exit status: 0 success, 2 a checked property failed, 1 usage or resource error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .algebra import dump_tables
from .constraints import build_system, count_with_assignment
from .errors import LREError
from .lattice import LATERAL, build_lattice, graph_distance
from .scalar import ExactScalar
from .states import LocalOperator, build_phi, build_psi, connected_correlation, expectation, matrix_element

EXIT_OK, EXIT_USAGE, EXIT_PROPERTY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _encode(obj: Any):
    if isinstance(obj, ExactScalar):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_encode) + "\n"


def _rational(x: ExactScalar) -> Fraction:
    return x.to_fraction()


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _letters(text: str) -> tuple[int, ...]:
    if not text or any(c not in "0123" for c in text):
        raise UsageError(f"letters must be a string over 0..3, got {text!r}")
    return tuple(int(c) for c in text)


# ----------------------------------------------------------------------
# subcommands; each returns (payload, exit code, optional csv rows)
# ----------------------------------------------------------------------
def cmd_lattice(args):
    lat = build_lattice(args.gen)
    rows = None
    if args.format == "csv":
        rows = [["u"] + list(lat.vertices)]
        for u in lat.vertices:
            dist = lat.bfs(u)
            rows.append([u] + [dist[v] for v in lat.vertices])
    return lat.to_dict(), EXIT_OK, rows


def cmd_ops(args):
    if args.action != "dump":
        raise UsageError("ops supports only 'dump'")
    return dump_tables(), EXIT_OK, None


def cmd_count(args):
    lat = build_lattice(args.gen)
    system = build_system(lat)
    fixed = {}
    for item in args.fix or []:
        try:
            v, a = item.split("=")
            fixed[int(v)] = int(a)
        except ValueError:
            raise UsageError(f"--fix expects vertex=letter, got {item!r}")
        if fixed[int(v)] not in range(4):
            raise UsageError("letters are 0..3")
    for v in fixed:
        lat._check_vertex(v)
    payload = {
        "generation": args.gen,
        "M": 1 << system.nullity if system.consistent else 0,
        "rank": system.rank,
        "nullity": system.nullity,
        "fixed": {str(v): a for v, a in sorted(fixed.items())},
        "count": count_with_assignment(system, fixed),
    }
    return payload, EXIT_OK, None


def _state(lat, name):
    return build_psi(lat) if name == "psi" else build_phi(lat)


def cmd_expect(args):
    lat = build_lattice(args.gen)
    support = _ints(args.support)
    out_l, in_l = (_letters(p) for p in args.op.split(":")) if ":" in args.op else (None, None)
    if out_l is None or len(out_l) != len(support) or len(in_l) != len(support):
        raise UsageError("--op must be OUT:IN letter strings matching the support length")
    op = LocalOperator.dyad(support, out_l, in_l)
    bra, ket = _state(lat, args.bra), _state(lat, args.ket)
    val = matrix_element(bra, op, ket)
    payload = {
        "generation": args.gen,
        "support": support,
        "op_out": "".join(map(str, out_l)),
        "op_in": "".join(map(str, in_l)),
        "bra": args.bra,
        "ket": args.ket,
        "value": val,
        "rational": _rational(val) if val.is_rational else None,
    }
    return payload, EXIT_OK, None


def cmd_correlate(args):
    from .experiments.correlations import single_site_suite

    lat = build_lattice(args.gen)
    psi = build_psi(lat)
    if args.i is not None or args.j is not None:
        if args.i is None or args.j is None:
            raise UsageError("--i and --j go together")
        pairs = [(args.i, args.j)]
    else:
        pairs = [(i, j) for i in lat.vertices for j in lat.vertices if i < j and not lat.are_adjacent(i, j)]
        if args.max_pairs is not None:
            pairs = pairs[: args.max_pairs]
    rows = None
    if args.format == "csv":
        rows = [["vertex_i", "vertex_j", "distance", "op_in", "op_out", "value_num", "value_den"]]
        for i, j in pairs:
            d = graph_distance(lat, i, j)
            for a, b, c, e in itertools.product(range(4), repeat=4):
                val = connected_correlation(
                    psi, LocalOperator.dyad((i,), (a,), (b,)), LocalOperator.dyad((j,), (c,), (e,))
                )
                q = _rational(val)
                rows.append([i, j, d, f"{b}{e}", f"{a}{c}", q.numerator, q.denominator])
    rep = single_site_suite(lat, pairs=pairs)
    payload = {"generation": args.gen, "pairs": [list(p) for p in pairs][:50], **rep.to_json()}
    return payload, EXIT_OK if rep.passed else EXIT_PROPERTY, rows


def cmd_tensor(args):
    from .tensor import a2_a3_even, block_contraction_support, check_scale_invariance, oracle_equivalence
    from .states import materialize

    if args.action != "check":
        raise UsageError("tensor supports only 'check'")
    lam = check_scale_invariance()
    support_match = all(a2_a3_even(t) for t in block_contraction_support())
    oracle = {}
    for g in (1, 2):
        lat = build_lattice(g)
        oracle[f"gen{g}"] = oracle_equivalence(lat, materialize(build_psi(lat)))
    payload = {"lambda": lam, "support_match": support_match, "oracle_equivalence": oracle}
    ok = support_match and all(oracle.values())
    return payload, EXIT_OK if ok else EXIT_PROPERTY, None


def cmd_detect(args):
    from .experiments.detection import error_detection_suite

    lat = build_lattice(args.gen)
    rep = error_detection_suite(lat, args.exhaustive_size, args.samples, args.seed)
    return rep.to_json(), EXIT_OK if rep.passed else EXIT_PROPERTY, rep.csv_rows()


def cmd_bound(args):
    from .experiments.depth import depth_bound, inverse_depth_bound

    payload = depth_bound(args.p, args.l)
    if args.diameter is not None:
        payload["inverse"] = inverse_depth_bound(args.diameter, args.p)
    return payload, EXIT_OK, None


def cmd_prepare(args):
    from .experiments.circuits import ergodicity_check, prepare_by_circuit

    lat = build_lattice(args.gen)
    res = prepare_by_circuit(lat)
    erg = ergodicity_check(lat)
    payload = {
        "generation": args.gen,
        "equals_psi": res["equals_psi"],
        "scalar": res["scalar"],
        "support_size": len(res["state"]),
        "ergodicity": erg,
    }
    ok = res["equals_psi"] and erg["ergodic"]
    return payload, EXIT_OK if ok else EXIT_PROPERTY, None


def cmd_canon(args):
    from .constraints import make_rng, sample_solution
    from .experiments.circuits import canonicalize, replay

    lat = build_lattice(args.gen)
    system = build_system(lat) if args.respect_laterals else build_system(lat, free_loops=lat.loop_indices(LATERAL))
    rng = make_rng(args.seed)
    samples = []
    ok = True
    for _ in range(args.samples):
        x = sample_solution(system, rng)
        res = canonicalize(lat, x, args.respect_laterals)
        replays = all(replay(lat, x, m) == f for f, m in res.forms)
        want = 1 if args.respect_laterals else 2
        ok &= replays and len(res.forms) == want
        samples.append({"input": list(x), "replays": replays, **res.to_json()})
    payload = {"generation": args.gen, "seed": args.seed, "respect_laterals": args.respect_laterals, "samples": samples}
    return payload, EXIT_OK if ok else EXIT_PROPERTY, None


def cmd_flipper(args):
    from .experiments.flipper import (
        FlipperQuery,
        find_syndrome_flipper,
        four_loop_mask,
        validate_flipper_explicit,
        validate_flipper_sampled,
    )

    lat = build_lattice(args.gen)
    if args.gen < 2:
        raise UsageError("the four-loop target needs generation >= 2")
    forbid = frozenset(_ints(args.forbid)) if args.forbid else frozenset()
    for v in forbid:
        lat._check_vertex(v)
    flip = find_syndrome_flipper(lat, FlipperQuery(four_loop_mask(lat), forbid))
    payload = {"generation": args.gen, "forbidden": sorted(forbid), "flipper": None, "validated": None}
    if flip is not None:
        payload["flipper"] = [list(p) for p in flip]
        payload["validated"] = validate_flipper_explicit(lat, flip) if args.gen <= 2 else validate_flipper_sampled(lat, flip, seed=args.seed)
    ok = payload["validated"] is not False
    return payload, EXIT_OK if ok else EXIT_PROPERTY, None


def cmd_verify_all(args):
    from .verify import run_all

    results = run_all(args.gen, seed=args.seed, samples=args.samples, canon_samples=args.canon_samples, cone_starts=args.cone_starts)
    for k, r in enumerate(results, 1):
        print(f"[{'PASS' if r.passed else 'FAIL'}] criterion {k}: {r.name}", file=sys.stderr)
    payload = {"generation": args.gen, "seed": args.seed, "results": [r.to_json() for r in results]}
    payload["passed"] = all(r.passed for r in results)
    return payload, EXIT_OK if payload["passed"] else EXIT_PROPERTY, None


# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="accepted for interface compatibility; runs serially")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--manifest", metavar="PATH")
    common.add_argument("--max-memory", metavar="BYTES", help="accepted for interface compatibility")

    p = _Parser(prog="sierpinski-lre", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=fn)
        return sp

    sp = add("lattice", cmd_lattice, help="lattice structure as JSON, distance matrix as CSV")
    sp.add_argument("--gen", type=int, required=True)
    sp = add("ops", cmd_ops, help="gate tables")
    sp.add_argument("action", choices=("dump",))
    sp = add("count", cmd_count, help="solution counts")
    sp.add_argument("--gen", type=int, required=True)
    sp.add_argument("--fix", action="append", metavar="VERTEX=LETTER")
    sp = add("expect", cmd_expect, help="one exact matrix element")
    sp.add_argument("--gen", type=int, required=True)
    sp.add_argument("--support", required=True, help="comma-separated vertices")
    sp.add_argument("--op", required=True, help="OUT:IN letter strings, e.g. 01:01")
    sp.add_argument("--bra", choices=("psi", "phi"), default="psi")
    sp.add_argument("--ket", choices=("psi", "phi"), default="psi")
    sp = add("correlate", cmd_correlate, help="connected correlations of site dyads")
    sp.add_argument("--gen", type=int, required=True)
    sp.add_argument("--i", type=int)
    sp.add_argument("--j", type=int)
    sp.add_argument("--max-pairs", type=int)
    sp = add("tensor", cmd_tensor, help="tensor-network oracle checks")
    sp.add_argument("action", choices=("check",))
    sp = add("detect", cmd_detect, help="error-detection suite")
    sp.add_argument("--gen", type=int, required=True)
    sp.add_argument("--exhaustive-size", type=int, default=4)
    sp.add_argument("--samples", type=int, default=100_000)
    sp = add("bound", cmd_bound, help="circuit-depth bound arithmetic")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--diameter", type=int)
    sp = add("prepare", cmd_prepare, help="circuit preparation and T-orbit")
    sp.add_argument("--gen", type=int, required=True)
    sp = add("canon", cmd_canon, help="canonical forms of sampled solutions")
    sp.add_argument("--gen", type=int, required=True)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--respect-laterals", action="store_true")
    sp = add("flipper", cmd_flipper, help="syndrome flipper search")
    sp.add_argument("--gen", type=int, required=True)
    sp.add_argument("--forbid", default="")
    sp = add("verify-all", cmd_verify_all, help="run every acceptance check at one generation")
    sp.add_argument("--gen", type=int, required=True)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--canon-samples", type=int, default=1000)
    sp.add_argument("--cone-starts", type=int, default=1000)
    return p


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        if args.command == "detect" and args.gen < 2:
            raise UsageError("detect needs generation >= 2 (Phi is undefined at generation 1)")
        payload, code, rows = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LREError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = dumps(payload)
    if args.format == "csv" and rows is not None:
        out_text = _csv_text(rows)
    else:
        out_text = text
    _write(args.out, out_text)
    if args.format == "csv" and rows is not None and args.out:
        # keep the JSON report alongside the CSV
        _write(args.out + ".json", text)

    params = {k: v for k, v in vars(args).items() if k not in ("func", "out", "manifest")}
    manifest = {
        "tool_version": __version__,
        "subcommand": args.command,
        "parameters": params,
        "seed": args.seed,
        "wall_time": round(time.perf_counter() - started, 6),
        "output_digest": hashlib.sha256(out_text.encode("utf-8")).hexdigest(),
        "exit_code": code,
    }
    mpath = args.manifest or (args.out + ".manifest.json" if args.out else None)
    if mpath:
        _write(mpath, dumps(manifest))
    else:
        print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
