import json

import pytest

from sierpinski_lre.cli import dumps, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_json(capsys):
    code, out, _ = call(capsys, "bound", "--p", "1", "--l", "1")
    assert code == 0
    assert json.loads(out) == {"threshold": "13/3", "min_generation": 3, "dj_cap": 1}


def test_detect_gen1_is_usage_error(capsys):
    code, _, err = call(capsys, "detect", "--gen", "1")
    assert code == 1 and "generation" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = call(capsys, "bound", "--p", "1", "--l", "1", "--bogus")
    assert code == 1 and "usage" in err


def test_resource_error_exit_code(capsys):
    code, _, _ = call(capsys, "prepare", "--gen", "3")
    assert code == 1


def test_lattice_and_csv(capsys, tmp_path):
    code, out, _ = call(capsys, "lattice", "--gen", "2")
    d = json.loads(out)
    assert code == 0 and d["diameter"] == 3 and len(d["vertices"]) == 9
    target = tmp_path / "dist.csv"
    code, _, _ = call(capsys, "lattice", "--gen", "2", "--format", "csv", "--out", str(target))
    rows = target.read_text(encoding="utf-8").splitlines()
    assert len(rows) == 10
    manifest = json.loads((tmp_path / "dist.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "lattice" and len(manifest["output_digest"]) == 64


def test_count_and_expect(capsys):
    code, out, _ = call(capsys, "count", "--gen", "2", "--fix", "0=1")
    d = json.loads(out)
    assert (d["M"], d["count"], d["nullity"]) == (4096, 1024, 12)
    code, out, _ = call(capsys, "expect", "--gen", "3", "--support", "4", "--op", "2:2")
    d = json.loads(out)
    assert d["rational"] == "1/4" and d["value"] == {"a": 1, "b": 0, "e": -2}
    code, _, _ = call(capsys, "expect", "--gen", "3", "--support", "4", "--op", "22:2")
    assert code == 1


def test_correlate_csv(capsys, tmp_path):
    target = tmp_path / "c.csv"
    code, _, _ = call(capsys, "correlate", "--gen", "2", "--i", "0", "--j", "8", "--format", "csv", "--out", str(target))
    rows = target.read_text().splitlines()
    assert code == 0
    assert rows[0] == "vertex_i,vertex_j,distance,op_in,op_out,value_num,value_den"
    assert len(rows) == 257 and all(r.split(",")[5] == "0" for r in rows[1:])


def test_tensor_and_ops(capsys):
    code, out, _ = call(capsys, "tensor", "check")
    d = json.loads(out)
    assert code == 0 and d["lambda"] == {"a": 0, "b": 1, "e": 1}
    assert d["oracle_equivalence"] == {"gen1": True, "gen2": True}
    code, out, _ = call(capsys, "ops", "dump")
    assert code == 0 and "W_plus" in json.loads(out)


def test_detect_writes_csv(capsys, tmp_path):
    target = tmp_path / "d.csv"
    code, _, _ = call(capsys, "detect", "--gen", "2", "--samples", "100", "--format", "csv", "--out", str(target))
    assert code == 0
    assert target.read_text().splitlines()[0] == "support,diameter,ops_checked,failures"
    assert json.loads((tmp_path / "d.csv.json").read_text())["passed"]


def test_flipper_prepare_canon(capsys):
    code, out, _ = call(capsys, "flipper", "--gen", "2", "--forbid", "0,4,8")
    d = json.loads(out)
    assert code == 0 and d["flipper"] == [[1, 1], [2, 1], [5, 1]] and d["validated"]
    code, out, _ = call(capsys, "flipper", "--gen", "2", "--forbid", ",".join(map(str, range(9))))
    assert code == 0 and json.loads(out)["flipper"] is None
    code, out, _ = call(capsys, "prepare", "--gen", "2")
    assert code == 0 and json.loads(out)["equals_psi"]
    code, out, _ = call(capsys, "canon", "--gen", "3", "--samples", "3", "--seed", "5")
    assert code == 0 and all(len(s["forms"]) == 2 for s in json.loads(out)["samples"])


def test_determinism(capsys):
    _, a, _ = call(capsys, "canon", "--gen", "2", "--samples", "2", "--seed", "3")
    _, b, _ = call(capsys, "canon", "--gen", "2", "--samples", "2", "--seed", "3")
    assert a == b
    _, c, _ = call(capsys, "canon", "--gen", "2", "--samples", "2", "--seed", "4")
    assert a != c


def test_verify_all_gen2(capsys):
    code, out, err = call(capsys, "verify-all", "--gen", "2", "--samples", "2000", "--canon-samples", "50", "--cone-starts", "50")
    assert code == 0 and json.loads(out)["passed"]
    assert err.count("[PASS]") == 10


def test_dumps_sorts_and_encodes():
    from fractions import Fraction

    from sierpinski_lre.scalar import ExactScalar

    text = dumps({"b": Fraction(1, 3), "a": ExactScalar(0, 1, 1)})
    assert text.index('"a"') < text.index('"b"') and '"1/3"' in text
    with pytest.raises(TypeError):
        dumps({"x": object()})
