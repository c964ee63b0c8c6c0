from __future__ import annotations

import json
import subprocess
import sys

import pytest

from flatunion.cli import main
from flatunion.constructions import planes_family_lines, random_family
from flatunion.harness import (
    SUITES,
    build_family,
    content_hash,
    measure,
    run_sweep,
    to_csv,
    to_jsonl,
    verify_suite,
)
from flatunion.incidence import load_family, save_family

RECORD_KEYS = [
    "kind", "construction", "p", "n", "k", "kprime", "d", "beta", "gamma", "lambda", "C",
    "seed", "size", "hypothesis_met", "union", "target", "ratio", "wolff_pass",
    "dplane_wolff_pass", "hash",
]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@pytest.fixture
def planar_file(tmp_path):
    path = tmp_path / "planar.json"
    save_family(planes_family_lines(2, 1, 4, 3), path)
    return path


# --- records and sweeps ---------------------------------------------------------


def test_record_key_order_and_hash():
    pt = {"p": 3, "n": 3, "k": 1, "kprime": 0, "d": 2, "beta": 1, "gamma": 1, "lambda": 1, "C": 1}
    fam = build_family("planes_family", pt, 0)
    rec = measure(fam, "planes_family", pt, 0).to_record()
    assert list(rec) == RECORD_KEYS
    assert rec["ratio"] == 1.0 and rec["union"] == 27 and rec["size"] == 36
    again = measure(build_family("planes_family", pt, 0), "planes_family", pt, 0).to_record()
    assert rec == again
    assert len(rec["hash"]) == 40
    assert content_hash({"a": 1}) != content_hash({"a": 2})


def test_kprime_target():
    pt = {"p": 2, "n": 4, "k": 2, "kprime": 1, "d": 3, "beta": 0, "gamma": 1, "lambda": 1, "C": 1}
    rec = measure(build_family("planes_family", pt, 0), "planes_family", pt, 0)
    # lines of one 3-plane over F_2 against q^((k'+1)(d-k')) = 2^4
    assert rec.union == 28 and rec.target == 16


def test_sweep_sharpness_suite():
    res = run_sweep(SUITES["sharpness"])
    assert [r.ratio for r in res.records] == [1.0, 1.0, 1.0]
    assert {(r.size, r.union) for r in res.records} == {(12, 9), (36, 27), (14, 8)}
    assert all(s["min_ratio"] == 1.0 for s in res.summary)


def test_sweep_skips_infeasible_points():
    cfg = {"grid": {"p": [2], "n": [3], "d": [2], "beta": [3]},
           "constructions": ["planes_family", "random", "bogus"]}
    res = run_sweep(cfg)
    assert not res.records
    reasons = [s["reason"] for s in res.skipped]
    assert len(reasons) == 3 and all(s["kind"] == "skip" for s in res.skipped)


def test_sweep_empty_grid():
    res = run_sweep({"blocks": []})
    assert res.rows() == []
    assert run_sweep({"grid": {}}).rows() == []


def test_sweep_grid_missing_axis():
    with pytest.raises(ValueError):
        run_sweep({"grid": {"p": [2]}})


def test_sweep_is_deterministic():
    cfg = SUITES["smoke"]
    a = to_jsonl(run_sweep(cfg).rows())
    b = to_jsonl(run_sweep(json.loads(json.dumps(cfg))).rows())
    assert a == b and a


def test_csv_export():
    rows = run_sweep(SUITES["sharpness"]).rows()
    text = to_csv(rows)
    header = text.splitlines()[0].split(",")
    assert header[: len(RECORD_KEYS)] == RECORD_KEYS
    assert len(text.splitlines()) == len(rows) + 1


@pytest.mark.parametrize("name", ["counts", "lemmas", "axioms", "refinement", "sharpness"])
def test_verify_suites_pass(name):
    checks = verify_suite(name)
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_verify_unknown_suite():
    with pytest.raises(ValueError):
        verify_suite("nope")


# --- command line -----------------------------------------------------------------


def test_cli_count(capsys):
    code, out, err = run(capsys, "count", "--p", "3", "--n", "2", "--k", "1")
    assert code == 0 and jsonl(out)[0]["value"] == 12 and err.strip() == "12"
    code, out, _ = run(capsys, "count", "containing", "--l", "1", "--k", "2", "--n", "3", "--p", "2")
    assert jsonl(out)[0]["value"] == 3
    code, out, _ = run(capsys, "count", "disjoint", "--l", "0", "--n", "2", "--p", "2")
    assert jsonl(out)[0]["value"] == 3
    code, out, _ = run(capsys, "count", "subspaces", "--n", "4", "--k", "2", "--p", "2")
    assert jsonl(out)[0]["value"] == 35


def test_cli_usage_errors(capsys):
    assert run(capsys, "count", "--p", "4")[0] == 2
    assert run(capsys, "count", "--k", "5", "--n", "2")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "axioms", "wolff")[0] == 2
    assert run(capsys, "axioms", "wolff", "--family", "/nonexistent.json")[0] == 2
    assert run(capsys, "sweep")[0] == 2
    assert run(capsys, "verify", "nope")[0] == 2


def test_cli_axioms_report_without_failing(capsys, planar_file):
    code, out, _ = run(capsys, "axioms", "wolff", "--family", str(planar_file))
    rec = jsonl(out)[0]
    assert code == 0 and rec["pass"] is False and rec["max_count"] == 12
    assert list(rec) == ["kind", "pass", "max_count", "threshold", "witness"]
    code, out, _ = run(capsys, "axioms", "dplane", "--d", "3", "--family", str(planar_file))
    assert code == 0 and jsonl(out)[0]["pass"] is True
    code, out, _ = run(capsys, "axioms", "wolff", "--exhaustive", "--family", str(planar_file))
    assert jsonl(out)[0]["max_count"] == 12


def test_cli_construct_roundtrip(capsys, tmp_path):
    out_path = tmp_path / "f.json"
    code, _, err = run(capsys, "construct", "planes", "--p", "3", "--n", "3", "--d", "2", "--N", "3",
                       "--out", str(out_path))
    assert code == 0 and "36 flats" in err
    assert load_family(out_path) == planes_family_lines(2, 3, 3, 3)
    for shape, extra in [("pencil", ["--N", "2"]), ("hairbrush", ["--density", "0.5"]),
                         ("random", ["--size", "5"]), ("skew", ["--size", "3"])]:
        code, out, _ = run(capsys, "construct", shape, *extra)
        assert code == 0 and json.loads(out)["k"] == 1
    assert run(capsys, "construct", "random")[0] == 2


def test_cli_pipeline_commands(capsys, tmp_path):
    path = tmp_path / "f.json"
    save_family(planes_family_lines(2, 3, 3, 3), path)
    code, out, _ = run(capsys, "decompose", "--d", "2", "--family", str(path))
    assert code == 0 and jsonl(out)[0]["N"] == 3
    code, out, _ = run(capsys, "refine", "--d", "2", "--beta", "1", "--family", str(path))
    assert code == 0 and jsonl(out)[0]["levels"][-1] == [27, 36]
    code, out, _ = run(capsys, "extract", "--d", "2", "--family", str(path))
    recs = jsonl(out)
    assert code == 0 and recs[-1]["N"] == 3 and recs[-1]["captured"] == 1.0
    code, out, _ = run(capsys, "hairbrush", "--d", "2", "--family", str(path))
    assert code == 0 and jsonl(out)[0]["case"] == 1
    code, out, _ = run(capsys, "search", "--size", "12", "--steps", "300", "--seed", "1")
    assert code == 0 and jsonl(out)[0]["union"] >= 9


def test_cli_refine_reports_hypothesis_failure(capsys, tmp_path):
    path = tmp_path / "f.json"
    save_family(random_family(3, 1, 5, 3, 0), path)
    code, _, err = run(capsys, "refine", "--lambda", "2", "--family", str(path))
    assert code == 1 and "hypothesis" in err


def test_cli_foliate(capsys):
    code, out, _ = run(capsys, "foliate", "--p", "2", "--n", "4", "--m", "1", "--k", "2", "--qint", "1")
    rec = jsonl(out)[0]
    assert code == 0 and rec["leaves"] == 7 and rec["violations"] == 0
    assert run(capsys, "foliate", "--p", "2", "--n", "3", "--m", "2", "--k", "2")[0] == 2


def test_cli_sweep_suite_and_config(capsys, tmp_path):
    code, out, err = run(capsys, "sweep", "--suite", "sharpness")
    recs = [r for r in jsonl(out) if r["kind"] == "experiment"]
    assert code == 0 and len(recs) == 3 and all(r["ratio"] == 1.0 for r in recs)
    assert "min ratio 1.0" in err
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SUITES["smoke"]))
    first = tmp_path / "a.jsonl"
    second = tmp_path / "b.jsonl"
    assert run(capsys, "sweep", "--config", str(cfg), "--out", str(first))[0] == 0
    assert run(capsys, "sweep", "--config", str(cfg), "--out", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    code, out, _ = run(capsys, "sweep", "--suite", "sharpness", "--format", "csv")
    assert out.splitlines()[0].startswith("kind,construction,p,n,k")
    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    code, out, _ = run(capsys, "sweep", "--config", str(empty))
    assert code == 0 and out == ""


def test_cli_verify(capsys):
    code, out, err = run(capsys, "verify", "counts")
    assert code == 0 and all(r["pass"] for r in jsonl(out)) and "pass" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flatunion.cli", "count", "--p", "2", "--n", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 28
