from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cybe_forge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def b2_document():
    from cybe_forge.records import build_records, document
    return document(build_records("B2"))


def test_enumerate_b2_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--algebra", "B2")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "cybe-forge/1"
    assert [(r["vertex"], r["map"]) for r in doc["records"]] == [("alpha1", [[0, 2]]), ("alpha2", [[0, 2]])]


def test_enumerate_is_deterministic(capsys):
    first = run(capsys, "enumerate", "--algebra", "A2")[1]
    second = run(capsys, "enumerate", "--algebra", "A2")[1]
    assert first == second


def test_enumerate_a1_counts(capsys):
    assert len(json.loads(run(capsys, "enumerate", "--algebra", "A1")[1])["records"]) == 1
    doc = json.loads(run(capsys, "enumerate", "--algebra", "sl2", "--include-empty")[1])
    assert [r["triple_type"] for r in doc["records"]] == ["empty", "II"]


def test_enumerate_text_marks_vertex(capsys):
    code, out, _ = run(capsys, "enumerate", "--algebra", "A3", "--vertex", "alpha3", "--format", "text")
    assert code == 0
    assert "nodes: o0 o1 o2 x3" in out
    assert "triple II: {a0->a1, a1->a2, a2->a3}" in out
    assert "triple I: {a0->a1, a1->a2}" in out


@pytest.mark.parametrize("argv", [
    ["enumerate", "--algebra", "Q7"],
    ["enumerate", "--algebra", "E6"],
    ["enumerate", "--algebra", "A2", "--vertex", "alpha5"],
    ["uq", "--algebra", "A1", "--check", "nonsense"],
    ["uq", "--algebra", "Z1", "--check", "hopf"],
    ["enumerate"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_round_trip(capsys, tmp_path, b2_document):
    path = tmp_path / "b2.json"
    path.write_text(json.dumps(b2_document))
    code, out, _ = run(capsys, "verify", "--input", str(path))
    assert code == 0 and "2 record(s), 0 failing" in out


def test_verify_planted_mutation(capsys, tmp_path, b2_document):
    doc = json.loads(json.dumps(b2_document))
    doc["records"][1]["solution"][0]["scalar"] = "5/7"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--input", str(path))
    assert code == 1
    assert "cybe_verified (stored True, recomputed False)" in out


def test_verify_tampered_flag(capsys, tmp_path, b2_document):
    doc = json.loads(json.dumps(b2_document))
    doc["records"][0]["dim_i_prime"] = 99
    path = tmp_path / "flag.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--input", str(path))
    assert code == 1 and "dim_i_prime" in out


def test_verify_empty_and_garbage(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"schema": "cybe-forge/1", "records": []}))
    assert run(capsys, "verify", "--input", str(empty))[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run(capsys, "verify", "--input", str(bad))[0] == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"schema": "other/9", "records": []}))
    assert run(capsys, "verify", "--input", str(wrong))[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps([{"algebra": "B2"}]))
    assert run(capsys, "verify", "--input", str(broken))[0] == 2
    assert run(capsys, "verify", "--input", str(tmp_path / "missing.json"))[0] == 2


def test_uq_presentation_b2(capsys):
    code, out, _ = run(capsys, "uq", "--algebra", "B2", "--check", "presentation")
    assert code == 0
    assert "k_{delta-theta} = k_1^{-2} k_2^{-1}" in out


@pytest.mark.parametrize("check,label", [("hopf", "A1"), ("limit", "A2"), ("presentation", "A1")])
def test_uq_checks_pass(capsys, check, label):
    code, out, _ = run(capsys, "uq", "--algebra", label, "--check", check)
    assert code == 0 and out.strip().endswith(f"{check}: pass")


def test_uq_json_export(capsys):
    code, out, _ = run(capsys, "uq", "--algebra", "A1", "--check", "presentation", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "cybe-forge/1" and doc["relations"] and doc["problems"] == []


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cybe_forge.cli", "uq", "--algebra", "A1", "--check", "hopf"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
