from __future__ import annotations

import json
import subprocess
import sys

import pytest
from conftest import DATA, GOLDEN, SUITE

from sparql2cypher.cli import main

BSBM = ["--catalog", str(DATA / "bsbm.catalog"), "--prefixes", str(DATA / "bsbm.prefixes")]
VERIFY = ["--dataset", str(DATA / "bsbm100.nt"), "--prefixes", str(DATA / "bsbm.prefixes")]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", ["count1", "nodefilter2", "relationship1_2", "reltype3"])
def test_translate_matches_golden(capsys, name):
    code, out, err = run(capsys, "translate", GOLDEN / f"{name}.rq", *BSBM, "--golden", GOLDEN)
    assert code == 0, err
    assert out.strip() == " ".join((GOLDEN / f"{name}.cypher").read_text().split())
    assert "matches" in err


def test_golden_mismatch_exits_3(capsys, tmp_path):
    wrong = tmp_path / "count1.cypher"
    wrong.write_text("MATCH (n) RETURN n\n")
    code, _, err = run(capsys, "translate", GOLDEN / "count1.rq", *BSBM, "--golden", wrong)
    assert code == 3
    assert "expected: MATCH (n) RETURN n" in err


def test_output_directory(capsys, tmp_path):
    code, out, _ = run(capsys, "translate", GOLDEN, *BSBM, "-o", tmp_path / "out")
    assert code == 0 and out == ""
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == [
        "count1.cypher",
        "nodefilter2.cypher",
        "relationship1_2.cypher",
        "reltype3.cypher",
    ]


def test_pretty_and_timing(capsys):
    code, out, err = run(capsys, "translate", SUITE / "mixed.rq", *BSBM, "--pretty", "--timing")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("MATCH") and any(l.startswith("OPTIONAL MATCH") for l in lines)
    assert "translated in" in err and "ms" in err


def test_several_files_are_labeled(capsys):
    code, out, _ = run(capsys, "translate", GOLDEN / "count1.rq", GOLDEN / "reltype3.rq", *BSBM)
    assert code == 0
    assert out.splitlines()[0] == "// count1.rq"


def test_unsupported_feature_exits_2(capsys, tmp_path):
    q = tmp_path / "minus.rq"
    q.write_text("PREFIX b: <http://bsbm.example.org/vocabulary/> SELECT ?x WHERE { ?x b:rF ?y MINUS { ?x b:rB ?z } }")
    code, out, err = run(capsys, "translate", q, *BSBM)
    assert code == 2 and out == ""
    assert "MINUS" in err


def test_missing_file_exits_1(capsys, tmp_path):
    code, _, err = run(capsys, "translate", tmp_path / "nope.rq", *BSBM)
    assert code == 1 and "nope.rq" in err


@pytest.mark.parametrize("sources", [[], ["--catalog", DATA / "bsbm.catalog", "--dataset", DATA / "bsbm100.nt"]], ids=["neither", "both"])
def test_exactly_one_catalog_source(capsys, sources):
    code, _, err = run(capsys, "translate", GOLDEN / "count1.rq", *sources)
    assert code == 2 and "exactly one catalog source" in err


def test_catalog_from_dataset_equals_translation_catalog(capsys):
    a = run(capsys, "translate", GOLDEN / "count1.rq", *BSBM)
    b = run(capsys, "translate", GOLDEN / "count1.rq", "--dataset", DATA / "bsbm100.nt", "--prefixes", DATA / "bsbm.prefixes")
    assert a == b


def test_catalog_command(capsys, tmp_path):
    code, out, err = run(capsys, "catalog", DATA / "reviews.nt")
    assert code == 0
    cat = json.loads(out)
    assert cat["relationship_types"] == ["http://bsbm.org/reviewFor"]
    assert "|T| = 1, |P| = 2" in err
    code, _, _ = run(capsys, "catalog", DATA / "bsbm100.nt", "-o", tmp_path / "c.json")
    assert code == 0
    assert json.loads((tmp_path / "c.json").read_text()) == json.loads((DATA / "bsbm.catalog").read_text())


def test_catalog_mixed_predicate(capsys, tmp_path):
    nt = tmp_path / "mixed.nt"
    nt.write_text('<http://x/a> <http://x/p> <http://x/b> .\n<http://x/c> <http://x/p> "v" .\n')
    code, _, err = run(capsys, "catalog", nt)
    assert code == 2 and "http://x/p" in err
    assert run(capsys, "catalog", nt, "--mixed-predicate", "edge")[0] == 0


def test_catalog_of_empty_dataset(capsys, tmp_path):
    nt = tmp_path / "empty.nt"
    nt.write_text("")
    code, out, err = run(capsys, "catalog", nt)
    assert code == 0 and json.loads(out) == {"relationship_types": [], "property_keys": []}
    assert "|T| = 0, |P| = 0" in err


def test_malformed_dataset(capsys, tmp_path):
    nt = tmp_path / "bad.nt"
    nt.write_text("<http://x/a> <http://x/p> .\n")
    code, _, err = run(capsys, "catalog", nt)
    assert code == 2 and "line 1" in err


def test_verify_suite(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", SUITE, *VERIFY, "--report", report)
    assert code == 0
    assert out.strip().splitlines()[-1] == "54/54 queries preserved their answers"
    data = json.loads(report.read_text())
    assert data["passed"] == data["total"] == 54
    assert all(q["passed"] for q in data["queries"])


def test_verify_refuses_large_dataset(capsys):
    code, _, err = run(capsys, "verify", SUITE / "mixed.rq", *VERIFY, "--node-bound", 10)
    assert code == 2 and "oracle bound of 10" in err


def test_verify_requires_dataset(capsys):
    code, _, err = run(capsys, "verify", SUITE / "mixed.rq", "--catalog", DATA / "bsbm.catalog")
    assert code == 2 and "--dataset is required" in err


def test_verify_detects_injected_fault(capsys):
    code, out, _ = run(capsys, "verify", SUITE / "relationship1_1.rq", *VERIFY, "--inject-fault")
    assert code == 3
    assert "FAIL relationship1_1" in out and "missing from Cypher answer" in out


def test_verify_reports_parse_errors(capsys, tmp_path):
    q = tmp_path / "bad.rq"
    q.write_text("SELECT ?x WHERE {")
    code, out, _ = run(capsys, "verify", q, *VERIFY)
    assert code == 3 and out.startswith("FAIL bad")


def test_translation_is_deterministic(capsys):
    first = run(capsys, "translate", SUITE, *BSBM)
    second = run(capsys, "translate", SUITE, *BSBM)
    assert first == second and first[0] == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sparql2cypher.cli", "translate", str(GOLDEN / "count1.rq"), *map(str, BSBM)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == " ".join((GOLDEN / "count1.cypher").read_text().split())
