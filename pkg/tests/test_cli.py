import json

import pytest

from normtrace import census as cn
from normtrace import cli
from normtrace.errors import AuditError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_field_info(capsys):
    code, doc, _ = run(capsys, "field-info", "--p", "2", "--m", "15")
    assert code == 0
    assert doc["q"] == "2" and doc["order"] == "32768"
    assert doc["group_factors"] == [["7", 1], ["31", 1], ["151", 1]]
    assert len(doc["modulus_coeffs"]) == 16
    assert doc["generator_encoding"].isdigit()


def test_order_additive(capsys):
    code, doc, _ = run(capsys, "order", "--p", "2", "--m", "15",
                       "--element", "1")
    assert code == 0
    assert doc == {"additive_order": "x+1", "additive_order_coeffs": [1, 1]}


def test_order_multiplicative(capsys):
    code, doc, _ = run(capsys, "order", "--p", "2", "--m", "6",
                       "--element", "1", "--multiplicative")
    assert code == 0
    assert doc == {"multiplicative_order": "1"}


def test_trace(capsys):
    code, doc, _ = run(capsys, "trace", "--p", "2", "--m", "15",
                       "--d", "5", "--element", "1")
    assert code == 0
    assert doc["trace_encoding"] == "1"  # odd tower degree over F_32


def test_factor_integer(capsys):
    code, doc, _ = run(capsys, "factor", "--n", "32767")
    assert code == 0
    assert doc == {"n": "32767",
                   "factors": [["7", 1], ["31", 1], ["151", 1]]}


def test_factor_poly(capsys):
    code, doc, _ = run(capsys, "factor", "--p", "2", "--m", "15",
                       "--poly", "x^15+1")
    assert code == 0
    assert doc["unit"] == 1
    degrees = sorted(len(f["poly_coeffs"]) - 1 for f in doc["factors"])
    assert degrees == [1, 2, 4, 4, 4]
    assert all(f["multiplicity"] == 1 for f in doc["factors"])


def test_solve_traces(capsys):
    code, doc, _ = run(capsys, "solve-traces", "--p", "2", "--m", "15",
                       "--d", "3,5", "--a", "893,317")
    assert code == 0
    assert doc["admissible"] is True
    assert doc["count"] == "256" and doc["dimension"] == 8
    assert len(doc["basis"]) == 8


def test_solve_traces_inadmissible(capsys):
    code, doc, _ = run(capsys, "solve-traces", "--p", "2", "--m", "15",
                       "--d", "3,5", "--a", "0,1")
    assert code == 0
    assert doc == {"admissible": False, "count": "0"}


def test_count_normal(capsys):
    code, doc, _ = run(capsys, "count-normal", "--p", "2", "--m", "15",
                       "--d", "3,5", "--a", "893,317")
    assert code == 0
    assert doc == {"count": "225"}


def test_check_bound(capsys):
    code, doc, _ = run(capsys, "check-bound", "--q", "2", "--m", "60",
                       "--d", "2,3")
    assert code == 0
    assert doc["verdict"] == "sufficient" and doc["mode"] == "exact"


def test_dispatch(capsys):
    code, doc, _ = run(capsys, "dispatch", "--q", "1334", "--m", "210",
                       "--d", "2,3,5,7")
    assert code == 0
    assert doc == {"verdict": "sufficient", "case": "k=4"}
    code, doc, _ = run(capsys, "dispatch", "--q", "1333", "--m", "210",
                       "--d", "2,3,5,7", "--full")
    assert code == 0
    assert doc["verdict"] == "insufficient"
    assert doc["notes"]
    assert doc["report"]["rhs_terms"]["threshold"] == "1334"


def test_census(capsys):
    code, doc, _ = run(capsys, "census", "--p", "3", "--m", "4",
                       "--d", "1")
    assert code == 0
    assert doc["totals"]["normal"] == "32"
    assert len(doc["profiles"]) == 3
    assert "elapsed_seconds" not in doc
    code, doc, _ = run(capsys, "census", "--p", "3", "--m", "4",
                       "--d", "1", "--timing")
    assert "elapsed_seconds" in doc


def test_verify_passes(capsys):
    code, doc, _ = run(capsys, "verify", "--p", "3", "--m", "4",
                       "--d", "1")
    assert code == 0
    assert doc["all_passed"] is True
    ids = [c["theorem_id"] for c in doc["checks"]]
    assert "character-sum-audit" in ids
    assert all(c["passed"] for c in doc["checks"])


def test_verify_failure_exit_code(capsys, monkeypatch):
    bad = [{"theorem_id": "forced", "expected": "0", "observed": "1",
            "passed": False}]
    monkeypatch.setattr(cn, "verify_theorems",
                        lambda *a, **k: list(bad))
    monkeypatch.setattr(cli, "_audit_check",
                        lambda *a, **k: {"theorem_id": "audit",
                                         "expected": "", "observed": "",
                                         "passed": True})
    code, doc, _ = run(capsys, "verify", "--p", "3", "--m", "4",
                       "--d", "1")
    assert code == 2
    assert doc["all_passed"] is False


def test_audit_error_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise AuditError("forced audit failure")
    monkeypatch.setattr(cn, "verify_theorems", boom)
    code, doc, _ = run(capsys, "verify", "--p", "3", "--m", "4",
                       "--d", "1")
    assert code == 2
    assert doc == {"error": "forced audit failure"}


def test_validation_error_exit_code(capsys):
    code, doc, _ = run(capsys, "count-normal", "--p", "2", "--m", "6",
                       "--d", "2,3", "--a", "0,0")
    assert code == 1
    assert "coprime" in doc["error"]
    code, doc, _ = run(capsys, "order", "--element", "1")
    assert code == 1
    assert "--p" in doc["error"]


def test_constants(capsys):
    code, doc, _ = run(capsys, "constants", "--nu", "11", "--mode", "table")
    assert code == 0
    assert doc["value"] == "4.2445e14" and doc["provenance"] == "table"
    code, doc, _ = run(capsys, "constants", "--threshold", "4")
    assert code == 0
    assert doc == {"k": 4, "threshold": "1334", "nu": 11}
    code, doc, _ = run(capsys, "constants", "--threshold", "3")
    assert code == 0
    assert doc["threshold"] == "2.2684e24072855"
    code, doc, _ = run(capsys, "constants", "--threshold", "6")
    assert code == 1


def test_out_file(capsys, tmp_path):
    path = tmp_path / "result.json"
    _, _, text = run(capsys, "--out", str(path), "count-normal", "--p", "2",
                     "--m", "15", "--d", "3,5", "--a", "893,317")
    assert path.read_text() == text


def test_config_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p": 2, "m": 6}))
    code, doc, _ = run(capsys, "--config", str(cfg), "order",
                       "--element", "1")
    assert code == 0
    assert doc["additive_order"] == "x+1"
    # explicit flags beat config values
    code, doc, _ = run(capsys, "--config", str(cfg), "field-info",
                       "--p", "3", "--m", "4")
    assert doc["p"] == 3 and doc["m"] == 4


def test_byte_determinism(capsys):
    argv = ("census", "--p", "5", "--m", "6", "--d", "2,3")
    _, _, first = run(capsys, *argv)
    _, _, second = run(capsys, *argv)
    assert first == second
