import json

import pytest

from normtrace import census as cn
from normtrace import linearized as lin
from normtrace.errors import BudgetError, ValidationError
from normtrace.field import build_context


def test_f2m15_totals_and_profiles(f2m15):
    report = cn.run_census(f2m15, (3, 5))
    assert report.totals == {"elements": 32768, "primitive": 27000,
                             "normal": 10125, "primitive_normal": 8430}
    assert len(report.profiles) == 256
    normal_counts = sorted({pr.normal for pr in report.profiles})
    assert normal_counts == [0, 225]
    assert sum(pr.normal == 225 for pr in report.profiles) == 45
    any_counts = {pr.any for pr in report.profiles}
    assert any_counts == {0, 256}
    assert sum(pr.any == 256 for pr in report.profiles) == 128
    # normal-bearing profiles are exactly the enumerated admissible ones
    admissible = {p.targets for p in
                  lin.enumerate_normal_admissible(f2m15, (3, 5))}
    assert {pr.targets for pr in report.profiles
            if pr.normal} == admissible


def test_f5m6_profiles(f5m6):
    report = cn.run_census(f5m6, (2, 3))
    assert report.totals["primitive_normal"] == 2568
    assert report.totals["normal"] == 9216
    bearing = [pr for pr in report.profiles if pr.normal]
    assert len(bearing) == 384
    assert all(pr.normal == 24 for pr in bearing)


def test_f81_single_divisor(f81):
    report = cn.run_census(f81, (1,))
    by_target = {pr.targets[0]: pr for pr in report.profiles}
    assert set(by_target) == {0, 1, 2}
    assert by_target[0].normal == 0
    assert by_target[1].normal == 16
    assert by_target[2].normal == 16


def test_worker_invariance(f5m6):
    serial = cn.run_census(f5m6, (2, 3), workers=1)
    parallel = cn.run_census(f5m6, (2, 3), workers=2)
    assert serial.to_dict() == parallel.to_dict()


def test_report_to_dict(f81):
    report = cn.run_census(f81, (2,))
    d = report.to_dict()
    assert set(d) == {"p", "e", "m", "q", "divisors", "totals", "profiles"}
    assert d["totals"]["elements"] == "81"
    assert all(isinstance(v, str) for v in d["totals"].values())
    json.dumps(d)  # shape must be serializable as-is
    timed = report.to_dict(include_timing=True)
    assert "elapsed_seconds" in timed and timed["workers"] == 1


def test_cap_budget(f2m15):
    with pytest.raises(BudgetError):
        cn.run_census(f2m15, (3, 5), cap=1024)


def test_cap_env_override(f81, monkeypatch):
    monkeypatch.setenv(cn.CENSUS_CAP_ENV, "80")
    with pytest.raises(BudgetError):
        cn.run_census(f81, (1,))
    monkeypatch.setenv(cn.CENSUS_CAP_ENV, "81")
    assert cn.run_census(f81, (1,)).totals["elements"] == 81
    monkeypatch.setenv(cn.CENSUS_CAP_ENV, str(1 << 40))
    assert cn.census_cap() == cn.CENSUS_CAP_EXTENDED
    monkeypatch.setenv(cn.CENSUS_CAP_ENV, "many")
    with pytest.raises(ValidationError):
        cn.census_cap()


def test_divisor_validation(f5m6):
    with pytest.raises(ValidationError):
        cn.run_census(f5m6, (4,))
    # unsorted input is accepted and canonicalized
    assert cn.run_census(f5m6, (3, 2)).divisors == (2, 3)


def test_verify_theorems_coprime(f5m6):
    results = cn.verify_theorems(f5m6, (2, 3))
    by_id = {r["theorem_id"]: r for r in results}
    assert all(r["passed"] for r in results), [
        r["theorem_id"] for r in results if not r["passed"]]
    assert set(by_id) == {
        "primitive-count", "normal-count", "trace-solution-count",
        "prescribed-trace-normal-count", "normal-fiber-size-d2",
        "normal-fiber-size-d3", "zero-sum-count"}
    assert by_id["normal-count"]["expected"] == "9216"
    assert by_id["zero-sum-count"]["expected"] == "5"


def test_verify_theorems_below_lcm(f81, f2m15):
    results = cn.verify_theorems(f81, (2,))
    by_id = {r["theorem_id"]: r for r in results}
    assert "existence-below-lcm-degree" in by_id  # lcm 2 < m = 4
    assert by_id["existence-below-lcm-degree"]["observed"] == []
    assert all(r["passed"] for r in results)

    results = cn.verify_theorems(f2m15, (5,))
    by_id = {r["theorem_id"]: r for r in results}
    assert by_id["existence-below-lcm-degree"]["observed"] == []
    assert by_id["normal-fiber-size-d5"]["passed"]
    assert all(r["passed"] for r in results)


def test_verify_theorems_wild(f64):
    # m = 6 shares the factor 2 with p: only the unconditional checks run
    results = cn.verify_theorems(f64, (2, 3))
    by_id = {r["theorem_id"]: r for r in results}
    assert set(by_id) == {"primitive-count", "normal-count",
                          "trace-solution-count", "zero-sum-count"}
    assert by_id["normal-count"]["expected"] == "24"
    assert all(r["passed"] for r in results)


def test_wild_census_degenerate_buckets():
    # over F_9 with m = 6 the same machinery runs in the wild case
    ctx = build_context((3, 2, 6))
    report = cn.run_census(ctx, (2, 3))
    assert report.totals["normal"] == 419904  # Phi(x^6 - 1) over F_9
    assert report.totals["elements"] == 531441


def test_prime_powers_upto():
    assert cn.prime_powers_upto(9) == [
        (2, 2, 1), (3, 3, 1), (4, 2, 2), (5, 5, 1), (7, 7, 1), (8, 2, 3),
        (9, 3, 2)]


def test_pmtrace_exceptions_small():
    assert cn.verify_pmtrace_exceptions(4, 3) == [
        (2, 2, 0), (3, 2, 0), (4, 2, 0), (4, 3, 0)]
