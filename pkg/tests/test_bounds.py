import math
from fractions import Fraction

import pytest

from normtrace import bounds as bd
from normtrace import polyq as pq
from normtrace.bounds import QValue
from normtrace.errors import BudgetError, ValidationError


def test_validate_tuple():
    assert bd.validate_tuple(30, [2, 3, 5]) == (2, 3, 5)
    with pytest.raises(ValidationError):
        bd.validate_tuple(6, [])
    with pytest.raises(ValidationError):
        bd.validate_tuple(6, [4])
    with pytest.raises(ValidationError):
        bd.validate_tuple(6, [3, 2])  # must arrive sorted
    with pytest.raises(ValidationError):
        bd.validate_tuple(12, [2, 6])
    with pytest.raises(ValidationError):
        bd.validate_tuple(6, [2, 6])  # redundant pair even with allow_full
    with pytest.raises(ValidationError):
        bd.validate_tuple(6, [6])
    assert bd.validate_tuple(6, [6], allow_full=True) == (6,)


def test_lcm_degree():
    assert bd.lcm_degree([3, 5]) == 7
    assert bd.lcm_degree([2, 3]) == 4
    assert bd.lcm_degree([2]) == 2
    assert bd.lcm_degree([4, 6]) == 8
    assert bd.lcm_degree([2, 3, 5]) == 8


def test_lcm_degree_matches_poly_lcm(f8, f81):
    # degree formula is field independent; spot check against poly lcm
    for ctx in (f8, f81):
        for ds in ([2, 3], [4, 6], [2, 3, 5], [6, 10, 15]):
            acc = pq.x_power_minus_one(ctx, ds[0])
            for d in ds[1:]:
                acc = pq.lcm(ctx, acc, pq.x_power_minus_one(ctx, d))
            assert acc.degree == bd.lcm_degree(ds)


def test_lcm_condition():
    assert bd.lcm_condition(12, [2, 3])
    assert not bd.lcm_condition(6, [2, 3])
    assert not bd.lcm_condition(15, [3, 5])


def test_w_int():
    assert bd.w_int(1) == 1
    assert bd.w_int(32767) == 8       # 7 * 31 * 151
    assert bd.w_int(2**60 - 1) == 2048
    assert bd.w_int(12) == 4


def test_omega_xm1_vs_factorization(f8, f64, f81, f2m15):
    for ctx in (f8, f64, f81, f2m15):
        distinct = len(pq.xm1_factorization(ctx).distinct())
        assert bd.omega_xm1(ctx.q, ctx.m) == distinct
    assert bd.w_xm1(2, 15) == 32
    assert bd.w_xm1(2, 6) == 4
    assert bd.w_xm1(3, 4) == 8


def test_w_poly_bound():
    b = bd.w_poly_bound(2, 15)
    assert b.to_dict() == {"exponent": "8", "tight": False,
                           "refinement": "45/4"}
    assert bd.w_xm1(2, 15) <= 2 ** 8
    b = bd.w_poly_bound(7, 3)  # 3 divides 7 - 1: the bound is attained
    assert b.tight and b.refinement is None
    assert bd.w_xm1(7, 3) == 2 ** 3
    with pytest.raises(ValidationError):
        bd.w_poly_bound(1, 3)


def test_w_loglog_bound():
    v = bd.w_loglog_bound("1e100")
    assert v.exp10 == 17
    assert str(v) == "4.4632e17"
    with pytest.raises(ValidationError):
        bd.w_loglog_bound(2)


def test_qvalue_parse_and_order():
    a = QValue.parse("2.2660e24072855")
    assert a.exp10 == 24072855
    assert QValue.parse(1334) > QValue.parse(1333)
    assert QValue.parse("1e10") < QValue.parse("2.5e10") < QValue.parse("1e11")
    assert QValue.parse(Fraction(25)) == QValue(1, Fraction(5, 2))
    assert QValue.parse(QValue.parse(7)) == QValue.parse(7)
    with pytest.raises(ValidationError):
        QValue.parse(0)
    with pytest.raises(ValidationError):
        QValue.parse("-3")
    with pytest.raises(ValidationError):
        QValue.parse("1e-5")


def test_qvalue_to_int():
    assert QValue.parse(12345).to_int() == 12345
    assert QValue.parse("1.25e2").to_int() == 125
    with pytest.raises(ValidationError):
        QValue.parse("1.5").to_int()
    with pytest.raises(BudgetError):
        QValue.parse("1e20000").to_int()


def test_qvalue_str():
    assert str(QValue.parse("2.2660e24072855")) == "2.2660e24072855"
    assert str(QValue.parse(1334)) == "1.3340e3"


def test_sieve_constant_computed_nu11():
    c = bd.sieve_constant(11)
    assert c.provenance == "computed"
    assert c.prime_limit == 2048
    assert c.prime_count == 309
    assert c.log10 == pytest.approx(14.627831168, abs=1e-6)
    assert c.log10_upper >= c.log10
    table = bd.sieve_constant(11, "table")
    assert str(table.value) == "4.2445e14"
    assert abs(c.log10 - table.log10) < math.log10(1.0001)


def test_sieve_constant_table_and_errors():
    c = bd.sieve_constant(31, "table")
    assert c.provenance == "table"
    assert str(c.value) == "2.4015e1553069"
    assert c.prime_count is None
    with pytest.raises(ValidationError):
        bd.sieve_constant(13, "table")
    with pytest.raises(ValidationError):
        bd.sieve_constant(11, "guess")
    with pytest.raises(BudgetError):
        bd.sieve_constant(32)


@pytest.mark.slow
def test_sieve_constant_worker_invariance():
    # nu = 25 spans two segments, so the pool path really runs
    serial = bd.sieve_constant(25, workers=1)
    parallel = bd.sieve_constant(25, workers=2)
    assert serial == parallel


def test_check_sufficiency_exact():
    r = bd.check_sufficiency(2, 60, (2, 3))
    assert r.verdict == "sufficient"
    assert r.criteria == ("exact-comparison",)
    assert r.rhs_terms == {"w_int": "2048", "w_poly": "32"}
    assert r.lhs_exponent == Fraction(21)
    r = bd.check_sufficiency(2, 30, (2, 3))
    assert r.verdict == "insufficient"
    assert r.rhs_terms == {"w_int": "64", "w_poly": "32"}
    assert r.notes


def test_check_sufficiency_exponent_sign():
    r = bd.check_sufficiency(2, 15, (3, 5))
    assert r.verdict == "impossible_for_all_q"
    assert r.criteria == ("exponent-nonpositive",)
    assert r.lhs_exponent == Fraction(-15, 2)


def test_check_sufficiency_bounded():
    r = bd.check_sufficiency(2, 60, (2, 3), mode="bounded")
    assert r.verdict == "insufficient"
    assert r.rhs_terms["w_int_bound_source"] == "loglog"
    r = bd.check_sufficiency("1e100", 60, (2, 3), mode="bounded")
    assert r.verdict == "sufficient"
    assert r.rhs_terms["w_int_bound_source"] == "sieve"
    assert r.rhs_terms["w_poly_bound_exponent"] == "63/2"


def test_check_sufficiency_log_space():
    r = bd.check_sufficiency("1e400", 60, (2, 3), mode="log_space")
    assert r.verdict == "sufficient"
    assert r.rhs_terms["w_int_bound_source"] == "loglog"
    # q too large to materialize: the polynomial bound falls back to 2^m
    r = bd.check_sufficiency("1e20000", 60, (2, 3), mode="log_space")
    assert r.verdict == "sufficient"
    assert r.rhs_terms["w_poly_bound_exponent"] == "60"
    with pytest.raises(BudgetError):
        bd.check_sufficiency("1e20000", 60, (2, 3), mode="bounded")
    with pytest.raises(ValidationError):
        bd.check_sufficiency(2, 60, (2, 3), mode="fast")


def test_report_to_dict_keys():
    r = bd.check_sufficiency(2, 60, (2, 3))
    assert set(r.to_dict()) == {
        "verdict", "mode", "q", "m", "divisors", "lambda", "divisor_sum",
        "lhs_exponent", "rhs_terms", "criteria", "notes"}
    assert r.to_dict()["lambda"] == 4
    assert r.to_dict()["divisor_sum"] == 5


def test_dispatch_lcm_short_circuit():
    r = bd.dispatch_coprime(2, 12, (2, 3))
    assert r.verdict == "sufficient"
    assert r.criteria == ("lcm-below-degree",)


def test_dispatch_rebase_hint():
    r = bd.dispatch_coprime(101, 12, (4, 6))
    assert r.verdict == "outside_scope"
    assert r.criteria == ("pairwise-coprime-required",)
    assert "q^2" in r.notes[0] and "2 and 3" in r.notes[0]


def test_dispatch_exponent_impossible():
    for m, ds in [(30, (2, 3, 5)), (42, (2, 3, 7)), (56, (7, 8)),
                  (42, (6, 7)), (66, (6, 11))]:
        r = bd.dispatch_coprime(997, m, ds)
        assert r.verdict == "impossible_for_all_q", (m, ds)
        assert r.criteria[-1] == "exponent-nonpositive"


def test_dispatch_k4_k5_thresholds():
    hi = bd.dispatch_coprime(1334, 210, (2, 3, 5, 7))
    assert hi.verdict == "sufficient"
    assert hi.criteria == ("k=4", "threshold-table")
    assert hi.rhs_terms["threshold"] == "1334"
    assert abs(int(hi.rhs_terms["recomputed_threshold"]) - 1334) <= 1
    assert bd.dispatch_coprime(1333, 210, (2, 3, 5, 7)).verdict == \
        "insufficient"
    assert bd.dispatch_coprime(9, 2310, (2, 3, 5, 7, 11)).verdict == \
        "sufficient"
    assert bd.dispatch_coprime(8, 2310, (2, 3, 5, 7, 11)).verdict == \
        "insufficient"


def test_dispatch_k3():
    lo = bd.dispatch_coprime(7, 60, (3, 4, 5))
    assert lo.verdict == "insufficient"
    assert lo.criteria == ("k=3", "threshold-table")
    assert lo.rhs_terms["threshold"] == "2.2660e24072855"
    hi = bd.dispatch_coprime("3e24072855", 60, (3, 4, 5))
    assert hi.verdict == "sufficient"


def test_dispatch_k2_unquantified():
    r = bd.dispatch_coprime(2, 95, (5, 19))
    assert r.verdict == "sufficient_for_large_q_unquantified"
    assert r.criteria == ("k=2 d1=5",)
    assert len(r.notes) == 2  # the table disagrees here; both notes present
    r = bd.dispatch_coprime(2, 72, (8, 9))
    assert r.verdict == "sufficient_for_large_q_unquantified"
    assert r.criteria == ("k=2 d1=8",)
    assert len(r.notes) == 1


def test_dispatch_k8_outside():
    ds = [2, 3, 5, 7, 11, 13, 17, 19]
    r = bd.dispatch_coprime(2, math.prod(ds), ds)
    assert r.verdict == "outside_scope"
    assert r.criteria == ("k=8",)


def test_recomputed_thresholds_match_table():
    assert abs(bd.recompute_threshold(4) - 1334) <= 1
    assert abs(bd.recompute_threshold(5) - 9) <= 1
    with pytest.raises(ValidationError):
        bd.recompute_threshold(6)


def test_k3_threshold_rederivation():
    v = bd.k3_threshold()
    assert v.exp10 == bd.K3_THRESHOLD.exp10 == 24072855
    assert Fraction(2) <= v.mantissa <= Fraction(5, 2)
    assert str(v) == "2.2684e24072855"


def test_coprime_envelope_check():
    assert bd.coprime_envelope_check([2, 3, 5])
    assert bd.coprime_envelope_check([3, 4, 5])
    assert bd.coprime_envelope_check([5, 7])
    # entry below the matching prime minimum
    assert not bd.coprime_envelope_check([1, 3])
    assert not bd.coprime_envelope_check([2, 2])
