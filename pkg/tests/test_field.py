import numpy as np
import pytest

from normtrace.errors import BudgetError, ValidationError
from normtrace.field import FieldElement, FieldSpec, build_context

from oracles import multiplicative_order_by_walk, trace_by_powers


def test_spec_validation():
    with pytest.raises(ValidationError):
        build_context((4, 1, 3))  # characteristic must be prime
    with pytest.raises(ValidationError):
        build_context((2, 0, 3))
    with pytest.raises(ValidationError):
        build_context((2, 1, 0))


def test_determinism():
    a = build_context((2, 1, 6))
    b = build_context((2, 1, 6))
    assert a.modulus == b.modulus
    assert a.generator == b.generator


def test_encode_decode_roundtrip(f64):
    for k in range(64):
        assert f64.encode(f64.decode(k)) == k
    with pytest.raises(ValidationError):
        f64.decode(64)
    with pytest.raises(ValidationError):
        f64.decode(-1)


def test_element_coercion(f64):
    assert f64.element(3) == f64.element([1, 1])
    assert f64.element([1, 1, 0, 0, 0, 0]) == f64.element(3)
    with pytest.raises(ValidationError):
        f64.element([2, 0])  # coefficient out of range for p=2
    with pytest.raises(ValidationError):
        f64.element([0] * 7)


def test_field_axioms_sampled(f81):
    import random
    rng = random.Random(81)
    for _ in range(200):
        a = f81.element(rng.randrange(81))
        b = f81.element(rng.randrange(81))
        c = f81.element(rng.randrange(81))
        assert f81.add(a, b) == f81.add(b, a)
        assert f81.mul(a, b) == f81.mul(b, a)
        assert f81.mul(a, f81.add(b, c)) == \
            f81.add(f81.mul(a, b), f81.mul(a, c))
        assert f81.add(a, f81.neg(a)) == f81.zero
        if not f81.is_zero(a):
            assert f81.mul(a, f81.inv(a)) == f81.one


def test_inverse_of_zero(f64):
    with pytest.raises(ZeroDivisionError):
        f64.inv(f64.zero)


def test_pow_matches_repeated_mul(f81):
    a = f81.element(7)
    acc = f81.one
    for k in range(30):
        assert f81.pow(a, k) == acc
        acc = f81.mul(acc, a)
    assert f81.pow(a, 80) == f81.one  # group order


def test_frobenius_is_pth_power(f64):
    for k in range(64):
        a = f64.element(k)
        assert f64.frobenius(a) == f64.pow(a, 2**f64.e)
    # tower: q-Frobenius is the p^e power
    t = build_context((2, 2, 3))
    for k in range(64):
        a = t.element(k)
        assert t.frobenius(a) == t.pow(a, 4)


def test_frob_matrix_agrees(f81):
    M = f81.frob_p_matrix()
    for k in range(81):
        a = f81.element(k)
        assert f81.apply_matrix(M, a) == f81.pow(a, 3)


def test_subfield_sizes(f64, f64_tower):
    assert len(f64.subfield_encodings(1)) == 2
    assert len(f64.subfield_encodings(2)) == 4
    assert len(f64.subfield_encodings(3)) == 8
    assert len(f64.subfield_encodings(6)) == 64
    # over F_4 the degree-1 subfield already has 4 elements
    assert len(f64_tower.subfield_encodings(1)) == 4
    assert len(f64_tower.subfield_encodings(3)) == 64
    with pytest.raises(ValidationError):
        f64.subfield_encodings(4)


def test_subfield_closure(f64):
    subs = [f64.element(int(v)) for v in f64.subfield_encodings(2)]
    encs = {f64.encode(s) for s in subs}
    for a in subs:
        for b in subs:
            assert f64.encode(f64.add(a, b)) in encs
            assert f64.encode(f64.mul(a, b)) in encs
        assert f64.in_subfield(a, 2)


def test_trace_matrix_vs_powers(f64, f81, f64_tower):
    for ctx, ds in ((f64, (1, 2, 3)), (f81, (1, 2)), (f64_tower, (1, 3))):
        for d in ds:
            T = ctx.trace_matrix(d)
            for k in range(ctx.order):
                a = ctx.element(k)
                want = trace_by_powers(ctx, a, d)
                assert ctx.apply_matrix(T, a) == want


def test_trace_lands_in_subfield(f2m15):
    import random
    rng = random.Random(15)
    for d in (3, 5):
        for _ in range(50):
            a = f2m15.element(rng.randrange(f2m15.order))
            tr = trace_by_powers(f2m15, a, d)
            assert f2m15.in_subfield(tr, d)


def test_generator_is_primitive(f64, f81):
    for ctx in (f64, f81):
        assert multiplicative_order_by_walk(ctx, ctx.generator) == \
            ctx.group_order
        assert ctx.is_primitive(ctx.generator)


def test_multiplicative_order(f81):
    for k in range(1, 81):
        a = f81.element(k)
        assert ctx_order(f81, a) == multiplicative_order_by_walk(f81, a)


def ctx_order(ctx, a):
    return ctx.multiplicative_order(a)


def test_orbit_and_dlog(f64):
    orbit = f64.orbit_encodings()
    assert len(orbit) == 63
    assert len(set(int(v) for v in orbit)) == 63
    assert orbit[0] == f64.encode(f64.one)
    for t in (0, 1, 5, 62):
        el = f64.pow(f64.generator, t)
        assert f64.discrete_log(el) == t
    with pytest.raises(ValidationError):
        f64.discrete_log(f64.zero)


def test_dlog_cap():
    small_cap = build_context((2, 1, 6), dlog_cap=32)
    with pytest.raises(BudgetError):
        small_cap.orbit_encodings()


def test_mul_matrix(f81):
    a = f81.element(13)
    M = f81.mul_matrix(a)
    for k in (0, 1, 7, 80):
        b = f81.element(k)
        assert f81.apply_matrix(M, b) == f81.mul(a, b)


def test_explicit_modulus_roundtrip():
    base = build_context((2, 1, 4))
    again = build_context(FieldSpec(2, 1, 4, base.modulus))
    assert again.modulus == base.modulus
    assert again.generator == base.generator


def test_element_repr_and_hash(f64):
    a = f64.element(3)
    assert a == FieldElement((1, 1, 0, 0, 0, 0))
    assert hash(a) == hash(f64.element(3))
    assert "FieldElement" in repr(a)
