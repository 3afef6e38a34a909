"""Independent brute-force checks the tests compare library results
against.  Everything here goes through plain field arithmetic only, no
linearized-polynomial or character machinery."""

from normtrace.field import FieldContext, FieldElement


def frobenius_orbit(ctx: FieldContext, a: FieldElement) -> list[FieldElement]:
    """a, a^q, ..., a^(q^(m-1)) via plain exponentiation."""
    out = [a]
    for _ in range(ctx.m - 1):
        out.append(ctx.pow(out[-1], ctx.q))
    return out


def trace_by_powers(ctx: FieldContext, a: FieldElement,
                    d: int) -> FieldElement:
    """Relative trace onto F_{q^d} summed conjugate by conjugate."""
    acc = ctx.zero
    cur = ctx.element(a)
    qd = ctx.q**d
    for _ in range(ctx.m // d):
        acc = ctx.add(acc, cur)
        cur = ctx.pow(cur, qd)
    return acc


def _poly_mod(ctx, f, g):
    # coefficient lists of FieldElements, constant first, g monic
    f = list(f)
    dg = len(g) - 1
    while len(f) - 1 >= dg:
        lead = f[-1]
        if ctx.is_zero(lead):
            f.pop()
            continue
        shift = len(f) - 1 - dg
        for i, c in enumerate(g):
            f[shift + i] = ctx.sub(f[shift + i], ctx.mul(lead, c))
        f.pop()
    while f and ctx.is_zero(f[-1]):
        f.pop()
    return f


def is_normal_by_gcd(ctx: FieldContext, a: FieldElement) -> bool:
    """Normality via gcd(x^m - 1, sum a^(q^i) x^(m-1-i)) = 1 computed in
    F_{q^m}[x]."""
    a = ctx.element(a)
    conj = frobenius_orbit(ctx, a)
    g_a = list(reversed(conj))
    one = ctx.element([1])
    xm1 = [ctx.sub(ctx.zero, one)] + [ctx.zero] * (ctx.m - 1) + [one]
    r0, r1 = xm1, [c for c in g_a]
    while r1 and any(not ctx.is_zero(c) for c in r1):
        lead = r1[-1]
        inv = ctx.inv(lead)
        r1m = [ctx.mul(inv, c) for c in r1]
        r0, r1 = r1m, _poly_mod(ctx, r0, r1m)
    return len(r0) == 1


def multiplicative_order_by_walk(ctx: FieldContext, a: FieldElement) -> int:
    a = ctx.element(a)
    if ctx.is_zero(a):
        raise ValueError("zero has no multiplicative order")
    cur = a
    k = 1
    while cur != ctx.one:
        cur = ctx.mul(cur, a)
        k += 1
    return k
