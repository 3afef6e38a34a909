"""Polynomials over the base field F_q of a field context.

A PolyQ holds base-field coefficients as their integer encodings in the
ambient field, constant term first, with no trailing zeros; the zero
polynomial is the empty tuple.  All arithmetic goes through a small
base-field adapter: for prime base fields (e = 1) encodings coincide
with residues mod p, otherwise cached multiplication tables over the
embedded subfield are used.

Factorization is squarefree decomposition, then distinct-degree
splitting, then randomized equal-degree splitting.  The RNG is seeded
from the field and the input polynomial, so factoring the same
polynomial in the same field always walks the same path.  Factors are
returned sorted by degree, then by coefficient vector, and each factor
is re-verified irreducible before the result is returned.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetError, ConsistencyError, ValidationError
from .field import FieldContext

DIVISOR_CAP = 1 << 20
_BASE_TABLE_CAP = 1 << 12


class PolyQ:
    """Polynomial over F_q: tuple of coefficient encodings, constant first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyQ({list(self.coeffs)})"


@dataclass(frozen=True)
class Factorization:
    """unit * product of factor^multiplicity, factors monic irreducible."""
    unit: int
    factors: tuple[tuple[PolyQ, int], ...]

    def expand(self, ctx: FieldContext) -> PolyQ:
        out = PolyQ([self.unit])
        for f, k in self.factors:
            for _ in range(k):
                out = mul(ctx, out, f)
        return out

    def distinct(self) -> tuple[PolyQ, ...]:
        return tuple(f for f, _ in self.factors)


class _BaseOps:
    """Arithmetic on base-field coefficient encodings."""

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.q = ctx.q
        self.prime = ctx.e == 1
        if self.prime:
            self.p = ctx.p
            self.elements = list(range(ctx.q))
        else:
            if ctx.q > _BASE_TABLE_CAP:
                raise BudgetError(
                    f"base field of size {ctx.q} too large for tables")
            encs = [int(v) for v in ctx.subfield_encodings(1)]
            self.elements = encs
            dec = {k: ctx.decode(k) for k in encs}
            self._add = {}
            self._mul = {}
            self._inv = {}
            for a in encs:
                for b in encs:
                    self._add[a, b] = ctx.encode(ctx.add(dec[a], dec[b]))
                    self._mul[a, b] = ctx.encode(ctx.mul(dec[a], dec[b]))
                if a:
                    self._inv[a] = ctx.encode(ctx.inv(dec[a]))
            self._neg = {a: ctx.encode(ctx.neg(dec[a])) for a in encs}

    def check(self, c: int) -> int:
        """Validate that encoding c denotes a base-field element."""
        if self.prime:
            if not (0 <= c < self.q):
                raise ValidationError(f"coefficient {c} not in base field")
            return c
        if c not in self._neg:
            raise ValidationError(f"coefficient {c} not in base field")
        return c

    def add(self, a, b):
        return (a + b) % self.p if self.prime else self._add[a, b]

    def sub(self, a, b):
        return (a - b) % self.p if self.prime else self._add[a, self._neg[b]]

    def neg(self, a):
        return (-a) % self.p if self.prime else self._neg[a]

    def mul(self, a, b):
        return a * b % self.p if self.prime else self._mul[a, b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("base field inverse of zero")
        return pow(a, self.p - 2, self.p) if self.prime else self._inv[a]

    def pow(self, a, k):
        out = self.one
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    @property
    def one(self):
        return 1

    @property
    def minus_one(self):
        return self.neg(1)


def base_ops(ctx: FieldContext) -> _BaseOps:
    if "base_ops" not in ctx._cache:
        ctx._cache["base_ops"] = _BaseOps(ctx)
    return ctx._cache["base_ops"]


# ---------------------------------------------------------------------------
# construction and arithmetic

def poly(ctx: FieldContext, coeffs: Iterable[int]) -> PolyQ:
    """Build a polynomial, validating every coefficient lies in F_q."""
    B = base_ops(ctx)
    return PolyQ([B.check(int(c)) for c in coeffs])


def x_power_minus_one(ctx: FieldContext, d: int) -> PolyQ:
    B = base_ops(ctx)
    cs = [0] * (d + 1)
    cs[0] = B.minus_one
    cs[d] = 1
    return PolyQ(cs)


def add(ctx, f: PolyQ, g: PolyQ) -> PolyQ:
    B = base_ops(ctx)
    n = max(len(f.coeffs), len(g.coeffs))
    out = [0] * n
    for i, c in enumerate(f.coeffs):
        out[i] = c
    for i, c in enumerate(g.coeffs):
        out[i] = B.add(out[i], c)
    return PolyQ(out)


def sub(ctx, f: PolyQ, g: PolyQ) -> PolyQ:
    B = base_ops(ctx)
    n = max(len(f.coeffs), len(g.coeffs))
    out = [0] * n
    for i, c in enumerate(f.coeffs):
        out[i] = c
    for i, c in enumerate(g.coeffs):
        out[i] = B.sub(out[i], c)
    return PolyQ(out)


def mul(ctx, f: PolyQ, g: PolyQ) -> PolyQ:
    B = base_ops(ctx)
    if f.is_zero() or g.is_zero():
        return PolyQ([])
    out = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if a:
            for j, b in enumerate(g.coeffs):
                if b:
                    out[i + j] = B.add(out[i + j], B.mul(a, b))
    return PolyQ(out)


def scale(ctx, c: int, f: PolyQ) -> PolyQ:
    B = base_ops(ctx)
    return PolyQ([B.mul(c, a) for a in f.coeffs])


def divmod_(ctx, f: PolyQ, g: PolyQ) -> tuple[PolyQ, PolyQ]:
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    B = base_ops(ctx)
    rem = list(f.coeffs)
    dg = g.degree
    if f.degree < dg:
        return PolyQ([]), f
    inv_lead = B.inv(g.coeffs[-1])
    quot = [0] * (f.degree - dg + 1)
    for shift in range(f.degree - dg, -1, -1):
        c = rem[shift + dg]
        if c:
            c = B.mul(c, inv_lead)
            quot[shift] = c
            for i, b in enumerate(g.coeffs):
                rem[shift + i] = B.sub(rem[shift + i], B.mul(c, b))
    return PolyQ(quot), PolyQ(rem)


def mod(ctx, f: PolyQ, g: PolyQ) -> PolyQ:
    return divmod_(ctx, f, g)[1]


def monic(ctx, f: PolyQ) -> PolyQ:
    if f.is_zero():
        return f
    B = base_ops(ctx)
    if f.coeffs[-1] == B.one:
        return f
    return scale(ctx, B.inv(f.coeffs[-1]), f)


def gcd(ctx, f: PolyQ, g: PolyQ) -> PolyQ:
    while not g.is_zero():
        f, g = g, mod(ctx, f, g)
    return monic(ctx, f)


def lcm(ctx, f: PolyQ, g: PolyQ) -> PolyQ:
    if f.is_zero() or g.is_zero():
        return PolyQ([])
    d = gcd(ctx, f, g)
    return monic(ctx, divmod_(ctx, mul(ctx, f, g), d)[0])


def pow_mod(ctx, f: PolyQ, k: int, m: PolyQ) -> PolyQ:
    out = PolyQ([1])
    f = mod(ctx, f, m)
    while k:
        if k & 1:
            out = mod(ctx, mul(ctx, out, f), m)
        f = mod(ctx, mul(ctx, f, f), m)
        k >>= 1
    return out


def derivative(ctx, f: PolyQ) -> PolyQ:
    B = base_ops(ctx)
    out = []
    for i in range(1, len(f.coeffs)):
        c = f.coeffs[i]
        k = i % ctx.p
        acc = 0
        if k and c:
            acc = c
            for _ in range(k - 1):
                acc = B.add(acc, c)
        out.append(acc)
    return PolyQ(out)


def poly_ops(ctx, op: str, f: PolyQ, g: PolyQ):
    """Dispatch add, sub, mul, divmod, mod, gcd, lcm by name."""
    table = {"add": add, "sub": sub, "mul": mul, "divmod": divmod_,
             "mod": mod, "gcd": gcd, "lcm": lcm}
    if op not in table:
        raise ValidationError(f"unknown polynomial operation {op!r}")
    return table[op](ctx, f, g)


# ---------------------------------------------------------------------------
# factorization

def _coeff_root(ctx, B: _BaseOps, c: int) -> int:
    # p-th root in F_q: c -> c^(q/p)
    return B.pow(c, ctx.q // ctx.p)


def _pth_root_poly(ctx, f: PolyQ) -> PolyQ:
    B = base_ops(ctx)
    p = ctx.p
    return PolyQ([_coeff_root(ctx, B, f.coeffs[i])
                  for i in range(0, len(f.coeffs), p)])


def _sqf_list(ctx, f: PolyQ) -> list[tuple[PolyQ, int]]:
    """Squarefree decomposition of monic f: [(g_i, mult_i)], g_i monic
    squarefree and pairwise coprime."""
    p = ctx.p
    one = PolyQ([1])
    n_mult = 1
    out: list[tuple[PolyQ, int]] = []
    while f.degree > 0:
        F = derivative(ctx, f)
        if not F.is_zero():
            g = gcd(ctx, f, F)
            h = divmod_(ctx, f, g)[0]
            i = 1
            while h != one:
                G = gcd(ctx, g, h)
                H = divmod_(ctx, h, G)[0]
                if H.degree > 0:
                    out.append((H, i * n_mult))
                g = divmod_(ctx, g, G)[0]
                h = G
                i += 1
            if g == one:
                return out
            f = g
        # f is now a p-th power
        f = _pth_root_poly(ctx, f)
        n_mult *= p


def _pow_q_mod(ctx, f: PolyQ, m: PolyQ) -> PolyQ:
    return pow_mod(ctx, f, ctx.q, m)


def _ddf(ctx, f: PolyQ) -> list[tuple[PolyQ, int]]:
    """Distinct-degree splitting of monic squarefree f: [(product, d)]."""
    out = []
    g = f
    b = mod(ctx, PolyQ([0, 1]), g)
    d = 0
    x = PolyQ([0, 1])
    while g.degree > 2 * d + 1:
        d += 1
        b = _pow_q_mod(ctx, b, g)
        part = gcd(ctx, sub(ctx, b, x), g)
        if part.degree > 0:
            out.append((part, d))
            g = divmod_(ctx, g, part)[0]
            b = mod(ctx, b, g)
    if g.degree > 0:
        out.append((g, g.degree))
    return out


def _random_poly(ctx, rng, deg: int) -> PolyQ:
    B = base_ops(ctx)
    cs = [B.elements[rng.randrange(ctx.q)] for _ in range(deg)]
    cs.append(B.elements[rng.randrange(1, ctx.q)])
    return PolyQ(cs)


def _edf(ctx, f: PolyQ, d: int, rng) -> list[PolyQ]:
    """Equal-degree splitting: f monic squarefree, all factors of degree d."""
    if f.degree == d:
        return [f]
    one = PolyQ([1])
    while True:
        h = _random_poly(ctx, rng, rng.randrange(1, f.degree))
        if ctx.p == 2:
            # sum of 2-power Frobenius images: trace onto F_2
            t = mod(ctx, h, f)
            acc = t
            for _ in range(ctx.e * d - 1):
                t = mod(ctx, mul(ctx, t, t), f)
                acc = add(ctx, acc, t)
            cand = gcd(ctx, acc, f)
        else:
            t = pow_mod(ctx, h, (ctx.q**d - 1) // 2, f)
            cand = gcd(ctx, sub(ctx, t, one), f)
        if 0 < cand.degree < f.degree:
            rest = divmod_(ctx, f, cand)[0]
            return _edf(ctx, cand, d, rng) + _edf(ctx, rest, d, rng)


def is_irreducible(ctx, f: PolyQ) -> bool:
    """Rabin's criterion over F_q."""
    from .intfactor import factorize as _if
    n = f.degree
    if n < 1:
        return False
    f = monic(ctx, f)
    x = mod(ctx, PolyQ([0, 1]), f)
    r = x
    for _ in range(n):
        r = _pow_q_mod(ctx, r, f)
    if not sub(ctx, r, x).is_zero():
        return False
    for ell in {a for a, _ in _if(n)}:
        r = x
        for _ in range(n // ell):
            r = _pow_q_mod(ctx, r, f)
        if gcd(ctx, sub(ctx, r, x), f).degree != 0:
            return False
    return True


def _factor_seed(ctx, f: PolyQ) -> int:
    blob = repr((ctx.p, ctx.e, ctx.m, ctx.modulus, f.coeffs)).encode()
    return zlib.crc32(blob)


def factor(ctx: FieldContext, f: PolyQ) -> Factorization:
    """Factor f over F_q into monic irreducibles.

    Deterministic: the equal-degree stage uses an RNG seeded from the
    field and the polynomial.  The returned factors are sorted by degree
    and then by coefficient vector, verified irreducible, and their
    product is checked against the input.
    """
    if f.is_zero():
        raise ValidationError("cannot factor the zero polynomial")
    unit = f.coeffs[-1]
    fm = monic(ctx, f)
    rng = random.Random(_factor_seed(ctx, f))
    found: dict[tuple[int, ...], int] = {}
    if fm.degree > 0:
        for sq_part, mult in _sqf_list(ctx, fm):
            for prod, d in _ddf(ctx, sq_part):
                for irr in _edf(ctx, prod, d, rng):
                    key = irr.coeffs
                    found[key] = found.get(key, 0) + mult
    factors = sorted(
        ((PolyQ(k), v) for k, v in found.items()),
        key=lambda kv: (kv[0].degree, tuple(reversed(kv[0].coeffs))))
    result = Factorization(unit=unit, factors=tuple(factors))
    for irr, _ in result.factors:
        if not is_irreducible(ctx, irr):
            raise ConsistencyError(f"factor {irr!r} is not irreducible")
    if result.expand(ctx) != f:
        raise ConsistencyError("factorization does not multiply back")
    return result


def xm1_factorization(ctx: FieldContext, d: int | None = None) -> Factorization:
    """Cached factorization of x^d - 1 over F_q (default d = m)."""
    d = ctx.m if d is None else d
    key = ("xm1fact", d)
    if key not in ctx._cache:
        ctx._cache[key] = factor(ctx, x_power_minus_one(ctx, d))
    return ctx._cache[key]


# ---------------------------------------------------------------------------
# multiplicative functions on the divisor lattice

def _as_factorization(ctx, f) -> Factorization:
    if isinstance(f, Factorization):
        return f
    if f.is_zero():
        raise ValidationError("zero polynomial has no factorization")
    return factor(ctx, f)


def phi(ctx, f) -> int:
    """Unit count of F_q[x]/(f): product over irreducible power parts of
    (q^deg - 1) * q^(deg*(mult-1))."""
    fac = _as_factorization(ctx, f)
    out = 1
    for irr, mult in fac.factors:
        dq = ctx.q**irr.degree
        out *= (dq - 1) * dq ** (mult - 1)
    return out


def mobius(ctx, f) -> int:
    """(-1)^(number of irreducibles) on squarefree monic f, else 0."""
    fac = _as_factorization(ctx, f)
    for _, mult in fac.factors:
        if mult > 1:
            return 0
    return -1 if len(fac.factors) % 2 else 1


def squarefree_divisor_count(ctx, f) -> int:
    """2^(number of distinct monic irreducible divisors)."""
    fac = _as_factorization(ctx, f)
    return 2 ** len(fac.factors)


def phi_mobius_w(ctx, f) -> tuple[int, int, int]:
    """All three multiplicative invariants of a nonzero monic f at once."""
    if not isinstance(f, Factorization):
        if f.is_zero():
            raise ValidationError("zero polynomial")
        if f.coeffs[-1] != base_ops(ctx).one:
            raise ValidationError("polynomial must be monic")
    fac = _as_factorization(ctx, f)
    return phi(ctx, fac), mobius(ctx, fac), squarefree_divisor_count(ctx, fac)


def divisors(ctx, f, *, squarefree_only: bool = False,
             cap: int = DIVISOR_CAP) -> list[PolyQ]:
    """All monic divisors of f in deterministic order: exponent vectors
    over the sorted factor list, first factor slowest."""
    fac = _as_factorization(ctx, f)
    ranges = []
    for irr, mult in fac.factors:
        ranges.append((irr, 1 if squarefree_only else mult))
    count = 1
    for _, mx in ranges:
        count *= mx + 1
    if count > cap:
        raise BudgetError(f"divisor count {count} exceeds cap {cap}")
    out = [PolyQ([1])]
    for irr, mx in ranges:
        cur = []
        for base in out:
            t = base
            cur.append(t)
            for _ in range(mx):
                t = mul(ctx, t, irr)
                cur.append(t)
        out = cur
    return out


# ---------------------------------------------------------------------------
# parsing and formatting

def format_poly(f: PolyQ) -> str:
    if f.is_zero():
        return "0"
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("x" if c == 1 else f"{c}x")
        else:
            terms.append(f"x^{i}" if c == 1 else f"{c}x^{i}")
    return "+".join(terms)


def parse_poly(ctx: FieldContext, text: str) -> PolyQ:
    """Accept either a coefficient list "1,0,0,1,1" (constant first,
    optionally in brackets) or a sparse string like "x^4+x^3+1" with
    optional coefficient encodings such as "2x^3+4"."""
    import re
    s = text.strip().replace(" ", "")
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    if re.fullmatch(r"-?\d+(,-?\d+)*", s):
        return poly(ctx, [int(t) for t in s.split(",")])
    B = base_ops(ctx)
    coeffs: dict[int, int] = {}
    if s.startswith("-"):
        raise ValidationError("negative terms are not supported; "
                              "use coefficient encodings")
    for term in s.split("+"):
        mt = re.fullmatch(r"(?:(\d+)\*?)?x(?:\^(\d+))?", term)
        if mt:
            c = int(mt.group(1)) if mt.group(1) else 1
            k = int(mt.group(2)) if mt.group(2) else 1
        elif re.fullmatch(r"\d+", term):
            c, k = int(term), 0
        else:
            raise ValidationError(f"cannot parse polynomial term {term!r}")
        if k in coeffs:
            coeffs[k] = B.add(coeffs[k], B.check(c))
        else:
            coeffs[k] = B.check(c)
    if not coeffs:
        return PolyQ([])
    out = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return PolyQ(out)
