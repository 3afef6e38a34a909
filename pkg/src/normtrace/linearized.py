"""Linearized polynomial actions, additive orders, and trace systems.

A polynomial f over F_q acts on the extension field by
L_f(a) = sum_i f_i * a^(q^i).  Composing actions multiplies the
polynomials, so the annihilators of an element form an ideal in F_q[x];
the additive order of a is the monic generator, always a divisor of
x^m - 1.  Elements of full order x^m - 1 are the normal ones: their
Frobenius orbit spans the extension over F_q.

A trace profile prescribes, for a set of intermediate fields F_{q^d}
with d | m, the value of the relative trace from F_{q^m}.  The solver
treats the constraints as one F_p-linear system; counting functions
give the number of solutions and the number of normal solutions in
closed form, cross-checked against the linear algebra.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import polyq as pq
from .errors import BudgetError, ConsistencyError, ValidationError
from .field import FieldContext, FieldElement, _nullspace_basis
from .polyq import PolyQ

ENUMERATION_CAP = 1 << 20


# ---------------------------------------------------------------------------
# linearized action

def linearized_eval(ctx: FieldContext, f: PolyQ, a) -> FieldElement:
    """Apply L_f to a: sum of f_i * a^(q^i)."""
    a = ctx.element(a)
    acc = ctx.zero
    b = a
    for i, c in enumerate(f.coeffs):
        if i:
            b = ctx.frobenius(b, 1)
        if c:
            acc = ctx.add(acc, ctx.mul(ctx.decode(c), b))
    return acc


def linearized_matrix(ctx: FieldContext, f: PolyQ) -> np.ndarray:
    """Matrix of L_f on the F_p coefficient space, cached per context."""
    key = ("linmat", f.coeffs)
    if key not in ctx._cache:
        n = ctx.n
        M = np.zeros((n, n), dtype=np.int64)
        for i, c in enumerate(f.coeffs):
            if c:
                term = ctx.mul_matrix(ctx.decode(c)) @ ctx.frob_q_power_matrix(i)
                M = (M + term) % ctx.p
        ctx._cache[key] = M
    return ctx._cache[key]


def additive_order(ctx: FieldContext, a, d: int | None = None) -> PolyQ:
    """Monic generator of the annihilator ideal of a, dividing x^d - 1.

    With d = m (the default) this is the additive order in the full
    extension.  A proper divisor d of m restricts to the subfield
    F_{q^d}, so a must lie in it.
    """
    d = ctx.m if d is None else d
    if d < 1 or ctx.m % d:
        raise ValidationError(f"d={d} does not divide m={ctx.m}")
    a = ctx.element(a)
    if d != ctx.m and not ctx.in_subfield(a, d):
        raise ValidationError("element is not in the requested subfield")
    if ctx.is_zero(a):
        return PolyQ([1])
    g = pq.x_power_minus_one(ctx, d)
    for r, mult in pq.xm1_factorization(ctx, d).factors:
        for _ in range(mult):
            cand = pq.divmod_(ctx, g, r)[0]
            if ctx.is_zero(linearized_eval(ctx, cand, a)):
                g = cand
            else:
                break
    return g


def is_normal(ctx: FieldContext, a) -> bool:
    """True when the Frobenius orbit of a spans F_{q^m} over F_q."""
    a = ctx.element(a)
    if ctx.is_zero(a):
        return False
    full = pq.x_power_minus_one(ctx, ctx.m)
    for r in pq.xm1_factorization(ctx).distinct():
        cofactor = pq.divmod_(ctx, full, r)[0]
        if ctx.is_zero(linearized_eval(ctx, cofactor, a)):
            return False
    return True


# ---------------------------------------------------------------------------
# traces

def trace(ctx: FieldContext, a, d: int) -> FieldElement:
    """Relative trace from F_{q^m} onto F_{q^d}, d | m."""
    if d < 1 or ctx.m % d:
        raise ValidationError(f"d={d} does not divide m={ctx.m}")
    return ctx.apply_matrix(ctx.trace_matrix(d), ctx.element(a))


def rel_trace(ctx: FieldContext, a, from_d: int, to_d: int) -> FieldElement:
    """Trace of the extension F_{q^from_d} / F_{q^to_d} at a."""
    if from_d % to_d or ctx.m % from_d:
        raise ValidationError(
            f"need to_d | from_d | m, got {to_d}, {from_d}, {ctx.m}")
    a = ctx.element(a)
    if not ctx.in_subfield(a, from_d):
        raise ValidationError("element is not in the source subfield")
    acc = ctx.zero
    for t in range(from_d // to_d):
        acc = ctx.add(acc, ctx.frobenius(a, to_d * t))
    return acc


# ---------------------------------------------------------------------------
# trace profiles

@dataclass(frozen=True)
class TraceProfile:
    """Prescribed trace targets: divisors strictly increasing, targets
    stored as integer encodings of elements of the matching subfields."""
    divisors: tuple[int, ...]
    targets: tuple[int, ...]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.divisors, self.targets))


def validate_divisor_tuple(m: int, ds: Sequence[int]) -> tuple[int, ...]:
    """Canonical index tuples: divisors of m, strictly increasing, no
    entry dividing a later one."""
    ds = tuple(int(d) for d in ds)
    if not ds:
        raise ValidationError("divisor tuple is empty")
    for d in ds:
        if d < 1 or m % d:
            raise ValidationError(f"divisor {d} does not divide m={m}")
    if any(ds[i] >= ds[i + 1] for i in range(len(ds) - 1)):
        raise ValidationError("divisors must be strictly increasing")
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            if ds[j] % ds[i] == 0:
                raise ValidationError(
                    f"divisor {ds[i]} divides {ds[j]}; drop the redundant "
                    "smaller entry")
    return ds


def make_profile(ctx: FieldContext, pairs: Iterable[tuple[int, object]]
                 ) -> TraceProfile:
    items = []
    for d, target in pairs:
        d = int(d)
        el = ctx.element(target)
        items.append((d, el))
    items.sort(key=lambda t: t[0])
    ds = validate_divisor_tuple(ctx.m, [d for d, _ in items])
    encs = []
    for d, el in items:
        if not ctx.in_subfield(el, d):
            raise ValidationError(
                f"target {ctx.encode(el)} is not in the degree-{d} subfield")
        encs.append(ctx.encode(el))
    return TraceProfile(ds, tuple(encs))


def check_admissible(ctx: FieldContext, profile: TraceProfile) -> bool:
    """Pairwise compatibility: both targets must agree after tracing
    down to the common subfield F_{q^gcd}."""
    pairs = profile.pairs()
    for i in range(len(pairs)):
        di, ai = pairs[i]
        for j in range(i + 1, len(pairs)):
            dj, aj = pairs[j]
            g = math.gcd(di, dj)
            ti = rel_trace(ctx, ai, di, g)
            tj = rel_trace(ctx, aj, dj, g)
            if ti != tj:
                return False
    return True


def trace_lcm_poly(ctx: FieldContext, ds: Sequence[int]) -> PolyQ:
    """lcm of the x^d - 1 over the given divisors."""
    out = PolyQ([1])
    for d in ds:
        if d < 1 or ctx.m % d:
            raise ValidationError(f"divisor {d} does not divide m={ctx.m}")
        out = pq.lcm(ctx, out, pq.x_power_minus_one(ctx, d))
    return pq.monic(ctx, out)


def lcm_degree_checked(ctx: FieldContext, ds: Sequence[int]) -> int:
    """Degree of lcm(x^d - 1), asserted equal to the integer
    inclusion-exclusion over gcds of the divisor subsets."""
    from .bounds import lcm_degree
    ds = validate_divisor_tuple(ctx.m, sorted(int(d) for d in ds))
    lam = trace_lcm_poly(ctx, ds).degree
    expected = lcm_degree(ds)
    if lam != expected:
        raise ConsistencyError(
            f"lcm degree {lam} disagrees with subset-gcd value {expected}")
    return lam


# ---------------------------------------------------------------------------
# solving

@dataclass(frozen=True)
class TraceSolution:
    particular: FieldElement
    basis: tuple[FieldElement, ...]
    count: int


def _rref_fp(aug: np.ndarray, ncols: int, p: int):
    """In-place reduced row echelon form of the augmented matrix over
    F_p; returns the pivot column list.  Columns >= ncols are carried
    along as right-hand sides."""
    rows = aug.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for rr in range(r, rows):
            if aug[rr, c] % p:
                pr = rr
                break
        if pr is None:
            continue
        if pr != r:
            aug[[r, pr]] = aug[[pr, r]]
        aug[r] = aug[r] * pow(int(aug[r, c]), p - 2, p) % p
        for rr in range(rows):
            if rr != r and aug[rr, c]:
                aug[rr] = (aug[rr] - aug[rr, c] * aug[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def solve_trace_system(ctx: FieldContext, profile: TraceProfile
                       ) -> TraceSolution:
    """All solutions of the prescribed-trace system as an affine space:
    particular witness (free coordinates zero) plus an F_p basis of the
    homogeneous solutions.  Inadmissible profiles have no solutions and
    raise ValidationError.

    The solver's consistency verdict is cross-checked against the
    pairwise admissibility test, and the solution count against
    q^(m - lambda).
    """
    n, p = ctx.n, ctx.p
    blocks = []
    rhs = []
    for d, enc in profile.pairs():
        blocks.append(ctx.trace_matrix(d))
        rhs.extend(ctx.decode(enc).coeffs)
    A = np.vstack(blocks) if blocks else np.zeros((0, n), dtype=np.int64)
    b = np.array(rhs, dtype=np.int64)
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1).astype(np.int64)
    pivots = _rref_fp(aug, n, p)
    nrank = len(pivots)
    consistent = not any(aug[rr, n] % p for rr in range(nrank, aug.shape[0]))

    admissible = check_admissible(ctx, profile)
    if consistent != admissible:
        raise ConsistencyError(
            "solver consistency disagrees with admissibility test")
    if not consistent:
        raise ValidationError("profile is not admissible: no solutions")

    x = np.zeros(n, dtype=np.int64)
    for idx, c in enumerate(pivots):
        x[c] = aug[idx, n]
    particular = FieldElement(tuple(int(v) for v in x))

    free_cols = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free_cols:
        v = np.zeros(n, dtype=np.int64)
        v[fc] = 1
        for idx, c in enumerate(pivots):
            v[c] = (-aug[idx, fc]) % p
        basis.append(FieldElement(tuple(int(t) for t in v)))

    lam = lcm_degree_checked(ctx, profile.divisors)
    if len(free_cols) != ctx.e * (ctx.m - lam):
        raise ConsistencyError(
            f"solution space dimension {len(free_cols)} is not "
            f"e*(m - lambda) = {ctx.e * (ctx.m - lam)}")
    count = p ** len(free_cols)
    if count != ctx.q ** (ctx.m - lam):
        raise ConsistencyError("solution count mismatch")
    return TraceSolution(particular, tuple(basis), count)


def zero_sum_tuple_count(ctx: FieldContext, ds: Sequence[int]) -> int:
    """Number of tuples (b_1, ..., b_k), b_i in F_{q^(d_i)}, summing to
    zero: q^(D - lambda) with D the divisor sum.  The exponent is
    verified against the rank of the stacked subfield embeddings."""
    ds = validate_divisor_tuple(ctx.m, sorted(int(d) for d in ds))
    lam = lcm_degree_checked(ctx, ds)
    D = sum(ds)
    rows = []
    for d in ds:
        M = (ctx.frob_q_power_matrix(d) - np.eye(ctx.n, dtype=np.int64)) % ctx.p
        rows.extend(_nullspace_basis(M, ctx.p))
    if rows:
        span = np.array(rows, dtype=np.int64)
        rank = len(_rref_fp(span, ctx.n, ctx.p))
    else:
        rank = 0
    if rank != ctx.e * lam:
        raise ConsistencyError(
            f"joint subfield span has dimension {rank}, "
            f"expected e*lambda = {ctx.e * lam}")
    return ctx.q ** (D - lam)


# ---------------------------------------------------------------------------
# counting normal elements under trace constraints

def normal_with_traces_count(ctx: FieldContext, profile: TraceProfile) -> int:
    """Number of normal elements of F_{q^m} hitting every prescribed
    trace target.  Requires gcd(m, p) = 1.  Zero when the profile is
    inadmissible or any target fails to be normal in its own subfield;
    otherwise the ratio of unit-group sizes for x^m - 1 and the lcm of
    the x^d - 1."""
    if math.gcd(ctx.m, ctx.p) != 1:
        raise ValidationError(
            "normal counting requires m coprime to the characteristic")
    if not check_admissible(ctx, profile):
        return 0
    for d, enc in profile.pairs():
        if additive_order(ctx, enc, d) != pq.x_power_minus_one(ctx, d):
            return 0
    g = trace_lcm_poly(ctx, profile.divisors)
    total = pq.phi(ctx, pq.xm1_factorization(ctx))
    part = pq.phi(ctx, g)
    if total % part:
        raise ConsistencyError("unit-group sizes do not divide evenly")
    return total // part


def trace_correspondence_ratio(ctx: FieldContext, d: int) -> int:
    """Fiber size of the trace map from normal elements of F_{q^m} onto
    normal elements of F_{q^d}."""
    if d < 1 or ctx.m % d:
        raise ValidationError(f"d={d} does not divide m={ctx.m}")
    total = pq.phi(ctx, pq.xm1_factorization(ctx))
    part = pq.phi(ctx, pq.xm1_factorization(ctx, d))
    if total % part:
        raise ConsistencyError("unit-group sizes do not divide evenly")
    return total // part


def normal_subfield_elements(ctx: FieldContext, d: int) -> list[int]:
    """Encodings of elements of F_{q^d} that are normal over F_q,
    sorted.  The count is checked against the unit-group size."""
    if d < 1 or ctx.m % d:
        raise ValidationError(f"d={d} does not divide m={ctx.m}")
    target = pq.x_power_minus_one(ctx, d)
    out = []
    for enc in ctx.subfield_encodings(d):
        enc = int(enc)
        if enc and additive_order(ctx, enc, d) == target:
            out.append(enc)
    expected = pq.phi(ctx, pq.xm1_factorization(ctx, d))
    if len(out) != expected:
        raise ConsistencyError(
            f"found {len(out)} normal elements in F_(q^{d}), "
            f"expected {expected}")
    return out


def enumerate_normal_admissible(ctx: FieldContext, ds: Sequence[int],
                                cap: int = ENUMERATION_CAP
                                ) -> list[TraceProfile]:
    """All profiles over the given divisors whose targets are normal in
    their subfields and mutually admissible."""
    ds = validate_divisor_tuple(ctx.m, sorted(int(d) for d in ds))
    pools = [normal_subfield_elements(ctx, d) for d in ds]
    total = 1
    for pool in pools:
        total *= len(pool)
    if total > cap:
        raise BudgetError(f"{total} candidate profiles exceed cap {cap}")
    out = []
    for targets in itertools.product(*pools):
        prof = TraceProfile(tuple(ds), tuple(targets))
        if check_admissible(ctx, prof):
            out.append(prof)
    return out
