"""Exhaustive classification of a field tower by primitivity, normality,
and relative-trace tuple.

Two passes over the field.  A multiplicative walk visits the unit group
in generator-power order, in parallel lanes advanced by one batched
matrix product per step, so the exponent of every element is known and
primitivity is a gcd test; the walk must land back on 1 after q^m - 1
steps, which is asserted.  An additive pass runs over encoding order in
chunks, classifying normality through the cofactor maps of x^m - 1 and
bucketing elements by their trace tuple.  Counts are merged by exact
integer addition, so reports are independent of chunking and worker
count.

The census is the ground-truth oracle: verify_theorems compares every
closed-form count (unit-group ratios, solution counts, zero-sum counts,
fiber sizes, existence below the lcm degree) against it and records
pass or fail without throwing.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from . import linearized as lin
from . import polyq as pq
from .errors import BudgetError, ConsistencyError, ValidationError
from .field import FieldContext, build_context
from .intfactor import factorize

CENSUS_CAP = 1 << 24
CENSUS_CAP_EXTENDED = 1 << 28
CENSUS_CAP_ENV = "NORMTRACE_CENSUS_CAP"
CHUNK = 1 << 20
WALK_LANES = 1 << 14
BUCKET_CAP = 1 << 22


def census_cap() -> int:
    """Default element cap, overridable through the environment; the
    hard ceiling stays at the extended cap."""
    raw = os.environ.get(CENSUS_CAP_ENV)
    if raw is None:
        return CENSUS_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(
            f"{CENSUS_CAP_ENV} must be an integer, got {raw!r}") from exc
    return min(cap, CENSUS_CAP_EXTENDED)


@dataclass(frozen=True)
class ProfileCount:
    """Counts for one trace-target tuple."""
    targets: tuple[int, ...]
    any: int
    normal: int
    primitive: int
    primitive_normal: int

    def to_dict(self) -> dict:
        return {
            "targets": [str(t) for t in self.targets],
            "any": str(self.any), "normal": str(self.normal),
            "primitive": str(self.primitive),
            "primitive_normal": str(self.primitive_normal),
        }


@dataclass(frozen=True)
class CensusReport:
    p: int
    e: int
    m: int
    q: int
    divisors: tuple[int, ...]
    totals: dict[str, int]
    profiles: tuple[ProfileCount, ...]
    elapsed: float
    workers: int

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "p": self.p, "e": self.e, "m": self.m, "q": self.q,
            "divisors": list(self.divisors),
            "totals": {k: str(v) for k, v in self.totals.items()},
            "profiles": [pr.to_dict() for pr in self.profiles],
        }
        if include_timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
            out["workers"] = self.workers
        return out

    def profile_map(self) -> dict[tuple[int, ...], ProfileCount]:
        return {pr.targets: pr for pr in self.profiles}


# ---------------------------------------------------------------------------
# passes

def _f64(M: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(M, dtype=np.float64)


def _matmul_mod(A: np.ndarray, MT: np.ndarray, p: int) -> np.ndarray:
    # float64 products stay far below 2^53 (entries < p, inner dim e*m)
    return (A @ MT) % p


def _digit_chunk(ctx: FieldContext, lo: int, hi: int) -> np.ndarray:
    """(hi-lo) x n float64 digit matrix for an encoding range."""
    enc = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((hi - lo, ctx.n), dtype=np.float64)
    for i in range(ctx.n):
        out[:, i] = enc % ctx.p
        enc = enc // ctx.p
    return out


def _cofactor_mats(ctx: FieldContext) -> list[np.ndarray]:
    full = pq.x_power_minus_one(ctx, ctx.m)
    mats = []
    for r in pq.xm1_factorization(ctx).distinct():
        cof = pq.divmod_(ctx, full, r)[0]
        mats.append(_f64(lin.linearized_matrix(ctx, cof).T))
    return mats


def _primitive_flags(ctx: FieldContext) -> np.ndarray:
    """Boolean array over encodings: multiplicative order q^m - 1.
    Walks the unit group in WALK_LANES parallel lanes; the closing
    multiply must return lane 0 to the identity."""
    N = ctx.group_order
    order = ctx.order
    flags = np.zeros(order, dtype=bool)
    if ctx.order <= ctx.dlog_cap:
        orbit = ctx.orbit_encodings()
        t = np.arange(N, dtype=np.int64)
        flags[orbit[np.gcd(t, N) == 1]] = True
        return flags
    K = min(WALK_LANES, N)
    g = ctx.generator
    lanes = np.empty((ctx.n, K), dtype=np.float64)
    cur = ctx.one
    for j in range(K):
        lanes[:, j] = cur.coeffs
        cur = ctx.mul(cur, g)
    step_mat = _f64(ctx.mul_matrix(ctx.pow(g, K)))
    pvec = ctx.p ** np.arange(ctx.n, dtype=np.int64)
    steps = -(-N // K)
    base = 0
    for _ in range(steps):
        width = min(K, N - base)
        encs = (lanes[:, :width].astype(np.int64).T @ pvec)
        t = base + np.arange(width, dtype=np.int64)
        flags[encs[np.gcd(t, N) == 1]] = True
        lanes = _matmul_mod(step_mat, lanes, ctx.p)
        base += K
    # after ceil(N/K) steps lane 0 holds g^(steps*K); the cycle must
    # have closed exactly
    check = ctx.pow(g, (steps * K) % N)
    lane0 = [int(v) for v in lanes[:, 0].astype(np.int64)]
    if tuple(lane0) != check.coeffs:
        raise ConsistencyError("unit-group walk failed to close")
    return flags


def _count_pass(ctx: FieldContext, ds: tuple[int, ...],
                prim: np.ndarray, lo: int, hi: int,
                subs: list[np.ndarray], strides: list[int],
                nbuckets: int) -> np.ndarray:
    """Counts for one encoding range: 4 x nbuckets matrix with rows
    any, normal, primitive, primitive_normal."""
    trace_mats = [_f64(ctx.trace_matrix(d).T) for d in ds]
    cof_mats = _cofactor_mats(ctx)
    pvec = ctx.p ** np.arange(ctx.n, dtype=np.int64)
    counts = np.zeros((4, nbuckets), dtype=np.int64)
    for c0 in range(lo, hi, CHUNK):
        c1 = min(c0 + CHUNK, hi)
        B = _digit_chunk(ctx, c0, c1)
        ids = np.zeros(c1 - c0, dtype=np.int64)
        for TM, sub, stride in zip(trace_mats, subs, strides):
            tr = _matmul_mod(B, TM, ctx.p).astype(np.int64) @ pvec
            idx = np.searchsorted(sub, tr)
            if idx.max(initial=0) >= len(sub) or \
                    not np.array_equal(sub[idx], tr):
                raise ConsistencyError("trace left its subfield")
            ids += idx * stride
        normal = np.ones(c1 - c0, dtype=bool)
        for MT in cof_mats:
            normal &= _matmul_mod(B, MT, ctx.p).any(axis=1)
        pr = prim[c0:c1]
        counts[0] += np.bincount(ids, minlength=nbuckets)
        counts[1] += np.bincount(ids[normal], minlength=nbuckets)
        counts[2] += np.bincount(ids[pr], minlength=nbuckets)
        counts[3] += np.bincount(ids[normal & pr], minlength=nbuckets)
    return counts


def run_census(ctx: FieldContext, ds, *, workers: int = 1,
               cap: int | None = None) -> CensusReport:
    """Classify every element of F_{q^m} by trace tuple on the given
    divisors, normality, and primitivity."""
    start = time.monotonic()
    ds = lin.validate_divisor_tuple(ctx.m, sorted(int(d) for d in ds))
    limit = census_cap() if cap is None else min(int(cap),
                                                 CENSUS_CAP_EXTENDED)
    if ctx.order > limit:
        raise BudgetError(
            f"census over {ctx.order} elements exceeds the cap {limit}")
    nbuckets = 1
    strides = []
    for d in ds:
        strides.append(nbuckets)
        nbuckets *= ctx.q**d
    if nbuckets > BUCKET_CAP:
        raise BudgetError(f"{nbuckets} trace buckets exceed the cap")
    subs = [np.asarray(ctx.subfield_encodings(d), dtype=np.int64)
            for d in ds]
    prim = _primitive_flags(ctx)

    workers = max(1, int(workers))
    if workers == 1:
        counts = _count_pass(ctx, ds, prim, 0, ctx.order, subs, strides,
                             nbuckets)
    else:
        counts = _parallel_pass(ctx, ds, prim, subs, strides, nbuckets,
                                workers)

    phi_n = 1
    for r, k in ctx.group_factors:
        phi_n *= (r - 1) * r ** (k - 1)
    if int(counts[2].sum()) != phi_n:
        raise ConsistencyError(
            "primitive total disagrees with phi(q^m - 1)")
    if int(counts[0].sum()) != ctx.order:
        raise ConsistencyError("bucket totals do not cover the field")

    profiles = []
    for flat in range(nbuckets):
        rem = flat
        targets = []
        for d, stride, sub in zip(reversed(ds), reversed(strides),
                                  reversed(subs)):
            targets.append(int(sub[rem // stride]))
            rem %= stride
        targets.reverse()
        profiles.append(ProfileCount(
            targets=tuple(targets),
            any=int(counts[0, flat]), normal=int(counts[1, flat]),
            primitive=int(counts[2, flat]),
            primitive_normal=int(counts[3, flat])))
    totals = {
        "elements": ctx.order,
        "primitive": int(counts[2].sum()),
        "normal": int(counts[1].sum()),
        "primitive_normal": int(counts[3].sum()),
    }
    return CensusReport(
        p=ctx.p, e=ctx.e, m=ctx.m, q=ctx.q, divisors=ds, totals=totals,
        profiles=tuple(profiles), elapsed=time.monotonic() - start,
        workers=workers)


# ---------------------------------------------------------------------------
# optional process pool

_WORKER_STATE: dict = {}


def _pool_init(spec_tuple, ds, subs, strides, nbuckets):
    ctx = build_context(spec_tuple)
    _WORKER_STATE["args"] = (ctx, ds, subs, strides, nbuckets)


def _pool_task(job):
    lo, hi, prim_bytes = job
    ctx, ds, subs, strides, nbuckets = _WORKER_STATE["args"]
    prim = np.zeros(ctx.order, dtype=bool)
    prim[lo:hi] = np.frombuffer(prim_bytes, dtype=bool)
    return _count_pass(ctx, ds, prim, lo, hi, subs, strides, nbuckets)


def _parallel_pass(ctx, ds, prim, subs, strides, nbuckets, workers):
    import multiprocessing as mp
    jobs = []
    span = max(1 << 14, -(-ctx.order // (4 * workers)))
    for lo in range(0, ctx.order, span):
        hi = min(lo + span, ctx.order)
        jobs.append((lo, hi, prim[lo:hi].tobytes()))
    spec_tuple = (ctx.p, ctx.e, ctx.m, ctx.modulus)
    with mp.get_context().Pool(
            workers, initializer=_pool_init,
            initargs=(spec_tuple, ds, subs, strides, nbuckets)) as pool:
        parts = pool.map(_pool_task, jobs)
    return np.sum(parts, axis=0, dtype=np.int64)


# ---------------------------------------------------------------------------
# theorem verification against the census

def _record(results, theorem_id, expected, observed):
    results.append({
        "theorem_id": theorem_id,
        "expected": expected,
        "observed": observed,
        "passed": expected == observed,
    })


def verify_theorems(ctx: FieldContext, ds, *, cap: int | None = None,
                    workers: int = 1) -> list[dict]:
    """Compare closed-form counts against the census; failures are
    recorded in the result list, never raised."""
    report = run_census(ctx, ds, cap=cap, workers=workers)
    ds = report.divisors
    results: list[dict] = []
    coprime = math.gcd(ctx.m, ctx.p) == 1

    phi_n = 1
    for r, k in ctx.group_factors:
        phi_n *= (r - 1) * r ** (k - 1)
    _record(results, "primitive-count", str(phi_n),
            str(report.totals["primitive"]))

    # the generator count of the Frobenius module is Phi(x^m - 1) for
    # every m, squarefree or not
    _record(results, "normal-count",
            str(pq.phi(ctx, pq.xm1_factorization(ctx))),
            str(report.totals["normal"]))

    lam = lin.lcm_degree_checked(ctx, ds)
    expected_any = {}
    observed_any = {}
    for pr in report.profiles:
        prof = lin.TraceProfile(ds, pr.targets)
        admissible = lin.check_admissible(ctx, prof)
        key = ",".join(str(t) for t in pr.targets)
        expected_any[key] = str(ctx.q ** (ctx.m - lam) if admissible
                                else 0)
        observed_any[key] = str(pr.any)
    _record(results, "trace-solution-count", expected_any, observed_any)

    if coprime:
        expected_nm = {}
        observed_nm = {}
        for pr in report.profiles:
            prof = lin.TraceProfile(ds, pr.targets)
            key = ",".join(str(t) for t in pr.targets)
            expected_nm[key] = str(lin.normal_with_traces_count(ctx, prof))
            observed_nm[key] = str(pr.normal)
        _record(results, "prescribed-trace-normal-count", expected_nm,
                observed_nm)

        for d in ds:
            ratio = lin.trace_correspondence_ratio(ctx, d)
            normal_targets = set(lin.normal_subfield_elements(ctx, d))
            marg: dict[int, int] = {}
            pos = ds.index(d)
            for pr in report.profiles:
                t = pr.targets[pos]
                marg[t] = marg.get(t, 0) + pr.normal
            expected_fb = {str(int(a)): str(ratio if int(a) in
                                            normal_targets else 0)
                           for a in ctx.subfield_encodings(d)}
            observed_fb = {str(a): str(c) for a, c in sorted(marg.items())}
            _record(results, f"normal-fiber-size-d{d}", expected_fb,
                    observed_fb)

    _record(results, "zero-sum-count",
            str(lin.zero_sum_tuple_count(ctx, ds)),
            str(_zero_sum_direct(ctx, ds)))

    if math.lcm(*ds) < ctx.m and coprime:
        missing = []
        for pr in report.profiles:
            prof = lin.TraceProfile(ds, pr.targets)
            if lin.normal_with_traces_count(ctx, prof) == 0:
                continue
            if pr.primitive_normal == 0:
                missing.append(list(map(str, pr.targets)))
        _record(results, "existence-below-lcm-degree", [], missing)
    return results


def _zero_sum_direct(ctx: FieldContext, ds) -> int:
    """Product-space enumeration of zero-sum tuples, independent of the
    rank-based count."""
    pools = [[ctx.element(int(v)) for v in ctx.subfield_encodings(d)]
             for d in ds]
    total = 1
    for pool in pools:
        total *= len(pool)
    if total > BUCKET_CAP:
        raise BudgetError(f"{total} tuples exceed the enumeration cap")
    count = 0
    for combo in iter_product(*pools):
        acc = ctx.zero
        for el in combo:
            acc = ctx.add(acc, el)
        if ctx.is_zero(acc):
            count += 1
    return count


def prime_powers_upto(q_max: int) -> list[tuple[int, int, int]]:
    """(q, p, e) for every prime power q in [2, q_max]."""
    out = []
    for q in range(2, q_max + 1):
        fac = factorize(q)
        if len(fac) == 1:
            p, e = fac[0]
            out.append((q, p, e))
    return out


def verify_pmtrace_exceptions(q_max: int, m_max: int,
                              *, cap: int | None = None
                              ) -> list[tuple[int, int, int]]:
    """All (q, m, a) with 2 <= m <= m_max and no primitive element of
    F_{q^m} having trace a onto F_q.  a is reported as its encoding;
    the zero element is always encoding 0."""
    misses = []
    for q, p, e in prime_powers_upto(q_max):
        for m in range(2, m_max + 1):
            ctx = build_context((p, e, m))
            report = run_census(ctx, (1,), cap=cap)
            for pr in report.profiles:
                if pr.primitive == 0:
                    misses.append((q, m, pr.targets[0]))
    return sorted(misses)
