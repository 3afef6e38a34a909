"""Characters of the additive and multiplicative groups of F_{q^m}.

Additive characters are indexed by field elements, chi_c(b) =
zeta_p^Tr(c*b) with Tr the absolute trace; multiplicative characters by
integers j, eta_j(g0^t) = exp(2*pi*i*j*t/(q^m - 1)) on the canonical
generator g0.  The F_q-order of chi_c is the monic divisor of x^m - 1
generating the annihilator of chi_c under the linearized action; it is
computed exactly over F_p, never through complex arithmetic.

Weighted character sums act as indicator functions: primitive_char_sum
is 1 on primitive elements and 0 elsewhere, normal_char_sum the same
for normal elements, trace_char_sum for a prescribed relative trace.
Each has a literal per-element summation and a bulk table built from
the same weights by a discrete Fourier transform; tests compare the two
routes.  char_sum_audit splits the weighted count of primitive normal
elements with prescribed traces into its main and error terms and
checks the error term against the square-root cancellation bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import polyq as pq
from .errors import AuditError, BudgetError, ConsistencyError, ValidationError
from .field import FieldContext, FieldElement
from .intfactor import divisors as int_divisors
from .intfactor import euler_phi, mobius, squarefree_part
from .linearized import (TraceProfile, additive_order, check_admissible,
                         is_normal, lcm_degree_checked, linearized_matrix,
                         trace_lcm_poly)
from .polyq import PolyQ

CHAR_TOL = 1e-9
TABLE_CAP = 1 << 22


# ---------------------------------------------------------------------------
# character types and evaluation

@dataclass(frozen=True)
class AdditiveCharacter:
    """chi_c, the canonical additive character composed with b -> c*b."""
    c: FieldElement

    def is_trivial(self, ctx: FieldContext) -> bool:
        return ctx.is_zero(self.c)


@dataclass(frozen=True)
class MultiplicativeCharacter:
    """eta_j on the cyclic unit group; j is reduced mod q^m - 1."""
    j: int

    def order(self, ctx: FieldContext) -> int:
        return ctx.group_order // math.gcd(self.j, ctx.group_order)

    def is_trivial(self, ctx: FieldContext) -> bool:
        return self.j % ctx.group_order == 0


def _root_of_unity(num: int, den: int) -> complex:
    return cmath.exp(2j * cmath.pi * (num % den) / den)


def _gram_matrix(ctx: FieldContext) -> np.ndarray:
    """G[i, j] = Tr(x^i * x^j) over F_p.  The bilinear form of the
    absolute trace; nondegenerate because the extension is separable."""
    key = "gram"
    if key not in ctx._cache:
        n = ctx.n
        t = ctx.abs_trace_vector()
        x = ctx.element([0, 1] + [0] * (n - 2)) if n > 1 else ctx.element(1)
        powers = []
        cur = ctx.element(1)
        for _ in range(2 * n - 1):
            powers.append(np.array(cur.coeffs, dtype=np.int64))
            cur = ctx.mul(cur, x)
        G = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                G[i, j] = int(t @ powers[i + j]) % ctx.p
        if _matrix_rank_fp(G, ctx.p) != n:
            raise ConsistencyError("trace form is degenerate")
        ctx._cache[key] = G
    return ctx._cache[key]


def _matrix_rank_fp(M: np.ndarray, p: int) -> int:
    A = M.copy() % p
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if A[r, c] % p), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        A[rank] = (A[rank] * pow(int(A[rank, c]), p - 2, p)) % p
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] = (A[r] - A[r, c] * A[rank]) % p
        rank += 1
    return rank


def _all_coeffs(ctx: FieldContext) -> np.ndarray:
    """(order x n) matrix: row k is the coefficient vector of encoding k."""
    key = "all_coeffs"
    if key not in ctx._cache:
        if ctx.order > TABLE_CAP:
            raise BudgetError(
                f"field of order {ctx.order} exceeds the character table "
                f"cap {TABLE_CAP}")
        enc = np.arange(ctx.order, dtype=np.int64)
        out = np.empty((ctx.order, ctx.n), dtype=np.int64)
        for i in range(ctx.n):
            out[:, i] = enc % ctx.p
            enc = enc // ctx.p
        ctx._cache[key] = out
    return ctx._cache[key]


def _dual_vector(ctx: FieldContext, c: FieldElement) -> np.ndarray:
    """w with Tr(c * b) = w . coeffs(b) mod p."""
    G = _gram_matrix(ctx)
    return (G @ np.array(c.coeffs, dtype=np.int64)) % ctx.p


def abs_trace_of_product(ctx: FieldContext, c, b) -> int:
    w = _dual_vector(ctx, ctx.element(c))
    return int(w @ np.array(ctx.element(b).coeffs, dtype=np.int64)) % ctx.p


def _subfield_trace_vector(ctx: FieldContext, d: int) -> np.ndarray:
    """v with Tr_{F_{q^d}/F_p}(y) = v . coeffs(y) for y in F_{q^d}.
    Distinct from the ambient absolute trace, which is m/d times this
    and degenerates on the subfield when p divides m/d."""
    key = ("subfield_abs_trace", d)
    if key not in ctx._cache:
        Fp = ctx.frob_p_matrix()
        acc = np.eye(ctx.n, dtype=np.int64)
        out = np.zeros(ctx.n, dtype=np.int64)
        for _ in range(ctx.e * d):
            out = (out + acc[0]) % ctx.p
            acc = (Fp @ acc) % ctx.p
        ctx._cache[key] = out
    return ctx._cache[key]


def char_eval(ctx: FieldContext, kind: str, index, b) -> complex:
    """Evaluate one character: chi_c(b) = zeta_p^Tr(c*b) for kind
    "additive", eta_j(b) = exp(2*pi*i*j*dlog(b)/(q^m-1)) for kind
    "multiplicative" (b must be nonzero and the field within the dlog
    cap)."""
    if kind == "additive":
        if isinstance(index, AdditiveCharacter):
            index = index.c
        return _root_of_unity(abs_trace_of_product(ctx, index, b), ctx.p)
    if kind == "multiplicative":
        if isinstance(index, MultiplicativeCharacter):
            index = index.j
        j = int(index)
        b = ctx.element(b)
        if ctx.is_zero(b):
            raise ValidationError(
                "multiplicative characters are undefined at zero")
        t = ctx.discrete_log(b)
        return _root_of_unity(j * t, ctx.group_order)
    raise ValidationError(f"unknown character kind {kind!r}")


# ---------------------------------------------------------------------------
# F_q-order of an additive character

def _cofactor_cached(ctx: FieldContext, g: PolyQ, r: PolyQ) -> PolyQ:
    key = ("cofactor", g.coeffs, r.coeffs)
    if key not in ctx._cache:
        ctx._cache[key] = pq.divmod_(ctx, g, r)[0]
    return ctx._cache[key]


def additive_char_order(ctx: FieldContext, c) -> PolyQ:
    """Minimal monic f dividing x^m - 1 with Tr(c * L_f(b)) = 0 for
    every b, i.e. with chi_c constant on the image of L_f.  Computed by
    the same factor-stripping ladder as additive_order, with the
    vanishing test done exactly on the dual vector over F_p."""
    c = ctx.element(c)
    if ctx.is_zero(c):
        return PolyQ([1])
    w = _dual_vector(ctx, c)

    def annihilates(f: PolyQ) -> bool:
        M = linearized_matrix(ctx, f)
        return not ((M.T @ w) % ctx.p).any()

    g = pq.x_power_minus_one(ctx, ctx.m)
    for r, mult in pq.xm1_factorization(ctx).factors:
        for _ in range(mult):
            cand = _cofactor_cached(ctx, g, r)
            if annihilates(cand):
                g = cand
            else:
                break
    return g


def _chi_order_data(ctx: FieldContext):
    """Per-factor multiplicities of the order of chi_c, batched over all
    encodings c through the Gram matrix: mults[i, c] is the exponent of
    the i-th irreducible factor of x^m - 1 in Ord(chi_c)."""
    key = "chi_order_data"
    if key not in ctx._cache:
        G = _gram_matrix(ctx)
        C = _all_coeffs(ctx)
        W = (C @ G.T) % ctx.p
        factors = pq.xm1_factorization(ctx).factors
        full = pq.x_power_minus_one(ctx, ctx.m)
        mults = np.zeros((len(factors), ctx.order), dtype=np.int64)
        for i, (r, k) in enumerate(factors):
            # multiplicity = least level whose reduction still annihilates
            reduced = full
            mult_i = np.full(ctx.order, k, dtype=np.int64)
            for level in range(k - 1, -1, -1):
                reduced = pq.divmod_(ctx, reduced, r)[0]
                M = linearized_matrix(ctx, reduced)
                annihilated = ~((W @ M) % ctx.p).any(axis=1)
                mult_i[annihilated] = level
            mults[i] = mult_i
        ctx._cache[key] = (factors, mults)
    return ctx._cache[key]


def _chi_weights(ctx: FieldContext) -> np.ndarray:
    """Per-index weights mu'(f_c)/Phi(f_c) of the normality indicator,
    where f_c is the order of chi_c; squarefree orders only."""
    key = "chi_weights"
    if key not in ctx._cache:
        factors, mults = _chi_order_data(ctx)
        phis = np.array([pq.phi(ctx, r) for r, _ in factors],
                        dtype=np.float64)
        squarefree = (mults <= 1).all(axis=0)
        counts = mults.sum(axis=0)
        weights = np.where(counts % 2, -1.0, 1.0)
        for i in range(len(factors)):
            weights = weights / np.where(mults[i] == 1, phis[i], 1.0)
        weights = np.where(squarefree, weights, 0.0)
        ctx._cache[key] = weights
    return ctx._cache[key]


# ---------------------------------------------------------------------------
# Gauss sums

def gauss_sum(ctx: FieldContext, eta, chi) -> complex:
    """Direct summation of eta(w) * chi_c(w) over the unit group.  For
    nontrivial eta the magnitude is q^(m/2) unless c = 0, where the sum
    vanishes; for trivial eta and c != 0 it is -1."""
    if not isinstance(eta, MultiplicativeCharacter):
        eta = MultiplicativeCharacter(int(eta))
    if not isinstance(chi, AdditiveCharacter):
        chi = AdditiveCharacter(ctx.element(chi))
    N = ctx.group_order
    orbit = ctx.orbit_encodings()
    C = _all_coeffs(ctx)
    w = _dual_vector(ctx, chi.c)
    tr = (C[orbit] @ w) % ctx.p
    add_phase = np.exp(2j * np.pi * tr / ctx.p)
    j = eta.j % N
    mul_phase = np.exp(2j * np.pi * ((j * np.arange(N)) % N) / N)
    return complex(np.sum(mul_phase * add_phase))


def index_sum(ctx: FieldContext, encodings) -> FieldElement:
    """Field sum of a tuple of element encodings (the s(c) of the
    quadruple-sum decomposition)."""
    acc = ctx.zero
    for enc in encodings:
        acc = ctx.add(acc, ctx.element(enc))
    return acc


# ---------------------------------------------------------------------------
# indicator sums: literal per-element routes

def primitive_char_sum(ctx: FieldContext, b) -> complex:
    """theta * sum over squarefree t | q^m - 1 of mu(t)/phi(t) times the
    sum of eta(b) over the phi(t) characters of order t.  Literal
    summation; 1 on primitive elements, 0 elsewhere."""
    b = ctx.element(b)
    if ctx.is_zero(b):
        return 0j
    N = ctx.group_order
    L = ctx.discrete_log(b)
    theta = float(primitive_density(ctx))
    acc = 0j
    for t in _squarefree_divisors(N):
        stride = N // t
        us = np.array([u for u in range(t) if math.gcd(u, t) == 1],
                      dtype=np.int64)
        inner = np.exp(2j * np.pi * ((stride * us * L) % N) / N)
        acc += mobius(t) / len(us) * complex(np.sum(inner))
    return theta * acc


def normal_char_sum(ctx: FieldContext, b) -> complex:
    """Theta * sum over squarefree monic f | x^m - 1 of mu'(f)/Phi(f)
    times the sum of chi_c(b) over the Phi(f) characters of order f.
    Literal summation over every character index, with orders from the
    per-index ladder; 1 on normal elements, 0 elsewhere."""
    b = ctx.element(b)
    weights = _ladder_weights(ctx)
    bv = np.array(b.coeffs, dtype=np.int64)
    G = _gram_matrix(ctx)
    C = _all_coeffs(ctx)
    tr = ((C @ G.T) % ctx.p @ bv) % ctx.p
    phases = np.exp(2j * np.pi * tr / ctx.p)
    Theta = float(normal_density(ctx))
    return Theta * complex(np.sum(weights * phases))


def _ladder_weights(ctx: FieldContext) -> np.ndarray:
    """Same weights as _chi_weights but from per-index additive_char_order
    calls; the independent route for cross-checks."""
    key = "chi_weights_ladder"
    if key not in ctx._cache:
        out = np.zeros(ctx.order, dtype=np.float64)
        cache: dict[tuple, float] = {}
        for enc in range(ctx.order):
            f = additive_char_order(ctx, enc)
            kf = f.coeffs
            if kf not in cache:
                mu = pq.mobius(ctx, f) if f.degree > 0 else 1
                cache[kf] = mu / pq.phi(ctx, f) if mu else 0.0
            out[enc] = cache[kf]
        ctx._cache[key] = out
    return ctx._cache[key]


def trace_char_sum(ctx: FieldContext, d: int, a, b) -> complex:
    """q^(-d) * sum over c in F_{q^d} of chi_c(b) * conj(chi_c(a));
    1 exactly when the relative trace of b onto F_{q^d} equals a."""
    if d < 1 or ctx.m % d:
        raise ValidationError(f"d={d} does not divide m={ctx.m}")
    a = ctx.element(a)
    if not ctx.in_subfield(a, d):
        raise ValidationError("trace target must lie in F_(q^d)")
    b = ctx.element(b)
    bv = np.array(b.coeffs, dtype=np.int64)
    G = _gram_matrix(ctx)
    C = _all_coeffs(ctx)
    sub = ctx.subfield_encodings(d)
    tr_b = ((C[sub] @ G.T) % ctx.p @ bv) % ctx.p
    tr_a = _subfield_target_traces(ctx, d, a)
    phases = np.exp(2j * np.pi * ((tr_b - tr_a) % ctx.p) / ctx.p)
    return complex(np.sum(phases)) / ctx.q**d


def _subfield_target_traces(ctx: FieldContext, d: int,
                            a: FieldElement) -> np.ndarray:
    """Tr_{F_{q^d}/F_p}(c * a) for every c in F_{q^d}, in subfield
    encoding order."""
    v = _subfield_trace_vector(ctx, d)
    Ma = np.array(ctx.mul_matrix(a), dtype=np.int64)
    C = _all_coeffs(ctx)
    sub = np.asarray(ctx.subfield_encodings(d), dtype=np.int64)
    prods = (C[sub] @ Ma.T) % ctx.p
    return (prods @ v) % ctx.p


# ---------------------------------------------------------------------------
# indicator sums: bulk tables (same weights, Fourier-transform route)

def primitive_char_sum_table(ctx: FieldContext) -> np.ndarray:
    """primitive_char_sum at every encoding, via one length-(q^m - 1)
    inverse DFT of the order-class weights."""
    key = "rho_table"
    if key not in ctx._cache:
        N = ctx.group_order
        if ctx.order > TABLE_CAP:
            raise BudgetError(
                f"field of order {ctx.order} exceeds the character table "
                f"cap {TABLE_CAP}")
        gcds = np.gcd(np.arange(N, dtype=np.int64), N)
        W = np.zeros(N, dtype=np.complex128)
        for t in _squarefree_divisors(N):
            W[N // gcds == t] = mobius(t) / euler_phi(t)
        vals = np.fft.ifft(W) * N * float(primitive_density(ctx))
        table = np.zeros(ctx.order, dtype=np.complex128)
        table[ctx.orbit_encodings()] = vals
        ctx._cache[key] = table
    return ctx._cache[key]


def _scatter_ifft(ctx: FieldContext, indices: np.ndarray,
                  weights: np.ndarray) -> np.ndarray:
    """sum of weights[c] * zeta_p^(u_c . b) over c, for every b, where
    u_c is the dual vector encoded as indices[c]; one p-ary
    multidimensional inverse DFT."""
    A = np.zeros(ctx.order, dtype=np.complex128)
    np.add.at(A, indices, weights)
    shaped = A.reshape((ctx.p,) * ctx.n)
    return np.fft.ifftn(shaped).reshape(-1) * ctx.order


def _dual_index_table(ctx: FieldContext) -> np.ndarray:
    """Encoding of the dual vector G @ c for every encoding c."""
    key = "dual_index"
    if key not in ctx._cache:
        G = _gram_matrix(ctx)
        C = _all_coeffs(ctx)
        U = (C @ G.T) % ctx.p
        pvec = ctx.p ** np.arange(ctx.n, dtype=np.int64)
        ctx._cache[key] = U @ pvec
    return ctx._cache[key]


def normal_char_sum_table(ctx: FieldContext) -> np.ndarray:
    """normal_char_sum at every encoding, via a p-ary inverse DFT of the
    order-class weights scattered at the dual indices."""
    key = "kappa_table"
    if key not in ctx._cache:
        weights = _chi_weights(ctx)
        table = _scatter_ifft(ctx, _dual_index_table(ctx),
                              weights.astype(np.complex128))
        ctx._cache[key] = table * float(normal_density(ctx))
    return ctx._cache[key]


def trace_char_sum_table(ctx: FieldContext, d: int, a) -> np.ndarray:
    """trace_char_sum(d, a, .) at every encoding."""
    if d < 1 or ctx.m % d:
        raise ValidationError(f"d={d} does not divide m={ctx.m}")
    a = ctx.element(a)
    if not ctx.in_subfield(a, d):
        raise ValidationError("trace target must lie in F_(q^d)")
    key = ("tau_table", d, ctx.encode(a))
    if key not in ctx._cache:
        sub = np.asarray(ctx.subfield_encodings(d), dtype=np.int64)
        dual = _dual_index_table(ctx)[sub]
        tr_a = _subfield_target_traces(ctx, d, a)
        weights = np.exp(-2j * np.pi * tr_a / ctx.p) / ctx.q**d
        ctx._cache[key] = _scatter_ifft(ctx, dual, weights)
    return ctx._cache[key]


# ---------------------------------------------------------------------------
# densities and the main-term / error-term audit

def primitive_density(ctx: FieldContext) -> Fraction:
    """phi(q^m - 1) / (q^m - 1)."""
    out = Fraction(1)
    for r, _ in ctx.group_factors:
        out *= Fraction(r - 1, r)
    return out


def normal_density(ctx: FieldContext) -> Fraction:
    """Phi(x^m - 1) / q^m."""
    return Fraction(pq.phi(ctx, pq.xm1_factorization(ctx)), ctx.order)


def _squarefree_divisors(n: int) -> list[int]:
    return int_divisors(squarefree_part(n))


@dataclass(frozen=True)
class CharSumBreakdown:
    """Main and error terms of the weighted count of primitive normal
    elements with prescribed traces, with the exact bounds they must
    satisfy."""
    q: int
    m: int
    divisors: tuple[int, ...]
    divisor_sum: int
    lam: int
    primitive_density: Fraction
    normal_density: Fraction
    main_term: Fraction
    error_term: Fraction
    error_bound_sq: int
    main_lower_bound: int
    count: int

    def to_dict(self) -> dict:
        return {
            "q": self.q, "m": self.m, "divisors": list(self.divisors),
            "divisor_sum": self.divisor_sum, "lambda": self.lam,
            "primitive_density": str(self.primitive_density),
            "normal_density": str(self.normal_density),
            "main_term": str(self.main_term),
            "error_term": str(self.error_term),
            "error_bound_sq": str(self.error_bound_sq),
            "main_lower_bound": str(self.main_lower_bound),
            "count": str(self.count),
        }


def char_sum_audit(ctx: FieldContext, profile: TraceProfile,
                   n_exact: int) -> CharSumBreakdown:
    """Split the prescribed-trace primitive normal count N into main
    term S1 = q^m/(Phi(g) * theta) and error term S2 with
    N = theta * Theta * q^(-D) * (S1 + S2), S2 recovered from the exact
    census count rather than the quadruple character sum.  Checks
    S1 > q^(m - lambda) and S2^2 <= q^(m + 2D) * W(q^m-1)^2 * W(x^m-1)^2
    and raises AuditError when either fails."""
    if math.gcd(ctx.m, ctx.p) != 1:
        raise ValidationError(
            "the decomposition needs m coprime to the characteristic")
    n_exact = int(n_exact)
    if n_exact < 0:
        raise ValidationError("census count cannot be negative")
    if not check_admissible(ctx, profile):
        raise ValidationError("profile is not admissible")
    for d, enc in profile.pairs():
        if additive_order(ctx, enc, d) != pq.x_power_minus_one(ctx, d):
            raise ValidationError(
                f"target {enc} is not normal in F_(q^{d})")
    lam = lcm_degree_checked(ctx, profile.divisors)
    D = sum(profile.divisors)
    g = trace_lcm_poly(ctx, profile.divisors)
    phi_g = pq.phi(ctx, g)
    theta = primitive_density(ctx)
    Theta = normal_density(ctx)
    s1 = Fraction(ctx.order) / (phi_g * theta)
    phi_total = pq.phi(ctx, pq.xm1_factorization(ctx))
    if s1 != Fraction(phi_total) / (phi_g * theta * Theta):
        raise ConsistencyError("the two main-term forms disagree")
    s2 = Fraction(ctx.q**D * n_exact) / (theta * Theta) - s1
    lower = ctx.q ** (ctx.m - lam)
    w_int_sq = 4 ** len(ctx.group_factors)
    w_poly_sq = pq.squarefree_divisor_count(
        ctx, pq.xm1_factorization(ctx)) ** 2
    bound_sq = ctx.q ** (ctx.m + 2 * D) * w_int_sq * w_poly_sq
    if not s1 > lower:
        raise AuditError(
            f"main term {s1} is not above the q^(m-lambda) = {lower} floor")
    if s2 * s2 > bound_sq:
        raise AuditError(
            f"error term {s2} exceeds the square-root cancellation bound")
    return CharSumBreakdown(
        q=ctx.q, m=ctx.m, divisors=profile.divisors, divisor_sum=D,
        lam=lam, primitive_density=theta, normal_density=Theta,
        main_term=s1, error_term=s2, error_bound_sq=bound_sq,
        main_lower_bound=lower, count=n_exact)


def oracle_report(ctx: FieldContext, b) -> dict:
    """Indicator values against the direct predicates, JSON-shaped."""
    b = ctx.element(b)
    enc = ctx.encode(b)
    rho = complex(primitive_char_sum_table(ctx)[enc])
    kappa = complex(normal_char_sum_table(ctx)[enc])
    direct_p = ctx.is_primitive(b)
    direct_n = is_normal(ctx, b)
    err = max(abs(rho - (1 if direct_p else 0)),
              abs(kappa - (1 if direct_n else 0)))
    return {
        "element": enc,
        "rho": [rho.real, rho.imag],
        "kappa": [kappa.real, kappa.imag],
        "direct_primitive": direct_p,
        "direct_normal": direct_n,
        "max_error": err,
    }
