"""Finite field towers F_p < F_q < F_{q^m} with q = p^e.

The big field F_{q^m} = F_{p^n}, n = e*m, is realized as F_p[x]/(f) for a
canonical monic irreducible f of degree n: among all monic irreducibles,
the one whose non-leading coefficient vector, read as a base-p integer
with the constant term least significant, is smallest.  Elements are
coefficient vectors over F_p with respect to the power basis of f, and
the same base-p reading gives the integer encoding, a bijection onto
[0, p^n).  Subfields are cut out inside the big field as fixed points of
the appropriate Frobenius power; they are never represented separately.

Everything downstream takes a FieldContext as its first argument.  A
context is immutable in the observable sense: all lazily built tables are
pure functions of the field spec, so sharing one across threads or
rebuilding it in a worker process yields identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetError, ConsistencyError, ValidationError
from .intfactor import DEFAULT_RHO_BUDGET, factorize, is_prime

DEFAULT_DLOG_CAP = 1 << 22
SUBFIELD_ENUM_CAP = 1 << 20


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p on plain int lists, constant term first

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim([c % p for c in out])


def _fp_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [], _trim(a)
    quot = [0] * (da - db + 1)
    for shift in range(da - db, -1, -1):
        c = a[shift + db] % p
        if c:
            c = c * inv_lead % p
            quot[shift] = c
            for i, cb in enumerate(b):
                a[shift + i] = (a[shift + i] - c * cb) % p
    return _trim(quot), _trim(a)


def _fp_mulmod(a, b, f, p):
    return _fp_divmod(_fp_mul(a, b, p), f, p)[1]


def _fp_powmod(a, k, f, p):
    out = [1]
    a = _fp_divmod(a, f, p)[1]
    while k:
        if k & 1:
            out = _fp_mulmod(out, a, f, p)
        a = _fp_mulmod(a, a, f, p)
        k >>= 1
    return out


def _fp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _fp_is_irreducible(f, p) -> bool:
    """Rabin's criterion for a monic f over F_p."""
    n = len(f) - 1
    if n < 1:
        return False
    x = _fp_divmod([0, 1], f, p)[1]
    # x^(p^n) == x (mod f)
    r = x
    for _ in range(n):
        r = _fp_powmod(r, p, f, p)
    if _trim(_fp_sub(r, x, p)):
        return False
    for ell in {q for q, _ in factorize(n)}:
        r = x
        for _ in range(n // ell):
            r = _fp_powmod(r, p, f, p)
        if len(_fp_gcd(_fp_sub(r, x, p), f, p)) != 1:
            return False
    return True


def _canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n over F_p with minimal encoding of its
    non-leading coefficient vector."""
    for c in range(p**n):
        coeffs = _digits(c, p, n) + [1]
        if _fp_is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ConsistencyError(f"no irreducible of degree {n} over F_{p}")


def _digits(k: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(k % p)
        k //= p
    return out


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """Defining data of the tower: characteristic p, base degree e over F_p,
    and extension degree m of the top field over F_q = F_{p^e}.

    modulus, if given, must be the coefficient tuple (constant first,
    length e*m + 1, leading 1) of a monic irreducible over F_p; when
    omitted the canonical modulus is computed.
    """
    p: int
    e: int
    m: int
    modulus: Optional[tuple[int, ...]] = None

    def validate(self) -> None:
        if not is_prime(self.p):
            raise ValidationError(f"p={self.p} is not prime")
        if self.e < 1 or self.m < 1:
            raise ValidationError("e and m must be positive")
        if self.modulus is not None:
            n = self.e * self.m
            mod = self.modulus
            if len(mod) != n + 1 or mod[-1] != 1:
                raise ValidationError(
                    f"modulus must be monic of degree {n}")
            if any(not (0 <= c < self.p) for c in mod):
                raise ValidationError("modulus coefficients out of range")
            if not _fp_is_irreducible(list(mod), self.p):
                raise ValidationError("supplied modulus is reducible")


class FieldElement:
    """An element of the big field: coefficient vector over F_p in the
    power basis, constant term first, fixed length e*m."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        self.coeffs = tuple(coeffs)

    def __eq__(self, other):
        return isinstance(other, FieldElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"


class FieldContext:
    """All precomputed data for one field tower.  Build via build_context."""

    def __init__(self, spec: FieldSpec, dlog_cap: int, factor_budget: int):
        spec.validate()
        self.spec = spec
        self.p, self.e, self.m = spec.p, spec.e, spec.m
        self.n = spec.e * spec.m
        self.q = spec.p**spec.e
        self.order = spec.p**self.n
        self.group_order = self.order - 1
        self.dlog_cap = dlog_cap
        if spec.modulus is not None:
            self.modulus = tuple(spec.modulus)
        else:
            self.modulus = _canonical_modulus(self.p, self.n)
        try:
            self.group_factors = factorize(self.group_order, factor_budget)
        except BudgetError as exc:
            raise BudgetError(
                f"group order {self.group_order} did not factor within "
                f"budget {factor_budget}: {exc}") from exc
        self._pvec = tuple(self.p**i for i in range(self.n))
        # rows r of _red give x^(n+r) mod modulus; they drive reduction in mul
        self._red = self._reduction_rows()
        self.zero = FieldElement((0,) * self.n)
        one = [0] * self.n
        one[0] = 1 % self.p
        self.one = FieldElement(one)
        self._cache: dict = {}
        self.generator = self._find_generator()

    def _reduction_rows(self) -> tuple[tuple[int, ...], ...]:
        """Row r holds the coefficients of x^(n+r) mod modulus."""
        p, n = self.p, self.n
        rows = []
        cur = [(-c) % p for c in self.modulus[:n]]  # x^n mod f
        rows.append(tuple(cur))
        for _ in range(n - 2):
            cur = [0] + cur  # multiply by x
            lead = cur.pop()
            if lead:
                top = rows[0]
                cur = [(c + lead * t) % p for c, t in zip(cur, top)]
            rows.append(tuple(cur))
        return tuple(rows)

    # -- encoding -----------------------------------------------------------

    def encode(self, a: FieldElement) -> int:
        return sum(c * w for c, w in zip(a.coeffs, self._pvec))

    def decode(self, k: int) -> FieldElement:
        if not (0 <= k < self.order):
            raise ValidationError(
                f"encoding {k} outside [0, {self.order})")
        return FieldElement(_digits(k, self.p, self.n))

    def element(self, value) -> FieldElement:
        """Coerce an int encoding or coefficient sequence to an element."""
        if isinstance(value, FieldElement):
            if len(value.coeffs) != self.n:
                raise ValidationError("element has wrong coefficient length")
            return value
        if isinstance(value, int):
            return self.decode(value)
        coeffs = list(value)
        if len(coeffs) > self.n:
            raise ValidationError("too many coefficients")
        coeffs += [0] * (self.n - len(coeffs))
        if any(not (0 <= c < self.p) for c in coeffs):
            raise ValidationError("coefficients out of range")
        return FieldElement(coeffs)

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        p = self.p
        return FieldElement([(x + y) % p for x, y in zip(a.coeffs, b.coeffs)])

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        p = self.p
        return FieldElement([(x - y) % p for x, y in zip(a.coeffs, b.coeffs)])

    def neg(self, a: FieldElement) -> FieldElement:
        p = self.p
        return FieldElement([(-x) % p for x in a.coeffs])

    def scalar_mul(self, c: int, a: FieldElement) -> FieldElement:
        p = self.p
        return FieldElement([c * x % p for x in a.coeffs])

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        p, n = self.p, self.n
        prod = [0] * (2 * n - 1)
        for i, ca in enumerate(a.coeffs):
            if ca:
                for j, cb in enumerate(b.coeffs):
                    prod[i + j] += ca * cb
        out = [c % p for c in prod[:n]]
        red = self._red
        for r in range(n - 1):
            c = prod[n + r] % p
            if c:
                row = red[r]
                for i in range(n):
                    out[i] = (out[i] + c * row[i]) % p
        return FieldElement(out)

    def inv(self, a: FieldElement) -> FieldElement:
        acoeffs = _trim(list(a.coeffs))
        if not acoeffs:
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        f = list(self.modulus)
        # extended Euclid in F_p[x]
        r0, r1 = f, acoeffs
        s0, s1 = [], [1]
        while r1:
            q, r = _fp_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _fp_sub(s0, _fp_mul(q, s1, p), p)
        lead_inv = pow(r0[-1], p - 2, p)
        out = [c * lead_inv % p for c in s0]
        out += [0] * (self.n - len(out))
        return FieldElement(out[: self.n])

    def pow(self, a: FieldElement, k: int) -> FieldElement:
        if a == self.zero:
            if k == 0:
                return self.one
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return self.zero
        N = self.group_order
        k %= N if N else 1
        out = self.one
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def is_zero(self, a: FieldElement) -> bool:
        return all(c == 0 for c in a.coeffs)

    # -- frobenius, subfields ----------------------------------------------

    def frob_p_matrix(self) -> np.ndarray:
        """n x n matrix over F_p of the absolute Frobenius x -> x^p."""
        key = "frob_p"
        if key not in self._cache:
            cols = []
            for j in range(self.n):
                xj = [0] * j + [1]
                img = _fp_powmod(xj, self.p, list(self.modulus), self.p)
                img += [0] * (self.n - len(img))
                cols.append(img[: self.n])
            self._cache[key] = np.array(cols, dtype=np.int64).T % self.p
        return self._cache[key]

    def frob_q_power_matrix(self, d: int) -> np.ndarray:
        """Matrix of x -> x^(q^d)."""
        key = ("frob_q", d)
        if key not in self._cache:
            self._cache[key] = _mat_pow(
                self.frob_p_matrix(), self.e * d, self.p)
        return self._cache[key]

    def apply_matrix(self, mat: np.ndarray, a: FieldElement) -> FieldElement:
        v = np.array(a.coeffs, dtype=np.int64)
        return FieldElement([int(c) for c in (mat @ v) % self.p])

    def frobenius(self, a: FieldElement, d: int = 1) -> FieldElement:
        """a^(q^d), computed through the cached linear map."""
        return self.apply_matrix(self.frob_q_power_matrix(d % self.m), a)

    def in_subfield(self, a: FieldElement, d: int) -> bool:
        """Membership in F_{q^d} for d dividing m."""
        if self.m % d:
            raise ValidationError(f"{d} does not divide m={self.m}")
        return self.frobenius(a, d) == a

    def subfield_encodings(self, d: int) -> np.ndarray:
        """Sorted int64 encodings of all q^d elements of F_{q^d}."""
        if self.m % d:
            raise ValidationError(f"{d} does not divide m={self.m}")
        key = ("subfield", d)
        if key not in self._cache:
            dim = self.e * d
            if self.p**dim > SUBFIELD_ENUM_CAP:
                raise BudgetError(
                    f"subfield of {self.p}^{dim} elements is too large "
                    "to enumerate")
            if self.order >= 2**62:
                raise BudgetError("field too large for int64 encodings")
            mat = (self.frob_q_power_matrix(d)
                   - np.eye(self.n, dtype=np.int64)) % self.p
            basis = _nullspace_basis(mat, self.p)
            if len(basis) != dim:
                raise ConsistencyError("subfield dimension mismatch")
            encs = _span_encodings(basis, self.p, self._pvec)
            self._cache[key] = np.sort(encs)
        return self._cache[key]

    def trace_matrix(self, d: int) -> np.ndarray:
        """Matrix over F_p of the trace from F_{q^m} onto F_{q^d}."""
        if self.m % d:
            raise ValidationError(f"{d} does not divide m={self.m}")
        key = ("trmat", d)
        if key not in self._cache:
            F = self.frob_q_power_matrix(d)
            acc = np.eye(self.n, dtype=np.int64)
            out = np.zeros((self.n, self.n), dtype=np.int64)
            for _ in range(self.m // d):
                out = (out + acc) % self.p
                acc = (F @ acc) % self.p
            self._cache[key] = out
        return self._cache[key]

    def abs_trace_vector(self) -> np.ndarray:
        """Length-n vector v with absolute trace Tr(a) = v . coeffs mod p."""
        key = "abs_trace"
        if key not in self._cache:
            Fp = self.frob_p_matrix()
            acc = np.eye(self.n, dtype=np.int64)
            out = np.zeros((self.n, self.n), dtype=np.int64)
            for _ in range(self.n):
                out = (out + acc) % self.p
                acc = (Fp @ acc) % self.p
            if np.any(out[1:]):
                raise ConsistencyError("absolute trace is not F_p valued")
            self._cache[key] = out[0].copy()
        return self._cache[key]

    # -- multiplicative structure ------------------------------------------

    def _find_generator(self) -> FieldElement:
        """Nonzero element of minimal encoding generating the unit group."""
        N = self.group_order
        for k in range(1, self.order):
            cand = self.decode(k)
            if all(self.pow(cand, N // r) != self.one
                   for r, _ in self.group_factors):
                return cand
        raise ConsistencyError("no generator found")

    def multiplicative_order(self, a: FieldElement) -> int:
        if self.is_zero(a):
            raise ValidationError("zero has no multiplicative order")
        order = self.group_order
        for r, mult in self.group_factors:
            for _ in range(mult):
                if order % r == 0 and self.pow(a, order // r) == self.one:
                    order //= r
                else:
                    break
        return order

    def is_primitive(self, a: FieldElement) -> bool:
        if self.is_zero(a):
            return False
        N = self.group_order
        return all(self.pow(a, N // r) != self.one
                   for r, _ in self.group_factors)

    def mul_matrix(self, a: FieldElement) -> np.ndarray:
        """n x n matrix over F_p of multiplication by a."""
        cols = []
        for j in range(self.n):
            vec = [0] * self.n
            vec[j] = 1
            img = self.mul(a, FieldElement(vec))
            cols.append(img.coeffs)
        return np.array(cols, dtype=np.int64).T

    def orbit_encodings(self) -> np.ndarray:
        """exp table: int64 array T with T[t] = encoding of generator^t,
        t in [0, group order).  Only for fields within the dlog cap."""
        if self.order > self.dlog_cap:
            raise BudgetError(
                f"field size {self.order} exceeds dlog table cap "
                f"{self.dlog_cap}")
        key = "orbit"
        if key not in self._cache:
            self._cache[key] = self._walk_orbit()
        return self._cache[key]

    def _walk_orbit(self) -> np.ndarray:
        N = self.group_order
        p, n = self.p, self.n
        K = min(4096, N)
        M = self.mul_matrix(self.generator).astype(np.float64)
        S = np.empty((n, K), dtype=np.float64)
        v = np.array(self.one.coeffs, dtype=np.float64)
        for j in range(K):
            S[:, j] = v
            v = (M @ v) % p
        MK = _mat_pow(self.mul_matrix(self.generator), K, p).astype(np.float64)
        pvec = np.array(self._pvec, dtype=np.int64)
        out = np.empty(N, dtype=np.int64)
        t = 0
        while t < N:
            take = min(K, N - t)
            enc = (S[:, :take].astype(np.int64).T @ pvec)
            out[t:t + take] = enc
            t += take
            if t < N:
                S = (MK @ S) % p
        return out

    def dlog_table(self) -> np.ndarray:
        """dlog[encoding] = t with generator^t = element; -1 at zero."""
        key = "dlog"
        if key not in self._cache:
            orbit = self.orbit_encodings()
            table = np.full(self.order, -1, dtype=np.int64)
            table[orbit] = np.arange(self.group_order, dtype=np.int64)
            self._cache[key] = table
        return self._cache[key]

    def discrete_log(self, a: FieldElement) -> int:
        if self.is_zero(a):
            raise ValidationError("discrete log of zero is undefined")
        t = int(self.dlog_table()[self.encode(a)])
        if t < 0:
            raise ConsistencyError("dlog table is incomplete")
        return t

    def __repr__(self):
        return (f"FieldContext(p={self.p}, e={self.e}, m={self.m}, "
                f"modulus={list(self.modulus)})")


# ---------------------------------------------------------------------------
# linear algebra over F_p on numpy int matrices

def _mat_pow(mat: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.eye(mat.shape[0], dtype=np.int64)
    base = mat % p
    while k:
        if k & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        k >>= 1
    return out


def _nullspace_basis(mat: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right nullspace of mat over F_p (row reduction)."""
    a = mat.copy() % p
    rows, cols = a.shape
    pivot_col: list[int] = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if a[rr, c]:
                piv = rr
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        for rr in range(rows):
            if rr != r and a[rr, c]:
                a[rr] = (a[rr] - a[rr, c] * a[r]) % p
        pivot_col.append(c)
        r += 1
        if r == rows:
            break
    free_cols = [c for c in range(cols) if c not in pivot_col]
    basis = []
    for fc in free_cols:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivot_col):
            v[pc] = (-a[i, fc]) % p
        basis.append(v)
    return basis


def _span_encodings(basis: list[np.ndarray], p: int, pvec) -> np.ndarray:
    """Integer encodings of every F_p-combination of the basis vectors."""
    dim = len(basis)
    count = p**dim
    pv = np.array(pvec, dtype=np.int64)
    if dim == 0:
        return np.zeros(1, dtype=np.int64)
    B = np.array(basis, dtype=np.int64)
    ks = np.arange(count, dtype=np.int64)
    digs = np.empty((count, dim), dtype=np.int64)
    for i in range(dim):
        digs[:, i] = ks % p
        ks //= p
    coords = (digs @ B) % p
    return coords @ pv


# ---------------------------------------------------------------------------
# module-level operation surface

def build_context(spec: FieldSpec | tuple, *, dlog_cap: int = DEFAULT_DLOG_CAP,
                  factor_budget: int = DEFAULT_RHO_BUDGET) -> FieldContext:
    """Validate the spec and assemble the context (canonical modulus,
    factored unit group order, canonical generator).  Deterministic: equal
    specs give equal contexts."""
    if not isinstance(spec, FieldSpec):
        spec = FieldSpec(*spec)
    return FieldContext(spec, dlog_cap=dlog_cap, factor_budget=factor_budget)


def element_arithmetic(ctx: FieldContext, op: str, *operands):
    """Dispatch basic arithmetic by name: add, sub, mul, inv, neg, pow."""
    table = {"add": ctx.add, "sub": ctx.sub, "mul": ctx.mul,
             "inv": ctx.inv, "neg": ctx.neg, "pow": ctx.pow}
    if op not in table:
        raise ValidationError(f"unknown operation {op!r}")
    return table[op](*operands)


def frobenius_and_membership(ctx: FieldContext, a: FieldElement, d: int):
    """Return (a^(q^d), a in F_{q^d}).  d must divide m."""
    if d < 1 or ctx.m % d:
        raise ValidationError(f"{d} does not divide m={ctx.m}")
    img = ctx.apply_matrix(ctx.frob_q_power_matrix(d), a)
    return img, img == a


def multiplicative_order_and_primitivity(ctx: FieldContext, a: FieldElement):
    order = ctx.multiplicative_order(a)
    return order, order == ctx.group_order


def discrete_log(ctx: FieldContext, a: FieldElement) -> int:
    return ctx.discrete_log(a)
