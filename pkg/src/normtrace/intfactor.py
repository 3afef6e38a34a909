"""Integer factorization and multiplicative functions.

Factorizations are tuples of (prime, multiplicity) pairs sorted by prime.
Trial division up to a fixed bound handles the small primes; Brent's
variant of Pollard rho, with a configurable iteration budget, splits the
remaining cofactors.  The sizes that occur in practice (p**n - 1 for
fields of at most around 2**64 elements) are well within its reach.
"""

from __future__ import annotations

import math

from .errors import BudgetError, ValidationError

TRIAL_LIMIT = 10**6
DEFAULT_RHO_BUDGET = 2_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic below 3.3 * 10**24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho_brent(n: int, budget: int) -> int:
    """Return a nontrivial factor of composite odd n, or raise BudgetError.

    Brent's cycle-finding variant with deterministic parameters: the
    polynomial offset c walks 1, 2, 3, ... so repeated calls on the same
    n always take the same path.
    """
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 100):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                spent += min(128, r - k)
                if spent > budget:
                    raise BudgetError(
                        f"factorization of {n} exceeded rho budget {budget}")
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                spent += 1
                if spent > budget:
                    raise BudgetError(
                        f"factorization of {n} exceeded rho budget {budget}")
        if g != n:
            return g
    raise BudgetError(f"rho failed to split {n} within parameter range")


def factorize(n: int, budget: int = DEFAULT_RHO_BUDGET) -> tuple[tuple[int, int], ...]:
    """Full prime factorization of n >= 1 as ((prime, multiplicity), ...)."""
    if n < 1:
        raise ValidationError(f"cannot factor {n}: need a positive integer")
    if n == 1:
        return ()
    found: dict[int, int] = {}
    limit = min(TRIAL_LIMIT, math.isqrt(n) + 1)
    d = 2
    while d <= limit and d * d <= n:
        while n % d == 0:
            found[d] = found.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        g = _rho_brent(m, budget)
        stack.append(g)
        stack.append(m // g)
    return tuple(sorted(found.items()))


def factors_product(factors) -> int:
    out = 1
    for p, a in factors:
        out *= p**a
    return out


def euler_phi(n: int, factors=None) -> int:
    """Euler totient of n, reusing a known factorization if given."""
    if factors is None:
        factors = factorize(n)
    out = n
    for p, _ in factors:
        out = out // p * (p - 1)
    return out


def omega(n: int, factors=None) -> int:
    """Number of distinct prime divisors."""
    if factors is None:
        factors = factorize(n)
    return len(factors)


def mobius(n: int, factors=None) -> int:
    if factors is None:
        factors = factorize(n)
    for _, a in factors:
        if a > 1:
            return 0
    return -1 if len(factors) % 2 else 1


def squarefree_part(n: int, factors=None) -> int:
    """Largest squarefree divisor (the radical) of n."""
    if factors is None:
        factors = factorize(n)
    out = 1
    for p, _ in factors:
        out *= p
    return out


def divisors(n: int, factors=None) -> list[int]:
    """All positive divisors of n in increasing order."""
    if factors is None:
        factors = factorize(n)
    out = [1]
    for p, a in factors:
        out = [d * p**i for d in out for i in range(a + 1)]
    return sorted(out)


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n."""
    if n < 2 or k == 1:
        return n
    x = int(round(n ** (1.0 / k)))
    while x > 1 and x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def prime_power_split(q: int) -> tuple[int, int]:
    """Write a prime power q as (p, e) with q = p**e, or raise."""
    if q < 2:
        raise ValidationError(f"{q} is not a prime power")
    if is_prime(q):
        return q, 1
    for e in range(q.bit_length(), 1, -1):
        p = _iroot(q, e)
        if p**e == q and is_prime(p):
            return p, e
    raise ValidationError(f"{q} is not a prime power")
