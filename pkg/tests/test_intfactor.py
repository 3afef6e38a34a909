import pytest

from normtrace.errors import BudgetError, ValidationError
from normtrace.intfactor import (divisors, euler_phi, factorize, is_prime,
                                 mobius, omega, prime_power_split,
                                 squarefree_part)


def test_is_prime_small():
    primes = [2, 3, 5, 7, 11, 13, 127, 151, 601, 32749]
    composites = [1, 4, 9, 561, 1105, 32767, 2047]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in composites)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**67 - 1)  # 193707721 * 761838257287


@pytest.mark.parametrize("n,expect", [
    (32767, ((7, 1), (31, 1), (151, 1))),
    (2**15, ((2, 15),)),
    (5**12 - 1, ((2, 4), (3, 2), (7, 1), (13, 1), (31, 1), (601, 1))),
    (3**15 - 1, ((2, 1), (11, 2), (13, 1), (4561, 1))),
    (1, ()),
    (360, ((2, 3), (3, 2), (5, 1))),
])
def test_factorize(n, expect):
    assert factorize(n) == expect


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValidationError):
        factorize(0)


def test_factorize_budget():
    # 2^101-1 has only large factors; a tiny budget cannot split it
    with pytest.raises(BudgetError):
        factorize(2**101 - 1, budget=10)


def test_euler_phi():
    assert euler_phi(32767) == 27000
    assert euler_phi(1) == 1
    assert euler_phi(2**15 - 1) == 27000
    assert euler_phi(80) == 32
    # 2^4 * 3^2 * 7 * 13 * 31 * 601: 8*6 * 6 * 12 * 30 * 600
    assert euler_phi(5**12 - 1) == 62208000


def test_omega_mobius_squarefree():
    assert omega(32767) == 3
    assert mobius(32767) == -1
    assert mobius(360) == 0
    assert mobius(105) == -1
    assert mobius(1) == 1
    assert mobius(6) == 1
    assert squarefree_part(360) == 30
    assert squarefree_part(32767) == 32767


def test_divisors():
    ds = divisors(360)
    assert len(ds) == 24
    assert ds == sorted(ds)
    assert ds[0] == 1 and ds[-1] == 360
    assert divisors(1) == [1]


def test_prime_power_split():
    assert prime_power_split(8) == (2, 3)
    assert prime_power_split(81) == (3, 4)
    assert prime_power_split(7) == (7, 1)
    with pytest.raises(ValidationError):
        prime_power_split(12)
