import pytest
import sympy
from hypothesis import given, strategies as st

from hcpadic.numtheory import (
    factorize,
    is_prime,
    legendre,
    pollard_rho,
    prime_divisors,
    primes_up_to,
    sqrt_mod_prime,
)


def test_small_sieve():
    assert primes_up_to(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert primes_up_to(1) == ()


@given(st.integers(0, 10**12))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("n", [2**61 - 1, 2**31 - 1, 3_215_031_751, 3_825_123_056_546_413_051])
def test_is_prime_hard_cases(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(1, 10**15))
def test_factorize_matches_sympy(n):
    assert factorize(n) == dict(sorted(sympy.factorint(n).items()))


@pytest.mark.parametrize("k", range(1, 65))
def test_mersenne_factors(k):
    n = 2**k - 1
    assert prime_divisors(n) == sorted(sympy.factorint(n)) if n > 1 else prime_divisors(n) == []


def test_beyond_deterministic_range_refused():
    with pytest.raises(ValueError):
        is_prime(2**89 - 1)


def test_rho_splits_semiprime():
    n = 1_000_003 * 1_000_033
    f = pollard_rho(n)
    assert f in (1_000_003, 1_000_033)


@given(st.sampled_from([3, 5, 7, 11, 13, 17, 97, 101, 65537]), st.integers(0, 10**6))
def test_legendre_and_tonelli(p, a):
    residues = {x * x % p for x in range(p)}
    assert (legendre(a, p) != -1) == (a % p in residues)
    if a % p in residues:
        r = sqrt_mod_prime(a, p)
        assert r * r % p == a % p
