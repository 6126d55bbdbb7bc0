import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tepir.field import (DivisionByZero, FieldElement, NonPrimeModulus, PrimeField,
                         field_new, is_prime, next_prime)


def test_field_new_accepts_primes():
    assert field_new(2).q == 2
    assert field_new(11).q == 11
    assert field_new(101).q == 101


def test_field_new_rejects_composites_and_small():
    with pytest.raises(NonPrimeModulus):
        field_new(10)
    with pytest.raises(NonPrimeModulus):
        field_new(1)
    with pytest.raises(NonPrimeModulus):
        field_new((1 << 31) + 11)


def test_next_prime():
    assert next_prime(10) == 11
    assert next_prime(28) == 29
    assert next_prime(17) == 17


def test_is_prime_small_values():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}
    for n in range(32):
        assert is_prime(n) == (n in primes)


def test_inv_examples():
    f11 = PrimeField(11)
    assert f11.inv(3) == 4
    assert f11.inv(1) == 1
    assert PrimeField(29).inv(2) == 15


def test_inv_zero_raises():
    with pytest.raises(DivisionByZero):
        PrimeField(11).inv(0)


def test_pow_examples():
    f = PrimeField(11)
    assert f.pow(2, 10) == 1
    assert f.pow(0, 0) == 1
    assert f.pow(3, 3) == 5


def test_element_operators():
    f = PrimeField(11)
    a, b = f.element(7), f.element(9)
    assert int(a + b) == 5
    assert int(a - b) == 9
    assert int(a * b) == 8
    assert int(-a) == 4
    assert int(a ** 3) == 2
    assert a * a.inverse() == 1
    assert int(a / b) == int(a * b.inverse())


_PRIMES = st.sampled_from([3, 5, 11, 29, 101, 7919])


@given(_PRIMES, st.integers(0, 10**9), st.integers(0, 10**9))
@settings(max_examples=200)
def test_add_sub_roundtrip(q, a, b):
    f = PrimeField(q)
    assert f.sub(f.add(a, b), b) == a % q


@given(_PRIMES, st.integers(0, 10**9), st.integers(0, 10**9), st.integers(0, 10**9))
@settings(max_examples=200)
def test_distributivity(q, a, b, c):
    f = PrimeField(q)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@given(_PRIMES, st.integers(1, 10**9))
@settings(max_examples=200)
def test_fermat(q, a):
    f = PrimeField(q)
    if a % q:
        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, q - 1) == 1


def test_array_helpers_match_scalars():
    f = PrimeField(29)
    rng = np.random.default_rng(0)
    vals = f.random_array(rng, 50) + 1
    vals %= 29
    vals[vals == 0] = 1
    inv = f.inv_array(vals)
    assert np.all(vals * inv % 29 == 1)
    assert np.array_equal(f.pow_array(vals, 28), np.ones_like(vals))


def test_matmul_blocked_reduction():
    # A modulus near the 2**31 limit forces chunked accumulation.
    q = next_prime((1 << 31) - 100)
    f = PrimeField(q)
    rng = np.random.default_rng(1)
    a = f.random_array(rng, (4, 7))
    b = f.random_array(rng, (7, 3))
    expect = np.array([[sum(int(a[i, t]) * int(b[t, j]) for t in range(7)) % q
                        for j in range(3)] for i in range(4)])
    assert np.array_equal(f.matmul(a, b), expect)
