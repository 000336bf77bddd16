import math
import random
from fractions import Fraction

import pytest

from fieldsimp.arith import (NonCoprimeModuli, PrimeField, ZeroInverse,
                             crt_pair, inv, is_probable_prime, prev_prime,
                             production_prime, rational_reconstruct)


def test_crt_example():
    assert crt_pair(1, 2, 2, 3) == (5, 6)


def test_crt_zero():
    m1, m2 = 97, 101
    assert crt_pair(0, m1, 0, m2) == (0, m1 * m2)


def test_crt_noncoprime():
    with pytest.raises(NonCoprimeModuli):
        crt_pair(1, 4, 1, 6)


def test_crt_random_congruences():
    rng = random.Random(7)
    m1, m2 = production_prime(0), production_prime(1)
    for _ in range(100):
        a = rng.randrange(m1 * m2)
        r, m = crt_pair(a % m1, m1, a % m2, m2)
        assert m == m1 * m2 and r == a


def test_production_primes_descending_below_2_62():
    ps = [production_prime(i) for i in range(6)]
    assert all(is_probable_prime(p) for p in ps)
    assert all(p < 2 ** 62 for p in ps)
    assert all(a > b for a, b in zip(ps, ps[1:]))
    assert ps[0] == prev_prime(2 ** 62)


def test_prev_prime_small():
    assert prev_prime(10) == 7
    assert prev_prime(8) == 7
    assert prev_prime(3) == 2


@pytest.mark.parametrize("p", [101, production_prime(0)])
def test_inverse_roundtrip(p):
    rng = random.Random(p)
    for _ in range(10 ** 4):
        a = rng.randrange(1, p)
        assert a * inv(a, p) % p == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroInverse):
        inv(0, 101)


def test_prime_field_ops():
    f = PrimeField(101)
    assert f.add(100, 2) == 1
    assert f.sub(0, 1) == 100
    assert f.mul(10, 21) == 10 * 21 % 101
    assert f.div(1, 2) == 51
    assert f.neg(1) == 100
    assert f.from_fraction(Fraction(1, 3)) * 3 % 101 == 1
    with pytest.raises(ValueError):
        PrimeField(100)


def test_rational_reconstruct_roundtrip():
    p = production_prime(0)
    bound = math.isqrt(p // 2)
    rng = random.Random(3)
    for _ in range(200):
        a = rng.randrange(-bound + 1, bound)
        b = rng.randrange(1, bound)
        f = Fraction(a, b)
        r = f.numerator * inv(f.denominator, p) % p
        assert rational_reconstruct(r, p) == f


def test_rational_reconstruct_zero():
    assert rational_reconstruct(0, 101) == Fraction(0)


def test_crt_then_reconstruct_two_primes():
    # a fraction too large for one prime but fine for the product
    m1, m2 = production_prime(0), production_prime(1)
    f = Fraction(2 ** 40 + 1, 2 ** 40 - 3)
    r1 = f.numerator * inv(f.denominator, m1) % m1
    r2 = f.numerator * inv(f.denominator, m2) % m2
    single = rational_reconstruct(r1, m1)
    assert single is None or single != f
    r, m = crt_pair(r1, m1, r2, m2)
    assert rational_reconstruct(r, m) == f
