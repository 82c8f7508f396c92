import math
from fractions import Fraction

import numpy as np
import pytest
from sympy import nextprime

from minimal_models import number_theory
from minimal_models.exceptions import DomainError, UnfactoredCofactorError
from minimal_models.number_theory import Prime, content_and_primitive, factor, ord_p, prime_divisors


def _random_rational(rng, bound=200):
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def test_ord_p_examples():
    assert ord_p(12, 2) == 2
    assert ord_p(Fraction(1, 9), 3) == -2
    assert ord_p(0, 5) == math.inf
    assert ord_p("-50/3", 5) == 2


def test_ord_p_is_a_valuation():
    rng = np.random.default_rng(1)
    for _ in range(200):
        x, y = _random_rational(rng), _random_rational(rng)
        for p in (2, 3, 5):
            assert ord_p(x * y, p) == ord_p(x, p) + ord_p(y, p)
            assert ord_p(x + y, p) >= min(ord_p(x, p), ord_p(y, p))
            if ord_p(x, p) != ord_p(y, p):
                assert ord_p(x + y, p) == min(ord_p(x, p), ord_p(y, p))


def test_prime_is_checked():
    assert Prime(7) == 7
    with pytest.raises(DomainError):
        Prime(9)
    with pytest.raises(DomainError):
        Prime(1)


def test_factor_examples():
    assert factor(360) == {2: 3, 3: 2, 5: 1}
    assert factor(1) == {}
    assert factor(-97) == {97: 1}
    assert all(isinstance(p, Prime) for p in factor(360))
    with pytest.raises(DomainError):
        factor(0)


def test_factor_splits_cofactors_beyond_trial_division():
    p = nextprime(10**7)
    q = nextprime(p)
    assert factor(p * q * 8) == {2: 3, p: 1, q: 1}
    assert factor(p ** 3) == {p: 3}


def test_factor_budget_exhaustion_reports_cofactor(monkeypatch):
    p = nextprime(10**7)
    q = nextprime(p)
    monkeypatch.setattr(number_theory, "RHO_RETRIES", 0)
    monkeypatch.setattr(number_theory, "factorint", lambda n, limit: {2: 1, 3: 1, p * q: 1})
    with pytest.raises(UnfactoredCofactorError) as info:
        factor(6 * p * q)
    assert info.value.cofactor == p * q


def test_rational_reconstructs_from_valuations():
    rng = np.random.default_rng(2)
    for _ in range(100):
        x = _random_rational(rng)
        if x == 0:
            continue
        primes = prime_divisors([x.numerator, x.denominator])
        value = Fraction(1)
        for p in primes:
            value *= Fraction(p) ** ord_p(x, p)
        assert (1 if x > 0 else -1) * value == x


def test_content_and_primitive_examples():
    assert content_and_primitive([Fraction(4, 3), 2, Fraction(2, 3)]) == (Fraction(2, 3), [2, 3, 1])
    assert content_and_primitive([1, 1]) == (1, [1, 1])
    assert content_and_primitive([-2, -4]) == (-2, [1, 2])
    assert content_and_primitive([0, -3, 6]) == (-3, [0, 1, -2])
    with pytest.raises(DomainError):
        content_and_primitive([0, 0])


def test_content_and_primitive_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(100):
        coeffs = [_random_rational(rng) for _ in range(5)]
        if not any(coeffs):
            continue
        content, primitive = content_and_primitive(coeffs)
        assert [content * c for c in primitive] == coeffs
        assert math.gcd(*primitive) == 1
        assert next(c for c in primitive if c) > 0
