import math
from fractions import Fraction

import numpy as np
import pytest

from minimal_models import resultant as resultant_module
from minimal_models.exceptions import DegenerateSpecializationError, DomainError
from minimal_models.map_model import HomogeneousLift
from minimal_models.math_utils import MathUtils
from minimal_models.resultant import (
    certify_conjugation_exponent,
    conjugation_exponent,
    is_morphism,
    left_composition_exponent,
    macaulay_resultant,
    monomials,
    random_invertible,
    random_lift,
    resultant,
    right_composition_exponent,
    scaling_exponent,
    sylvester_resultant,
)


def _lift(d, *term_maps):
    return HomogeneousLift.from_terms(d, term_maps)


SQUARES = _lift(2, {(2, 0): 1}, {(0, 2): 1})
SUM_OF_SQUARES = _lift(2, {(2, 0): 1, (0, 2): 1}, {(1, 1): 2})
# (N, d) grid shared by the transformation-law checks, 100 instances in all
LAW_TRIALS = {(1, 1): 20, (1, 2): 25, (1, 3): 20, (2, 1): 20, (2, 2): 12, (2, 3): 3}


def test_sylvester_examples():
    assert sylvester_resultant(SQUARES) == 1
    assert sylvester_resultant(SUM_OF_SQUARES) == 4
    for p in (2, 3, 5, 7):
        assert sylvester_resultant(_lift(2, {(2, 0): 1}, {(1, 1): p, (0, 2): 1})) == 1


def test_sylvester_needs_binary_forms():
    with pytest.raises(DomainError):
        sylvester_resultant(_lift(1, {(1, 0, 0): 1}, {(0, 1, 0): 1}, {(0, 0, 1): 1}))


def test_binary_quadratic_closed_form():
    rng = np.random.default_rng(9)
    for _ in range(30):
        lift = random_lift(1, 2, rng)
        (a, b, c), (d, e, f) = [[form.terms.get(m, 0) for m in ((2, 0), (1, 1), (0, 2))] for form in lift.forms]
        assert resultant(lift) == (a * f - c * d) ** 2 - (a * e - b * d) * (b * f - c * e)


def test_macaulay_examples():
    identity = _lift(1, {(1, 0, 0): 1}, {(0, 1, 0): 1}, {(0, 0, 1): 1})
    assert macaulay_resultant(identity) == 1
    assert macaulay_resultant(_lift(2, {(2, 0, 0): 1}, {(0, 2, 0): 1}, {(0, 0, 2): 1})) == 1
    linear = _lift(1, {(1, 0, 0): 2, (0, 1, 0): 1}, {(0, 1, 0): 3}, {(1, 0, 0): 1, (0, 0, 1): 5})
    assert macaulay_resultant(linear) == 30


def test_diagonal_forms():
    lift = _lift(2, {(2, 0, 0): 2}, {(0, 2, 0): 3}, {(0, 0, 2): 5})
    assert resultant(lift) == 30 ** 4


def test_macaulay_agrees_with_sylvester():
    rng = np.random.default_rng(10)
    for i in range(100):
        lift = random_lift(1, 1 + i % 3, rng)
        assert macaulay_resultant(lift) == sylvester_resultant(lift)


def test_rational_coefficients():
    lift = _lift(2, {(2, 0): Fraction(1, 2)}, {(0, 2): 1})
    assert resultant(lift) == Fraction(1, 4)
    assert resultant(SQUARES.scale(3)) == 81


def test_exponents():
    assert conjugation_exponent(1, 2) == -2
    assert all(conjugation_exponent(N, 1) == 0 for N in (1, 2, 3))
    assert conjugation_exponent(2, 2) == -4
    assert scaling_exponent(1, 2) == 4
    assert scaling_exponent(1, 1) == 2
    assert scaling_exponent(2, 2) == 12
    assert left_composition_exponent(2, 3) == 9
    assert right_composition_exponent(2, 3) == 27
    with pytest.raises(DomainError):
        scaling_exponent(0, 2)


def test_conjugation_law_is_certified():
    for (N, d), count in LAW_TRIALS.items():
        assert certify_conjugation_exponent(N, d, trials=count, seed=N * 10 + d) == conjugation_exponent(N, d)


def test_hand_derived_conjugation_exponent():
    a = 5
    conjugated = SQUARES.conjugate(MathUtils.diagonal([a, 1]))
    assert conjugated == _lift(2, {(2, 0): Fraction(1, a)}, {(0, 2): 1})
    assert resultant(conjugated) == Fraction(1, a ** 2)


def test_one_sided_laws():
    rng = np.random.default_rng(11)
    for N, d in ((1, 2), (1, 3), (2, 2)):
        for _ in range(5):
            lift = random_lift(N, d, rng, 5)
            A = random_invertible(N + 1, rng, 3)
            det = MathUtils.determinant(A)
            base = resultant(lift)
            assert resultant(lift.postcompose(A)) == det ** left_composition_exponent(N, d) * base
            assert resultant(lift.precompose(A)) == det ** right_composition_exponent(N, d) * base


def test_scaling_law():
    rng = np.random.default_rng(12)
    assert sum(LAW_TRIALS.values()) >= 100
    for (N, d), count in LAW_TRIALS.items():
        for _ in range(count):
            lift = random_lift(N, d, rng)
            c = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10))) * (1 if rng.integers(2) else -1)
            assert resultant(lift.scale(c)) == c ** scaling_exponent(N, d) * resultant(lift)


def test_morphism_examples():
    assert is_morphism(SQUARES)
    assert not is_morphism(_lift(2, {(2, 0): 1}, {(1, 1): 1}))
    assert is_morphism(SUM_OF_SQUARES)


def test_planted_common_zeros_give_zero_resultant():
    rng = np.random.default_rng(13)
    degenerate_line = _lift(2, {(2, 0): 1}, {(1, 1): 1})
    degenerate_plane = _lift(2, {(2, 0, 0): 1}, {(1, 1, 0): 1}, {(0, 0, 2): 1})
    for _ in range(10):
        assert resultant(degenerate_line.conjugate(random_invertible(2, rng, 5))) == 0
    for _ in range(3):
        assert resultant(degenerate_plane.conjugate(random_invertible(3, rng, 3))) == 0


def test_unimodular_conjugation_keeps_resultant():
    rng = np.random.default_rng(14)
    unimodular = MathUtils.as_matrix([[2, 1], [1, 1]])
    for _ in range(10):
        lift = random_lift(1, 3, rng)
        assert abs(resultant(lift.conjugate(unimodular))) == abs(resultant(lift))


def test_degenerate_specialization_is_reported(monkeypatch):
    monkeypatch.setattr(resultant_module, "_macaulay_quotient", lambda lift: None)
    with pytest.raises(DegenerateSpecializationError) as info:
        macaulay_resultant(_lift(2, {(2, 0, 0): 1}, {(0, 2, 0): 1}, {(0, 0, 2): 1}), retries=4)
    assert info.value.retries == 4


def test_unimodular_retry_recovers(monkeypatch):
    real = resultant_module._macaulay_quotient
    calls = []

    def first_call_degenerate(lift):
        calls.append(lift)
        return None if len(calls) == 1 else real(lift)

    monkeypatch.setattr(resultant_module, "_macaulay_quotient", first_call_degenerate)
    lift = _lift(2, {(2, 0, 0): 2}, {(0, 2, 0): 3}, {(0, 0, 2): 5})
    assert macaulay_resultant(lift) == 30 ** 4
    assert len(calls) >= 2


def test_monomials_in_graded_lex_order():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert monomials(3, 2)[:3] == [(2, 0, 0), (1, 1, 0), (1, 0, 1)]
    assert monomials(1, 4) == [(4,)]
    for n, degree in ((2, 5), (3, 4), (4, 3)):
        exponents = monomials(n, degree)
        assert len(exponents) == math.comb(n + degree - 1, degree)
        assert all(sum(e) == degree for e in exponents)
