# resultant.py
"""Exact resultants of N+1 forms of a common degree in N+1 variables"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import symbols
from sympy.polys.monomials import Monomial, itermonomials
from sympy.polys.orderings import grlex

from .exceptions import DegenerateSpecializationError, DomainError, InvariantViolation
from .map_model import Exponent, HomogeneousLift
from .math_utils import MathUtils

logger = logging.getLogger(__name__)

MAX_RETRIES = 20
RETRY_ENTRY_BOUND = 3
RETRY_SEED = 0


def coefficient_degree(N: int, d: int) -> int:
    """Degree of Res in the coefficients of each single form"""
    return d ** N


def scaling_exponent(N: int, d: int) -> int:
    """e with Res(c * Phi) = c^e Res(Phi)"""
    _check_shape(N, d)
    return (N + 1) * coefficient_degree(N, d)


def left_composition_exponent(N: int, d: int) -> int:
    """m with Res(A o Phi) = det(A)^m Res(Phi)"""
    _check_shape(N, d)
    return coefficient_degree(N, d)


def right_composition_exponent(N: int, d: int) -> int:
    """M with Res(Phi o A) = det(A)^M Res(Phi); the product of the N+1 degrees"""
    _check_shape(N, d)
    return d ** (N + 1)


def conjugation_exponent(N: int, d: int) -> int:
    """C(N, d) with Res(A o Phi o A^-1) = det(A)^C Res(Phi).

    Combines the two one-sided laws: d^N from A on the left and -d^(N+1)
    from A^-1 on the right. Certified by certify_conjugation_exponent.
    """
    return left_composition_exponent(N, d) - right_composition_exponent(N, d)


def _check_shape(N: int, d: int):
    if N < 1 or d < 1:
        raise DomainError(f"resultant needs N >= 1 and d >= 1, got N={N}, d={d}")


def _integral_forms(lift: HomogeneousLift) -> Tuple[List[Dict[Exponent, int]], int]:
    """Clear denominators form by form; returns integer forms and the factor
    by which Res of the integer forms exceeds Res of the lift"""
    forms = []
    correction = 1
    per_form = coefficient_degree(lift.N, lift.d)
    for form in lift.forms:
        denominator = math.lcm(*(c.denominator for c in form.terms.values())) if form.terms else 1
        forms.append({e: c.numerator * (denominator // c.denominator) for e, c in form.terms.items()})
        correction *= denominator ** per_form
    return forms, correction


def _integer_det(rows: List[List[int]]) -> int:
    """Fraction-free determinant over ZZ; the empty matrix has determinant 1"""
    if not rows:
        return 1
    return int(MathUtils.integer_domain(rows).det())


def sylvester_resultant(lift: HomogeneousLift) -> Fraction:
    """Determinant of the 2d x 2d Sylvester matrix of two binary forms.

    Rows are x^(d-1-i) y^i * F followed by x^(d-1-i) y^i * G, columns the
    monomials of degree 2d-1 from x^(2d-1) down, so Res(x^d, y^d) = 1.
    """
    if lift.N != 1:
        raise DomainError(f"Sylvester resultant needs N = 1, got N = {lift.N}")
    d = lift.d
    forms, correction = _integral_forms(lift)
    rows = []
    for form in forms:
        # coefficient of x^(d-k) y^k
        coeffs = [form.get((d - k, k), 0) for k in range(d + 1)]
        for shift in range(d):
            rows.append([0] * shift + coeffs + [0] * (d - 1 - shift))
    return Fraction(_integer_det(rows), correction)


def monomials(num_vars: int, degree: int) -> List[Exponent]:
    """All exponent vectors of the given degree, graded lexicographic descending"""
    gens = symbols(f"x0:{num_vars}")
    exponents = (Monomial(m, gens).exponents for m in itermonomials(gens, degree, degree))
    return sorted(exponents, key=grlex, reverse=True)


def _macaulay_quotient(lift: HomogeneousLift) -> Optional[Fraction]:
    """det(M) / det(M') at the critical degree; None when the minor vanishes"""
    n, d = lift.num_vars, lift.d
    nu = n * (d - 1) + 1
    forms, correction = _integral_forms(lift)
    columns = monomials(n, nu)
    index = {m: i for i, m in enumerate(columns)}
    rows = []
    reduced = []
    for m in columns:
        divisible = [i for i in range(n) if m[i] >= d]
        i = divisible[0]
        shift = tuple(m[j] - (d if j == i else 0) for j in range(n))
        row = [0] * len(columns)
        for e, c in forms[i].items():
            row[index[tuple(a + b for a, b in zip(shift, e))]] = c
        rows.append(row)
        reduced.append(len(divisible) == 1)
    keep = [k for k, is_reduced in enumerate(reduced) if not is_reduced]
    minor = _integer_det([[rows[a][b] for b in keep] for a in keep])
    if minor == 0:
        return None
    numerator = _integer_det(rows)
    return Fraction(numerator, minor * correction)


def _random_unimodular(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random integer matrix of determinant 1 with entries in [-3, 3]"""
    bound = RETRY_ENTRY_BOUND
    for _ in range(10_000):
        candidate = MathUtils.as_matrix(rng.integers(-bound, bound + 1, size=(n, n)).tolist())
        if MathUtils.determinant(candidate) == 1:
            return candidate
    # unitriangular fallback, still determinant 1
    upper = np.triu(rng.integers(-bound, bound + 1, size=(n, n)), 1) + np.eye(n, dtype=int)
    return MathUtils.as_matrix(upper.tolist())


def macaulay_resultant(lift: HomogeneousLift, retries: int = MAX_RETRIES,
                       seed: int = RETRY_SEED) -> Fraction:
    """Multivariate resultant by the Macaulay quotient formula.

    When the extraneous minor vanishes the quotient is 0/0; the forms are then
    precomposed with a random determinant-1 matrix, which leaves Res unchanged,
    and the quotient is recomputed.
    """
    _check_shape(lift.N, lift.d)
    value = _macaulay_quotient(lift)
    if value is not None:
        return value
    rng = np.random.default_rng(seed)
    for attempt in range(retries):
        logger.debug("Macaulay minor vanished, unimodular retry %d", attempt + 1)
        value = _macaulay_quotient(lift.precompose(_random_unimodular(lift.num_vars, rng)))
        if value is not None:
            return value
    logger.warning("Macaulay quotient degenerate after %d retries", retries)
    raise DegenerateSpecializationError(retries)


def resultant(lift: HomogeneousLift) -> Fraction:
    """Res(Phi): Sylvester for N = 1, Macaulay otherwise"""
    if lift.N == 1:
        return sylvester_resultant(lift)
    return macaulay_resultant(lift)


def is_morphism(lift: HomogeneousLift) -> bool:
    """True iff the forms have no nontrivial common zero"""
    return resultant(lift) != 0


def random_lift(N: int, d: int, rng: np.random.Generator, bound: int = 9) -> HomogeneousLift:
    """Random integer lift with coefficients in [-bound, bound]"""
    support = monomials(N + 1, d)
    term_maps = [{m: int(c) for m, c in zip(support, rng.integers(-bound, bound + 1, size=len(support)))}
                 for _ in range(N + 1)]
    # keep every form nonzero
    for k, terms in enumerate(term_maps):
        if not any(terms.values()):
            terms[support[k % len(support)]] = 1
    return HomogeneousLift.from_terms(d, term_maps)


def random_invertible(n: int, rng: np.random.Generator, bound: int = 9) -> np.ndarray:
    """Random integer matrix with nonzero determinant and entries in [-bound, bound]"""
    while True:
        candidate = MathUtils.as_matrix(rng.integers(-bound, bound + 1, size=(n, n)).tolist())
        if MathUtils.determinant(candidate) != 0:
            return candidate


def certify_conjugation_exponent(N: int, d: int, trials: int = 50, seed: int = 0, bound: int = 9) -> int:
    """Check Res(A o Phi o A^-1) = det(A)^C Res(Phi) on random exact instances.

    Returns C(N, d); raises InvariantViolation on the first mismatch.
    """
    exponent = conjugation_exponent(N, d)
    rng = np.random.default_rng(seed)
    checked = 0
    while checked < trials:
        lift = random_lift(N, d, rng, bound)
        before = resultant(lift)
        if before == 0:
            continue
        matrix = random_invertible(N + 1, rng, bound)
        after = resultant(lift.conjugate(matrix))
        if after != MathUtils.determinant(matrix) ** exponent * before:
            raise InvariantViolation(f"conjugation law fails for N={N}, d={d} with exponent {exponent}")
        checked += 1
    return exponent
