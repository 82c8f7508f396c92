# number_theory.py
"""Primes, valuations, factorization and contents over the rationals"""
import logging
import math
from collections import Counter
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Tuple, Union

from sympy import factorint, isprime, multiplicity, perfect_power
from sympy.ntheory import pollard_rho

from .exceptions import DomainError, UnfactoredCofactorError

logger = logging.getLogger(__name__)

TRIAL_DIVISION_LIMIT = 10**6
RHO_RETRIES = 8
RHO_MAX_STEPS = 200_000

RationalLike = Union[int, Fraction, str]


class Prime(int):
    """A positive rational prime; primality is tested at construction"""
    def __new__(cls, value):
        value = int(value)
        if not isprime(value):
            raise DomainError(f"{value} is not a prime")
        return super().__new__(cls, value)

    def __repr__(self) -> str:
        return f"Prime({int(self)})"


def to_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or 'a/b' string to a Fraction"""
    if isinstance(value, Fraction):
        return value
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise DomainError(f"not a rational number: {value!r}") from e


def ord_p(x: RationalLike, p: int) -> Union[int, float]:
    """Exponent of p in x; math.inf for x = 0"""
    x = to_rational(x)
    if x == 0:
        return math.inf
    return multiplicity(p, abs(x.numerator)) - multiplicity(p, x.denominator)


def _split(n: int) -> Union[int, None]:
    """Find a nontrivial divisor of the composite n, or None"""
    power = perfect_power(n)
    if power:
        return power[0]
    for attempt in range(RHO_RETRIES):
        divisor = pollard_rho(n, s=2 + attempt, a=1 + attempt, retries=0, max_steps=RHO_MAX_STEPS)
        if divisor and 1 < divisor < n:
            return int(divisor)
    return None


def factor(n: int) -> Dict[Prime, int]:
    """Factor a nonzero integer into {Prime: exponent}, sorted by prime.

    Trial division runs up to TRIAL_DIVISION_LIMIT, the remaining cofactors
    are split with Pollard rho and certified with a Miller-Rabin based test.
    A cofactor that resists every attempt raises UnfactoredCofactorError
    rather than being reported as prime.
    """
    n = int(n)
    if n == 0:
        raise DomainError("cannot factor 0")
    found: Counter = Counter()
    pending: List[Tuple[int, int]] = list(factorint(abs(n), limit=TRIAL_DIVISION_LIMIT).items())
    while pending:
        q, e = pending.pop()
        if q == 1:
            continue
        if isprime(q):
            found[q] += e
            continue
        divisor = _split(q)
        if divisor is None:
            logger.warning("Giving up on cofactor %d of %d", q, n)
            raise UnfactoredCofactorError(q, partial={Prime(k): v for k, v in found.items()})
        pending.append((divisor, e))
        pending.append((q // divisor, e))
    return {Prime(q): found[q] for q in sorted(found)}


def prime_divisors(values: Iterable[int]) -> List[Prime]:
    """Sorted distinct primes dividing any of the given nonzero integers"""
    primes = set()
    for value in values:
        if value not in (0, 1, -1):
            primes.update(factor(value))
    return sorted(primes)


def content_and_primitive(coeffs: Iterable[RationalLike]) -> Tuple[Fraction, List[int]]:
    """Split coefficients as content * primitive.

    The primitive vector is integral with gcd 1 and its first nonzero entry
    is positive; the content carries the sign.
    """
    values = [to_rational(c) for c in coeffs]
    if not values or all(v == 0 for v in values):
        raise DomainError("content of an all-zero coefficient list is undefined")
    denominator = math.lcm(*(v.denominator for v in values))
    integers = [v.numerator * (denominator // v.denominator) for v in values]
    g = reduce(math.gcd, integers)
    sign = 1 if next(i for i in integers if i != 0) > 0 else -1
    return Fraction(sign * g, denominator), [sign * i // g for i in integers]
