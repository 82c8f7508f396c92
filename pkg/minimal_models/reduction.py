# reduction.py
"""p-integral models, good reduction and local minimization of ord_p(Res)"""
import itertools
import logging
from collections import deque
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np
from sympy import Poly, symbols

from .exceptions import DomainError, InvariantViolation
from .lattice import Lattice
from .map_model import HomogeneousLift, Model
from .math_utils import MathUtils
from .number_theory import Prime, content_and_primitive, factor, ord_p
from .resultant import conjugation_exponent, resultant, scaling_exponent

logger = logging.getLogger(__name__)

DEFAULT_RADIUS = 3
RESIDUE_POINT_LIMIT = 10**6


class LocalModelSearchResult:
    """Best model found at one prime, with search bookkeeping"""
    def __init__(self, prime: int, model: Model, valuation: int, radius_exhausted: bool,
                 visited: int, start_valuation: int):
        self.prime = Prime(prime)
        self.model = model
        self.valuation = valuation
        self.radius_exhausted = radius_exhausted
        self.visited = visited
        self.start_valuation = start_valuation

    def __repr__(self) -> str:
        return (f"LocalModelSearchResult(prime={int(self.prime)}, valuation={self.valuation}, "
                f"radius_exhausted={self.radius_exhausted}, visited={self.visited})")


def is_p_integral(lift: HomogeneousLift, p: int) -> bool:
    return all(ord_p(c, p) >= 0 for c in lift.coefficients())


def _min_order(lift: HomogeneousLift, p: int) -> int:
    return min(ord_p(c, p) for c in lift.coefficients())


def p_integral_scale(lift: HomogeneousLift, p: int) -> HomogeneousLift:
    """Multiply by the least power of p making the lift p-integral"""
    k = max(0, -_min_order(lift, p))
    return lift.scale(Fraction(p) ** k) if k else lift


def p_primitive_scale(lift: HomogeneousLift, p: int) -> Tuple[HomogeneousLift, int]:
    """Scale by p^k so that the lift is p-integral with a p-unit coefficient"""
    k = -_min_order(lift, p)
    return (lift.scale(Fraction(p) ** k) if k else lift), k


def has_unit_resultant(lift: HomogeneousLift, p: int) -> bool:
    """ord_p(Res) = 0 for a p-integral lift"""
    if not is_p_integral(lift, p):
        raise DomainError(f"lift is not {p}-integral")
    return ord_p(resultant(lift), p) == 0


def residue_common_zeros(lift: HomogeneousLift, p: int) -> List[Tuple[int, ...]]:
    """Points of P^N(F_p) where every reduced form of the p-primitive lift vanishes"""
    p = Prime(p)
    count = sum(p ** k for k in range(lift.num_vars))
    if count > RESIDUE_POINT_LIMIT:
        raise DomainError(f"P^{lift.N}(F_{p}) has {count} points, too many to enumerate")
    reduced = p_primitive_scale(lift, p)[0].reduce_mod_p(p)
    zeros = []
    for lead in range(lift.num_vars):
        # points normalized with first nonzero coordinate 1 at position lead
        for tail in itertools.product(range(p), repeat=lift.num_vars - lead - 1):
            point = (0,) * lead + (1,) + tail
            if all(form.evaluate(point) == 0 for form in reduced):
                zeros.append(point)
    return zeros


def residue_zeros_quadratic(lift: HomogeneousLift, p: int) -> bool:
    """For N = 1: whether the reduced binary forms share a zero over the
    algebraic closure of F_p (which covers F_p and F_{p^2})"""
    if lift.N != 1:
        raise DomainError("residue_zeros_quadratic needs N = 1")
    p = Prime(p)
    reduced = p_primitive_scale(lift, p)[0].reduce_mod_p(p)
    d = lift.d
    # the point (1:0) reads off the x^d coefficients
    if all(form.terms.get((d, 0), 0) == 0 for form in reduced):
        return True
    t = symbols("t")
    affine = [Poly({(e[0],): c for e, c in form.terms.items()} or {(0,): 0}, t, modulus=p)
              for form in reduced]
    common = affine[0].gcd(affine[1])
    return common.is_zero or common.degree() >= 1


def neighbor_moves(n: int, p: int) -> List[np.ndarray]:
    """One matrix per proper intermediate row lattice p Z^n < L < Z^n, then their inverses.

    Each subspace of F_p^n is lifted from its reduced row echelon basis; the
    rows p e_j for non-pivot columns complete it, sorted into upper triangular
    order.
    """
    if n < 2:
        raise DomainError("neighbor moves need n >= 2")
    p = Prime(p)
    sublattices = []
    for k in range(1, n):
        for pivots in itertools.combinations(range(n), k):
            free = [(i, j) for i, pivot in enumerate(pivots) for j in range(pivot + 1, n) if j not in pivots]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = {}
                for i, pivot in enumerate(pivots):
                    row = [0] * n
                    row[pivot] = 1
                    rows[pivot] = row
                for (i, j), value in zip(free, values):
                    rows[pivots[i]][j] = value
                for j in range(n):
                    if j not in rows:
                        rows[j] = [p if c == j else 0 for c in range(n)]
                sublattices.append(MathUtils.as_matrix([rows[j] for j in range(n)]))
    return sublattices + [MathUtils.inverse(m) for m in sublattices]


def _class_key(conjugator: np.ndarray) -> Tuple[Tuple[int, ...], ...]:
    """Row lattice of the conjugator modulo p-power scaling"""
    return Lattice.from_generators(conjugator.tolist()).hermite


class _SearchState:
    def __init__(self, model: Model, valuation: int, depth: int, key):
        self.model = model
        self.valuation = valuation
        self.depth = depth
        self.key = key

    def rank(self):
        """Smallest valuation wins, then the shallower class, then the least
        Hermite key; depth before key keeps an already minimal input fixed"""
        return self.valuation, self.depth, self.key


def minimize_local(lift: HomogeneousLift, p: int, radius: int = DEFAULT_RADIUS) -> LocalModelSearchResult:
    """Breadth-first search over lattice classes within radius neighbor moves.

    Every visited class is conjugated in, scaled p-primitive and scored by
    ord_p(Res); the valuation bookkeeping is audited on every step. The
    search stops after the level where valuation 0 first shows up.
    """
    p = Prime(p)
    if radius < 0:
        raise DomainError("radius must be nonnegative")
    if resultant(lift) == 0:
        raise DomainError("lift is not a morphism")
    N, d, n = lift.N, lift.d, lift.num_vars
    C, s = conjugation_exponent(N, d), scaling_exponent(N, d)
    start_lift, k = p_primitive_scale(lift, p)
    start_model = Model(start_lift, MathUtils.identity(n), Fraction(p) ** k, lift, verify=False)
    start = _SearchState(start_model, ord_p(resultant(start_lift), p), 0,
                         _class_key(MathUtils.identity(n)))
    visited: Dict[tuple, _SearchState] = {start.key: start}
    moves = neighbor_moves(n, p)
    best = start
    frontier = deque([start]) if start.valuation > 0 else deque()
    depth = 0
    while frontier and depth < radius:
        depth += 1
        level = []
        for state in frontier:
            for move in moves:
                conjugator = move @ state.model.conjugator
                key = _class_key(conjugator)
                if key in visited:
                    continue
                moved = state.model.lift.conjugate(move)
                scaled, shift = p_primitive_scale(moved, p)
                valuation = ord_p(resultant(scaled), p)
                expected = state.valuation + C * ord_p(MathUtils.determinant(move), p) + s * shift
                if valuation != expected:
                    raise InvariantViolation(
                        f"valuation {valuation} at {p} differs from bookkeeping {expected}")
                model = Model(scaled, conjugator, state.model.scalar * Fraction(p) ** shift, lift, verify=False)
                child = _SearchState(model, valuation, depth, key)
                visited[key] = child
                level.append(child)
                logger.debug("p=%d depth=%d class=%s valuation=%d", p, depth, key, valuation)
        if level:
            best = min([best] + level, key=_SearchState.rank)
        frontier = deque(level)
        if best.valuation == 0:
            break
    exhausted = best.valuation > 0 and bool(frontier)
    if exhausted:
        logger.warning("Radius %d exhausted at p=%d with valuation %d", radius, p, best.valuation)
    best.model.verify()
    return LocalModelSearchResult(p, best.model, best.valuation, exhausted, len(visited), start.valuation)


def content_normalize(lift: HomogeneousLift) -> HomogeneousLift:
    """Integral primitive lift, first nonzero coefficient positive"""
    content, _ = content_and_primitive(lift.coefficients())
    return lift.scale(1 / content)


def bad_primes(lift: HomogeneousLift) -> List[Prime]:
    """Primes dividing Res of the content-normalized lift"""
    value = resultant(content_normalize(lift))
    if value == 0:
        raise DomainError("lift is not a morphism")
    return sorted(factor(value.numerator))
