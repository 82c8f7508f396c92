# map_model.py
"""Homogeneous forms, homogeneous lifts and models of projective morphisms"""
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

from .exceptions import DomainError, InvariantViolation
from .math_utils import MathUtils
from .number_theory import RationalLike, ord_p, to_rational

Exponent = Tuple[int, ...]


def default_coords(num_vars: int) -> List[str]:
    """x, y, z for small spaces, x0..xN otherwise"""
    if num_vars <= 3:
        return ["x", "y", "z"][:num_vars]
    return [f"x{i}" for i in range(num_vars)]


class Form:
    """A homogeneous form with exact rational coefficients, stored sparsely"""
    def __init__(self, num_vars: int, degree: int, terms: Optional[Dict[Exponent, RationalLike]] = None):
        if num_vars < 2:
            raise DomainError(f"a form needs at least 2 variables, got {num_vars}")
        if degree < 1:
            raise DomainError(f"form degree must be at least 1, got {degree}")
        self.num_vars = num_vars
        self.degree = degree
        cleaned: Dict[Exponent, Fraction] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != num_vars or min(exponent) < 0:
                raise DomainError(f"bad exponent vector {exponent} for {num_vars} variables")
            if sum(exponent) != degree:
                raise DomainError(f"exponent {exponent} is not of degree {degree}")
            coeff = to_rational(coeff)
            if coeff != 0:
                cleaned[exponent] = coeff
        # graded lexicographic, largest monomial first
        self.terms: Dict[Exponent, Fraction] = {e: cleaned[e] for e in sorted(cleaned, key=grlex, reverse=True)}

    def is_zero(self) -> bool:
        """True when no term is stored"""
        return not self.terms

    def coefficients(self) -> List[Fraction]:
        """Coefficients in graded lexicographic order"""
        return list(self.terms.values())

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Exact value at a point"""
        total = Fraction(0)
        for exponent, coeff in self.terms.items():
            value = coeff
            for x, e in zip(point, exponent):
                if e:
                    value *= x ** e
            total += value
        return total

    def scale(self, c: RationalLike) -> "Form":
        """Multiply every coefficient by c"""
        c = to_rational(c)
        return Form(self.num_vars, self.degree, {e: c * v for e, v in self.terms.items()})

    def __add__(self, other: "Form") -> "Form":
        if (self.num_vars, self.degree) != (other.num_vars, other.degree):
            raise DomainError("cannot add forms of different shapes")
        terms = dict(self.terms)
        for e, v in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + v
        return Form(self.num_vars, self.degree, terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (self.num_vars, self.degree, self.terms) == (other.num_vars, other.degree, other.terms)

    def __hash__(self) -> int:
        return hash((self.num_vars, self.degree, tuple(self.terms.items())))

    def __repr__(self) -> str:
        return f"Form({self.num_vars}, {self.degree}, {self.terms})"


class ResidueForm:
    """A form reduced modulo a prime; coefficients lie in [0, p)"""
    def __init__(self, prime: int, num_vars: int, degree: int, terms: Dict[Exponent, int]):
        self.prime = prime
        self.num_vars = num_vars
        self.degree = degree
        self.terms = {e: int(c) % prime for e, c in terms.items() if int(c) % prime}

    def evaluate(self, point: Sequence[int]) -> int:
        """Value at a point with coordinates in the prime field"""
        p = self.prime
        total = 0
        for exponent, coeff in self.terms.items():
            value = coeff
            for x, e in zip(point, exponent):
                if e:
                    value = value * pow(x, e, p) % p
            total = (total + value) % p
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResidueForm):
            return NotImplemented
        return (self.prime, self.num_vars, self.degree, self.terms) == \
            (other.prime, other.num_vars, other.degree, other.terms)

    def __repr__(self) -> str:
        return f"ResidueForm(p={self.prime}, {self.terms})"


class HomogeneousLift:
    """N+1 forms of a common degree d in N+1 variables"""
    def __init__(self, forms: Sequence[Form], coords: Optional[Sequence[str]] = None):
        forms = list(forms)
        if len(forms) < 2:
            raise DomainError("a homogeneous lift needs at least two forms")
        num_vars, degree = forms[0].num_vars, forms[0].degree
        for form in forms:
            if form.num_vars != num_vars:
                raise DomainError("forms must share the number of variables")
            if form.degree != degree:
                raise DomainError(f"degree mismatch {degree} vs {form.degree}")
        if num_vars != len(forms):
            raise DomainError(f"{len(forms)} forms given for {num_vars} variables")
        if all(form.is_zero() for form in forms):
            raise DomainError("all forms are zero")
        self.forms = forms
        self.N = num_vars - 1
        self.d = degree
        self.coords = list(coords) if coords else default_coords(num_vars)

    @classmethod
    def from_terms(cls, d: int, term_maps: Sequence[Dict[Exponent, RationalLike]],
                   coords: Optional[Sequence[str]] = None) -> "HomogeneousLift":
        """Build a lift from one {exponent: coefficient} map per form"""
        n = len(term_maps)
        return cls([Form(n, d, terms) for terms in term_maps], coords)

    @property
    def num_vars(self) -> int:
        return self.N + 1

    def coefficients(self) -> List[Fraction]:
        """All coefficients, form by form"""
        return [c for form in self.forms for c in form.coefficients()]

    def evaluate(self, point: Sequence[RationalLike]) -> List[Fraction]:
        """Exact image of a point of affine (N+1)-space"""
        if len(point) != self.num_vars:
            raise DomainError(f"point must have {self.num_vars} coordinates")
        point = [to_rational(x) for x in point]
        return [form.evaluate(point) for form in self.forms]

    def scale(self, c: RationalLike) -> "HomogeneousLift":
        """Multiply every coefficient by a nonzero rational"""
        c = to_rational(c)
        if c == 0:
            raise DomainError("cannot scale a lift by zero")
        return HomogeneousLift([form.scale(c) for form in self.forms], self.coords)

    def __add__(self, other: "HomogeneousLift") -> "HomogeneousLift":
        return HomogeneousLift([a + b for a, b in zip(self.forms, other.forms)], self.coords)

    def _ring(self):
        """Sparse polynomial ring over QQ in num_vars generators"""
        R, *gens = ring([f"v{i}" for i in range(self.num_vars)], QQ)
        return R, gens

    def _to_polys(self, R) -> list:
        return [R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in form.terms.items()})
                for form in self.forms]

    def _from_polys(self, polys) -> "HomogeneousLift":
        forms = []
        for poly in polys:
            terms = {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in poly.terms()}
            forms.append(Form(self.num_vars, self.d, terms))
        return HomogeneousLift(forms, self.coords)

    def _check_square(self, matrix: np.ndarray):
        if matrix.shape != (self.num_vars, self.num_vars):
            raise DomainError(f"matrix must be {self.num_vars}x{self.num_vars}, got {matrix.shape}")

    def precompose(self, matrix) -> "HomogeneousLift":
        """The lift x -> Phi(A x)"""
        matrix = MathUtils.as_matrix(matrix)
        self._check_square(matrix)
        R, gens = self._ring()
        images = []
        for row in matrix:
            image = R.zero
            for a, g in zip(row, gens):
                if a:
                    image += QQ(a.numerator, a.denominator) * g
            images.append(image)
        substitution = list(zip(gens, images))
        return self._from_polys([poly.compose(substitution) for poly in self._to_polys(R)])

    def postcompose(self, matrix) -> "HomogeneousLift":
        """The lift x -> A Phi(x)"""
        matrix = MathUtils.as_matrix(matrix)
        self._check_square(matrix)
        forms = []
        for row in matrix:
            total = Form(self.num_vars, self.d)
            for a, form in zip(row, self.forms):
                if a:
                    total = total + form.scale(a)
            forms.append(total)
        return HomogeneousLift(forms, self.coords)

    def conjugate(self, matrix) -> "HomogeneousLift":
        """The lift A o Phi o A^-1, expanded exactly"""
        matrix = MathUtils.as_matrix(matrix)
        self._check_square(matrix)
        inverse = MathUtils.inverse(matrix)
        return self.precompose(inverse).postcompose(matrix)

    def reduce_mod_p(self, p: int) -> List[ResidueForm]:
        """Coefficientwise reduction modulo p of a p-integral lift"""
        reduced = []
        for form in self.forms:
            terms = {}
            for exponent, coeff in form.terms.items():
                if ord_p(coeff, p) < 0:
                    raise DomainError(f"coefficient {coeff} is not {p}-integral")
                terms[exponent] = coeff.numerator * pow(coeff.denominator, -1, p)
            reduced.append(ResidueForm(p, self.num_vars, self.d, terms))
        return reduced

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousLift):
            return NotImplemented
        return self.forms == other.forms

    def __hash__(self) -> int:
        return hash(tuple(self.forms))

    def __repr__(self) -> str:
        return f"HomogeneousLift(N={self.N}, d={self.d}, forms={self.forms})"


class Model:
    """A lift together with its provenance: lift = scalar * (A o base o A^-1)"""
    def __init__(self, lift: HomogeneousLift, conjugator, scalar: RationalLike,
                 base: HomogeneousLift, verify: bool = True):
        self.lift = lift
        self.conjugator = MathUtils.as_matrix(conjugator)
        self.scalar = to_rational(scalar)
        self.base = base
        if self.scalar == 0:
            raise DomainError("model scalar must be nonzero")
        if MathUtils.determinant(self.conjugator) == 0:
            raise DomainError("model conjugator is singular")
        if verify:
            self.verify()

    def verify(self):
        """Re-expand the provenance and compare exactly"""
        expected = self.base.conjugate(self.conjugator).scale(self.scalar)
        if expected != self.lift:
            raise InvariantViolation("model lift does not match scalar * conjugate(base)")

    def moved(self, matrix, scalar: RationalLike = 1, verify: bool = True) -> "Model":
        """Conjugate this model by matrix and rescale, keeping provenance"""
        matrix = MathUtils.as_matrix(matrix)
        scalar = to_rational(scalar)
        lift = self.lift.conjugate(matrix).scale(scalar)
        return Model(lift, matrix @ self.conjugator, scalar * self.scalar, self.base, verify)

    def __repr__(self) -> str:
        return f"Model(lift={self.lift}, scalar={self.scalar})"
