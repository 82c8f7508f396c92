# lattice.py
"""Lattices in Q^n: Hermite canonical forms, localizations, gluing and the adelic action"""
import logging
import math
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import primerange
from sympy.polys.matrices.normalforms import hermite_normal_form as _column_hermite_form
from sympy.polys.matrices.normalforms import invariant_factors, smith_normal_decomp

from .exceptions import DomainError, InvariantViolation
from .math_utils import MathUtils
from .number_theory import Prime, RationalLike, ord_p, to_rational

logger = logging.getLogger(__name__)

OFF_SUPPORT_CHECKS = 3
OFF_SUPPORT_PRIME_BOUND = 200
CHECK_SEED = 0

IntRows = List[List[int]]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> IntRows:
    """Row Hermite form of a full-rank integer generator set.

    Upper triangular, positive pivots, entries above each pivot reduced into
    [0, pivot). The result is n x n whatever the number of generators.
    """
    rows = [[int(x) for x in row] for row in rows]
    if not rows:
        raise DomainError("no generators")
    n = len(rows[0])
    # sympy reduces columns; reversing coordinates turns its form into ours
    flipped = [[rows[i][n - 1 - j] for i in range(len(rows))] for j in range(n)]
    column_form = _column_hermite_form(MathUtils.integer_domain(flipped)).to_list()
    if len(column_form) != n or any(len(row) != n for row in column_form):
        raise DomainError("generators are rank deficient")
    result = [[int(column_form[n - 1 - k][n - 1 - i]) for k in range(n)] for i in range(n)]
    if any(result[i][i] == 0 for i in range(n)):
        raise DomainError("generators are rank deficient")
    return result


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> Tuple[IntRows, IntRows, IntRows]:
    """Smith form of a nonsingular square integer matrix: M = U S V, U and V unimodular"""
    m = MathUtils.integer_domain(matrix)
    if m.shape[0] != m.shape[1] or m.det() == 0:
        raise DomainError("Smith normal form needs a nonsingular square matrix")
    S, s, t = smith_normal_decomp(m)
    U = MathUtils.inverse(MathUtils.from_domain(s))
    V = MathUtils.inverse(MathUtils.from_domain(t))
    # sympy leaves signs on the diagonal; move them into U
    S_rows = [[int(x) for x in row] for row in S.to_list()]
    for i, row in enumerate(S_rows):
        if row[i] < 0:
            row[i] = -row[i]
            U[:, i] = -U[:, i]
    return MathUtils.integer_rows(U), S_rows, MathUtils.integer_rows(V)


class LocalLatticeData:
    """The class of X_p up to GL_n(Z_p): sorted elementary p-orders"""
    def __init__(self, prime: int, elementary_orders: Sequence[int]):
        self.prime = Prime(prime)
        self.elementary_orders = tuple(sorted(int(e) for e in elementary_orders))

    def is_trivial(self) -> bool:
        return not any(self.elementary_orders)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalLatticeData):
            return NotImplemented
        return (self.prime, self.elementary_orders) == (other.prime, other.elementary_orders)

    def __hash__(self) -> int:
        return hash((self.prime, self.elementary_orders))

    def __repr__(self) -> str:
        return f"LocalLatticeData(prime={int(self.prime)}, elementary_orders={list(self.elementary_orders)})"


class Lattice:
    """Full-rank Z-lattice in Q^n, the row span of scale * hermite.

    hermite is a primitive integer row Hermite form and scale a positive
    rational, so equal lattices have identical fields.
    """
    def __init__(self, scale: Fraction, hermite: Sequence[Sequence[int]]):
        self.scale = to_rational(scale)
        self.hermite = tuple(tuple(int(x) for x in row) for row in hermite)
        self.n = len(self.hermite)
        if self.scale <= 0:
            raise DomainError("lattice scale must be positive")

    @classmethod
    def from_generators(cls, vectors: Sequence[Sequence[RationalLike]], n: Optional[int] = None) -> "Lattice":
        """Canonical lattice spanned by rational row vectors"""
        vectors = [[to_rational(x) for x in v] for v in vectors]
        if n is None:
            n = len(vectors[0]) if vectors else 0
        if n < 1 or any(len(v) != n for v in vectors):
            raise DomainError(f"generators must be vectors of length {n}")
        if len(vectors) < n:
            raise DomainError("generators are rank deficient")
        denominator = math.lcm(*(x.denominator for v in vectors for x in v))
        integer = [[x.numerator * (denominator // x.denominator) for x in v] for v in vectors]
        hermite = hermite_normal_form(integer)
        g = reduce(math.gcd, (x for row in hermite for x in row))
        return cls(Fraction(g, denominator), [[x // g for x in row] for row in hermite])

    @classmethod
    def from_columns(cls, matrix) -> "Lattice":
        """The lattice A Z^n spanned by the columns of A"""
        matrix = MathUtils.as_matrix(matrix)
        return cls.from_generators(matrix.T.tolist(), matrix.shape[0])

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(Fraction(1), MathUtils.integer_rows(MathUtils.identity(n)))

    @property
    def basis(self) -> np.ndarray:
        """Row basis: scale times the Hermite rows"""
        return MathUtils.as_matrix([[self.scale * x for x in row] for row in self.hermite])

    def column_basis(self) -> np.ndarray:
        """Matrix B with B Z^n equal to this lattice"""
        return self.basis.T

    def covolume(self) -> Fraction:
        """|det| of any basis, the index [Z^n : L] when L lies in Z^n"""
        return self.scale ** self.n * math.prod(self.hermite[i][i] for i in range(self.n))

    def localize(self, p: int) -> LocalLatticeData:
        """Elementary p-orders of the lattice"""
        p = Prime(p)
        shift = ord_p(self.scale, p)
        invariants = invariant_factors(MathUtils.integer_domain(self.hermite))
        return LocalLatticeData(p, [ord_p(int(s), p) + shift for s in invariants])

    def contains(self, vector: Sequence[RationalLike]) -> bool:
        """Membership by back-substitution against the basis"""
        row = MathUtils.as_matrix([vector])
        if row.shape[1] != self.n:
            raise DomainError(f"vector must have length {self.n}")
        coordinates = row @ MathUtils.inverse(self.basis)
        return all(Fraction(x).denominator == 1 for x in coordinates.flat)

    def index_in(self, other: "Lattice") -> int:
        """[other : self] for a sublattice"""
        if not all(other.contains(row) for row in self.basis):
            raise DomainError("lattice is not contained in the other lattice")
        index = self.covolume() / other.covolume()
        return index.numerator

    def scaled(self, c: RationalLike) -> "Lattice":
        c = abs(to_rational(c))
        if c == 0:
            raise DomainError("cannot scale a lattice by zero")
        return Lattice(self.scale * c, self.hermite)

    def transformed(self, matrix) -> "Lattice":
        """The image M L under a column-vector linear map"""
        matrix = MathUtils.as_matrix(matrix)
        if MathUtils.determinant(matrix) == 0:
            raise DomainError("matrix is singular")
        return Lattice.from_generators((self.basis @ matrix.T).tolist(), self.n)

    def dual(self) -> "Lattice":
        """{y : x . y in Z for every x in L}"""
        return Lattice.from_generators(MathUtils.inverse(self.basis).T.tolist(), self.n)

    def __add__(self, other: "Lattice") -> "Lattice":
        self._check_dimension(other)
        return Lattice.from_generators(self.basis.tolist() + other.basis.tolist(), self.n)

    def intersect(self, other: "Lattice") -> "Lattice":
        """L1 & L2, as the dual of the sum of the duals"""
        self._check_dimension(other)
        return (self.dual() + other.dual()).dual()

    def _check_dimension(self, other: "Lattice"):
        if self.n != other.n:
            raise DomainError(f"lattices of rank {self.n} and {other.n}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return (self.scale, self.hermite) == (other.scale, other.hermite)

    def __hash__(self) -> int:
        return hash((self.scale, self.hermite))

    def __repr__(self) -> str:
        return f"Lattice(scale={self.scale}, hermite={[list(r) for r in self.hermite]})"


def lattice_from_generators(vectors: Sequence[Sequence[RationalLike]], n: Optional[int] = None) -> Lattice:
    return Lattice.from_generators(vectors, n)


def localize(lattice: Lattice, p: int) -> LocalLatticeData:
    return lattice.localize(p)


def intersect(first: Lattice, second: Lattice) -> Lattice:
    return first.intersect(second)


def local_orders(matrix, p: int) -> LocalLatticeData:
    """Elementary p-orders of A Z_p^n for an invertible rational A"""
    return Lattice.from_columns(prescribed_local_generator(p, matrix)).localize(p)


def prescribed_local_generator(p: int, matrix) -> np.ndarray:
    """H with H Z_p^n = A Z_p^n and H Z_q^n = Z_q^n for every q != p.

    Built from the Smith form of the cleared matrix and returned as the
    column Hermite basis of H Z^n, so entries lie in Z[1/p].
    """
    p = Prime(p)
    matrix = MathUtils.as_matrix(matrix)
    if MathUtils.determinant(matrix) == 0:
        raise DomainError("local matrix is singular")
    m = MathUtils.common_denominator(matrix)
    U, S, _ = smith_normal_form(MathUtils.integer_rows(matrix, m))
    p_part = MathUtils.diagonal([p ** ord_p(S[i][i], p) for i in range(len(S))])
    generator = MathUtils.as_matrix(U) @ p_part * Fraction(1, p ** ord_p(m, p))
    return Lattice.from_columns(generator).column_basis()


def _off_support_primes(support: Sequence[int], count: int = OFF_SUPPORT_CHECKS,
                        seed: int = CHECK_SEED) -> List[int]:
    candidates = [q for q in primerange(2, OFF_SUPPORT_PRIME_BOUND) if q not in support]
    rng = np.random.default_rng(seed)
    return sorted(int(q) for q in rng.choice(candidates, size=min(count, len(candidates)), replace=False))


def check_localizations(lattice: Lattice, data: Mapping[int, np.ndarray], seed: int = CHECK_SEED):
    """Raise InvariantViolation unless L_p = A_p Z_p^n on the support and L_q = Z_q^n
    at a few random primes off it"""
    columns = lattice.column_basis()
    for p, matrix in data.items():
        if not MathUtils.is_p_unimodular(MathUtils.inverse(MathUtils.as_matrix(matrix)) @ columns, p):
            raise InvariantViolation(f"glued lattice has the wrong localization at {p}")
    for q in _off_support_primes(list(data), seed=seed):
        if not MathUtils.is_p_unimodular(columns, q):
            raise InvariantViolation(f"glued lattice is not trivial at {q}")


def glue_local(data: Mapping[int, object], n: Optional[int] = None, verify: bool = True) -> Lattice:
    """The unique lattice X with X_p = A_p Z_p^n on the support and Z_q^n elsewhere.

    Each prescribed local lattice is scaled into Z_p^n by a power of p first;
    those all lie in Z^n, so their intersection localizes correctly, and the
    scaling is undone at the end.
    """
    data = {Prime(p): MathUtils.as_matrix(m) for p, m in sorted(data.items())}
    if not data:
        if n is None:
            raise DomainError("empty local data needs an explicit dimension")
        return Lattice.standard(n)
    dims = {m.shape for m in data.values()}
    if len(dims) != 1 or n is not None and dims != {(n, n)}:
        raise DomainError(f"local matrices have inconsistent shapes {sorted(dims)}")
    glued = None
    unscale = Fraction(1)
    for p, matrix in data.items():
        k = max(0, -MathUtils.min_order(matrix, p))
        local = Lattice.from_columns(prescribed_local_generator(p, matrix * Fraction(p ** k)))
        glued = local if glued is None else glued.intersect(local)
        unscale /= p ** k
        logger.debug("Glued local data at %d (shift %d)", p, k)
    glued = glued.scaled(unscale)
    if verify:
        check_localizations(glued, data)
    return glued


class AdeleMatrix:
    """A finitely supported element of GL_n of the finite adeles.

    support holds A_p at finitely many primes; every other prime sees the
    off-support value, the identity unless a principal value is given.
    Entries equal to what the prime would see anyway are dropped: for the
    identity that means anything in GL_n(Z_p).
    """
    def __init__(self, n: int, support: Optional[Mapping[int, object]] = None, off_support=None):
        self.n = int(n)
        if self.n < 1:
            raise DomainError("adele dimension must be positive")
        self.off_support = MathUtils.identity(self.n) if off_support is None else MathUtils.as_matrix(off_support)
        self._check(self.off_support)
        identity_off = MathUtils.equal(self.off_support, MathUtils.identity(self.n))
        kept: Dict[Prime, np.ndarray] = {}
        for p, matrix in sorted((support or {}).items()):
            p, matrix = Prime(p), MathUtils.as_matrix(matrix)
            self._check(matrix)
            if identity_off and MathUtils.is_p_unimodular(matrix, p):
                continue
            if not identity_off and MathUtils.equal(matrix, self.off_support):
                continue
            kept[p] = matrix
        self.support = kept

    def _check(self, matrix: np.ndarray):
        if matrix.shape != (self.n, self.n):
            raise DomainError(f"adele entries must be {self.n}x{self.n}, got {matrix.shape}")
        if MathUtils.determinant(matrix) == 0:
            raise DomainError("adele entries must be invertible")

    @classmethod
    def identity(cls, n: int) -> "AdeleMatrix":
        return cls(n)

    @classmethod
    def principal(cls, matrix) -> "AdeleMatrix":
        """The same rational matrix at every prime"""
        matrix = MathUtils.as_matrix(matrix)
        return cls(matrix.shape[0], off_support=matrix)

    @property
    def primes(self) -> List[Prime]:
        return list(self.support)

    def is_identity_off_support(self) -> bool:
        return MathUtils.equal(self.off_support, MathUtils.identity(self.n))

    def at(self, p: int) -> np.ndarray:
        """The matrix seen at p"""
        return self.support.get(Prime(p), self.off_support)

    def __mul__(self, other: "AdeleMatrix") -> "AdeleMatrix":
        if self.n != other.n:
            raise DomainError("adeles of different dimension")
        primes = set(self.support) | set(other.support)
        return AdeleMatrix(self.n, {p: self.at(p) @ other.at(p) for p in primes},
                           self.off_support @ other.off_support)

    def inverse(self) -> "AdeleMatrix":
        return AdeleMatrix(self.n, {p: MathUtils.inverse(m) for p, m in self.support.items()},
                           MathUtils.inverse(self.off_support))

    def is_stabilizer_at(self, p: int) -> bool:
        """A_p lies in GL_n(Z_p)"""
        return MathUtils.is_p_unimodular(self.at(p), p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdeleMatrix):
            return NotImplemented
        if self.n != other.n or set(self.support) != set(other.support):
            return False
        return MathUtils.equal(self.off_support, other.off_support) and all(
            MathUtils.equal(m, other.support[p]) for p, m in self.support.items())

    def __repr__(self) -> str:
        support = {int(p): MathUtils.to_strings(m) for p, m in self.support.items()}
        return f"AdeleMatrix(n={self.n}, support={support})"


def act(adele: AdeleMatrix, lattice: Lattice) -> Lattice:
    """The lattice whose localization at every p is A_p L_p"""
    if adele.n != lattice.n:
        raise DomainError(f"adele of dimension {adele.n} acting on a rank {lattice.n} lattice")
    principal = adele.off_support
    if not adele.is_identity_off_support():
        inner = AdeleMatrix.principal(MathUtils.inverse(principal)) * adele
        return act(inner, lattice).transformed(principal)
    if not adele.support:
        return lattice
    basis = lattice.column_basis()
    basis_inverse = MathUtils.inverse(basis)
    relative = {p: basis_inverse @ m @ basis for p, m in adele.support.items()}
    glued = glue_local(relative, lattice.n)
    return Lattice.from_columns(basis @ glued.column_basis())


def adelic_factorize(adele: AdeleMatrix) -> Tuple[AdeleMatrix, np.ndarray]:
    """Write A = C B with C in GL_n(Z_p) at every prime and B rational.

    B^-1 Z^n = A^-1 . Z^n determines B up to a left unimodular factor; the
    Hermite basis fixes it.
    """
    n = adele.n
    target = act(adele.inverse(), Lattice.standard(n))
    B_inverse = target.column_basis()
    B = MathUtils.inverse(B_inverse)
    C = AdeleMatrix(n, {p: m @ B_inverse for p, m in adele.support.items()}, adele.off_support @ B_inverse)
    for p in C.primes:
        if not C.is_stabilizer_at(p):
            raise InvariantViolation(f"factor C is not integral unimodular at {p}")
    logger.info("Factorized adele supported at %s", [int(p) for p in adele.primes])
    return C, B
