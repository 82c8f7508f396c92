# math_utils.py
"""Exact matrix utilities over the rationals"""
import math
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .exceptions import DomainError
from .number_theory import RationalLike, ord_p, to_rational

FrozenMatrix = Tuple[Tuple[Fraction, ...], ...]


class MathUtils:
    """Exact matrix utilities; matrices are numpy object arrays of Fraction"""

    @staticmethod
    def as_matrix(rows: Iterable[Iterable[RationalLike]]) -> np.ndarray:
        """Build an object-dtype matrix of Fractions from nested rows"""
        data = [[to_rational(x) for x in row] for row in rows]
        if not data or any(len(row) != len(data[0]) for row in data):
            raise DomainError("matrix rows must be nonempty and of equal length")
        matrix = np.empty((len(data), len(data[0])), dtype=object)
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                matrix[i, j] = x
        return matrix

    @staticmethod
    def parse_matrix(rows: Sequence[Sequence]) -> np.ndarray:
        """Parse a JSON-style square matrix whose entries are ints or 'a/b' strings"""
        try:
            matrix = MathUtils.as_matrix(rows)
        except (TypeError, DomainError) as e:
            raise DomainError(f"invalid matrix {rows!r}: {e}") from e
        if matrix.shape[0] != matrix.shape[1]:
            raise DomainError(f"matrix must be square, got shape {matrix.shape}")
        return matrix

    @staticmethod
    def identity(n: int) -> np.ndarray:
        """n x n identity"""
        return MathUtils.diagonal([1] * n)

    @staticmethod
    def diagonal(entries: Sequence[RationalLike]) -> np.ndarray:
        """Diagonal matrix with the given entries"""
        n = len(entries)
        return MathUtils.as_matrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def freeze(matrix: np.ndarray) -> FrozenMatrix:
        """Hashable tuple-of-tuples copy"""
        return tuple(tuple(Fraction(x) for x in row) for row in matrix)

    @staticmethod
    def equal(a: np.ndarray, b: np.ndarray) -> bool:
        """Exact entrywise equality"""
        return a.shape == b.shape and MathUtils.freeze(a) == MathUtils.freeze(b)

    @staticmethod
    def common_denominator(matrix: np.ndarray) -> int:
        """Least common multiple of the entry denominators"""
        return math.lcm(*(Fraction(x).denominator for x in matrix.flat))

    @staticmethod
    def integer_rows(matrix: np.ndarray, scale: int = 1) -> list:
        """Rows of scale * matrix as Python ints; scale must clear denominators"""
        rows = []
        for row in matrix:
            values = [Fraction(x) * scale for x in row]
            if any(v.denominator != 1 for v in values):
                raise DomainError("scale does not clear the denominators")
            rows.append([v.numerator for v in values])
        return rows

    @staticmethod
    def to_domain(matrix: np.ndarray) -> DomainMatrix:
        """Convert to a sympy DomainMatrix over QQ"""
        rows = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in matrix]
        return DomainMatrix(rows, matrix.shape, QQ)

    @staticmethod
    def integer_domain(rows: Sequence[Sequence[int]]) -> DomainMatrix:
        """Convert integer rows to a sympy DomainMatrix over ZZ"""
        return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), len(rows[0])), ZZ)

    @staticmethod
    def from_domain(matrix: DomainMatrix) -> np.ndarray:
        """Convert a DomainMatrix over ZZ or QQ back to a Fraction matrix"""
        # ZZ and QQ elements (int, mpz, PythonMPQ, mpq) all expose numerator/denominator
        rows = [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in matrix.to_list()]
        return MathUtils.as_matrix(rows)

    @staticmethod
    def determinant(matrix: np.ndarray) -> Fraction:
        """Exact determinant via fraction-free elimination over ZZ"""
        n = matrix.shape[0]
        if matrix.shape != (n, n):
            raise DomainError("determinant of a non-square matrix")
        denominator = MathUtils.common_denominator(matrix)
        det = MathUtils.integer_domain(MathUtils.integer_rows(matrix, denominator)).det()
        return Fraction(int(det), denominator ** n)

    @staticmethod
    def inverse(matrix: np.ndarray) -> np.ndarray:
        """Exact inverse; singular input raises DomainError"""
        if MathUtils.determinant(matrix) == 0:
            raise DomainError("matrix is singular")
        return MathUtils.from_domain(MathUtils.to_domain(matrix).inv())

    @staticmethod
    def min_order(matrix: np.ndarray, p: int):
        """Smallest p-adic valuation among the entries (math.inf for zero)"""
        return min(ord_p(x, p) for x in matrix.flat)

    @staticmethod
    def is_p_integral(matrix: np.ndarray, p: int) -> bool:
        """All entries have nonnegative p-adic valuation"""
        return MathUtils.min_order(matrix, p) >= 0

    @staticmethod
    def is_p_unimodular(matrix: np.ndarray, p: int) -> bool:
        """p-integral with p-unit determinant, i.e. in GL_n(Z_p)"""
        return MathUtils.is_p_integral(matrix, p) and ord_p(MathUtils.determinant(matrix), p) == 0

    @staticmethod
    def to_strings(matrix: np.ndarray) -> list:
        """Nested lists of decimal strings ('a' or 'a/b') for lossless output"""
        return [[str(Fraction(x)) for x in row] for row in matrix]
