# exceptions.py
"""Error types raised by the library and mapped to CLI exit codes"""


class MinimalModelError(Exception):
    """Base class for all library errors"""


class DomainError(MinimalModelError, ValueError):
    """A precondition on the mathematical input does not hold"""


class MapParseError(DomainError):
    """A map or adele file could not be understood"""
    def __init__(self, message: str, term: str = ""):
        super().__init__(message)
        self.term = term


class BudgetError(MinimalModelError):
    """A bounded computation ran out of budget before reaching an answer"""


class UnfactoredCofactorError(BudgetError):
    """Factorization gave up on a composite cofactor"""
    def __init__(self, cofactor: int, partial=None):
        super().__init__(f"could not factor cofactor {cofactor} within budget")
        self.cofactor = cofactor
        self.partial = dict(partial or {})


class DegenerateSpecializationError(BudgetError):
    """The Macaulay quotient stayed 0/0 after every unimodular retry"""
    def __init__(self, retries: int):
        super().__init__(f"Macaulay quotient degenerate after {retries} retries")
        self.retries = retries


class InvariantViolation(MinimalModelError, AssertionError):
    """An internal audit check failed"""
