# pipeline.py
"""Global minimal models: local minimization at every bad prime, glued into one conjugator"""
import logging
import math
from typing import Dict, List, Tuple, Union

from .exceptions import DomainError, InvariantViolation
from .lattice import AdeleMatrix, adelic_factorize
from .map_model import HomogeneousLift, Model
from .math_utils import MathUtils
from .number_theory import Prime, content_and_primitive, ord_p
from .reduction import DEFAULT_RADIUS, LocalModelSearchResult, bad_primes, content_normalize, minimize_local
from .resultant import resultant

logger = logging.getLogger(__name__)


class ReductionReportRow:
    """One bad prime: valuations before and after the local search"""
    def __init__(self, prime: int, input_valuation: int, best_valuation: int, radius_exhausted: bool):
        self.prime = Prime(prime)
        self.input_valuation = input_valuation
        self.best_valuation = best_valuation
        self.radius_exhausted = radius_exhausted

    @property
    def good_reduction(self) -> bool:
        return self.best_valuation == 0

    def to_dict(self) -> dict:
        return {
            "prime": int(self.prime),
            "input_valuation": self.input_valuation,
            "best_valuation": self.best_valuation,
            "good_reduction": self.good_reduction,
            "radius_exhausted": self.radius_exhausted,
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReductionReportRow):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"ReductionReportRow({self.to_dict()})"


class ReductionReport:
    """Per-prime table for one map at one search radius, ascending by prime"""
    def __init__(self, rows: List[ReductionReportRow], radius: int):
        self.rows = sorted(rows, key=lambda row: row.prime)
        self.radius = radius

    @classmethod
    def from_searches(cls, searches: Dict[Prime, LocalModelSearchResult], radius: int) -> "ReductionReport":
        rows = [ReductionReportRow(p, r.start_valuation, r.valuation, r.radius_exhausted)
                for p, r in searches.items()]
        return cls(rows, radius)

    @property
    def primes(self) -> List[Prime]:
        return [row.prime for row in self.rows]

    def all_good(self) -> bool:
        return all(row.good_reduction for row in self.rows)

    def minimal_resultant(self) -> int:
        """prod p^best_valuation over the rows"""
        return math.prod(int(row.prime) ** row.best_valuation for row in self.rows)

    def to_list(self) -> List[dict]:
        return [row.to_dict() for row in self.rows]

    def __repr__(self) -> str:
        return f"ReductionReport(radius={self.radius}, rows={self.rows})"


class NoUnitModelFound:
    """Returned when some bad prime kept a positive valuation within the radius"""
    def __init__(self, report: ReductionReport, model: Model):
        self.report = report
        self.model = model

    def __repr__(self) -> str:
        return f"NoUnitModelFound({self.report})"


def minimal_resultant(report: ReductionReport) -> int:
    return report.minimal_resultant()


def _check_morphism(lift: HomogeneousLift):
    if resultant(lift) == 0:
        raise DomainError("lift is not a morphism")


def _local_searches(normalized: HomogeneousLift, radius: int) -> Dict[Prime, LocalModelSearchResult]:
    searches = {}
    for p in bad_primes(normalized):
        logger.info("Minimizing at p=%d, radius %d", p, radius)
        searches[p] = minimize_local(normalized, p, radius)
        logger.info("p=%d: valuation %d -> %d", p, searches[p].start_valuation, searches[p].valuation)
    return searches


def reduction_report(lift: HomogeneousLift, radius: int = DEFAULT_RADIUS) -> ReductionReport:
    """Local search table without gluing"""
    _check_morphism(lift)
    return ReductionReport.from_searches(_local_searches(content_normalize(lift), radius), radius)


def global_minimal_model(lift: HomogeneousLift, radius: int = DEFAULT_RADIUS) -> Tuple[Model, ReductionReport]:
    """One integral model with the best local valuation found at every bad prime.

    The local conjugators A_p form an adele; its factorization A = C B gives
    the rational conjugator B, with A_p B^-1 in GL_n(Z_p) at every prime.
    """
    _check_morphism(lift)
    n = lift.num_vars
    input_content, _ = content_and_primitive(lift.coefficients())
    normalized = lift.scale(1 / input_content)
    searches = _local_searches(normalized, radius)
    report = ReductionReport.from_searches(searches, radius)
    adele = AdeleMatrix(n, {p: r.model.conjugator for p, r in searches.items()})
    _, conjugator = adelic_factorize(adele)
    conjugator_inverse = MathUtils.inverse(conjugator)
    for p, search in searches.items():
        if not MathUtils.is_p_unimodular(search.model.conjugator @ conjugator_inverse, p):
            raise InvariantViolation(f"local conjugator at {p} is not a unit multiple of the global one")
    conjugated = normalized.conjugate(conjugator)
    content, _ = content_and_primitive(conjugated.coefficients())
    model = Model(conjugated.scale(1 / content), conjugator, 1 / (content * input_content), lift)
    value = resultant(model.lift)
    for p, search in searches.items():
        if ord_p(value, p) != search.valuation:
            raise InvariantViolation(
                f"glued model has valuation {ord_p(value, p)} at {p}, local search found {search.valuation}")
    if abs(value) != report.minimal_resultant():
        raise InvariantViolation(f"glued resultant {value} has primes outside {report.primes}")
    logger.info("Global model has resultant %s", value)
    return model, report


def everywhere_good_reduction_model(lift: HomogeneousLift,
                                    radius: int = DEFAULT_RADIUS) -> Union[Model, NoUnitModelFound]:
    """The global model when its resultant is a unit, else NoUnitModelFound"""
    model, report = global_minimal_model(lift, radius)
    if not report.all_good():
        return NoUnitModelFound(report, model)
    if abs(resultant(model.lift)) != 1:
        raise InvariantViolation("all primes good but the resultant is not a unit")
    return model
