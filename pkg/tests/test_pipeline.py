from fractions import Fraction
from pathlib import Path

import pytest

from minimal_models.exceptions import DomainError
from minimal_models.map_model import HomogeneousLift
from minimal_models.map_parser import MapParser
from minimal_models.math_utils import MathUtils
from minimal_models.number_theory import content_and_primitive
from minimal_models.pipeline import (
    NoUnitModelFound,
    ReductionReportRow,
    everywhere_good_reduction_model,
    global_minimal_model,
    minimal_resultant,
    reduction_report,
)
from minimal_models.resultant import resultant

FIXTURES = Path(__file__).resolve().parent.parent / "minimal_models" / "fixtures"


def _fixture(name):
    return MapParser.load_model(str(FIXTURES / name))


def _lift(d, *term_maps):
    return HomogeneousLift.from_terms(d, term_maps)


@pytest.mark.parametrize("name, primes", [
    ("squares.json", []),
    ("sum_of_squares.json", [2]),
    ("diagonal_9_4.json", [2, 3]),
    ("diagonal_1_4.json", [2]),
    ("plane_squares.json", [2]),
])
def test_global_minimal_model_reaches_a_unit_resultant(name, primes):
    lift = _fixture(name)
    model, report = global_minimal_model(lift)
    assert report.primes == primes
    assert report.all_good()
    assert abs(resultant(model.lift)) == 1
    assert content_and_primitive(model.lift.coefficients())[0] == 1
    assert model.base == lift
    model.verify()


def test_global_minimal_model_of_a_good_map_is_itself():
    lift = _fixture("squares.json")
    model, report = global_minimal_model(lift)
    assert model.lift == lift
    assert MathUtils.equal(model.conjugator, MathUtils.identity(2))
    assert report.rows == [] and report.minimal_resultant() == 1


def test_global_minimal_model_is_idempotent():
    model, _ = global_minimal_model(_fixture("diagonal_9_4.json"))
    again, report = global_minimal_model(model.lift)
    assert again.lift == model.lift
    assert report.rows == []


def test_global_minimal_model_ignores_the_input_scaling():
    lift = _fixture("diagonal_9_4.json")
    model, _ = global_minimal_model(lift)
    scaled, _ = global_minimal_model(lift.scale(Fraction(-2, 7)))
    assert scaled.lift == model.lift
    assert scaled.scalar == model.scalar * Fraction(-7, 2)
    scaled.verify()


def test_reduction_report_rows():
    report = reduction_report(_fixture("diagonal_9_4.json"))
    assert report.rows == [ReductionReportRow(2, 4, 0, False), ReductionReportRow(3, 4, 0, False)]
    assert report.to_list()[0] == {
        "prime": 2, "input_valuation": 4, "best_valuation": 0, "good_reduction": True, "radius_exhausted": False,
    }
    assert minimal_resultant(report) == 1


def test_stubborn_map_keeps_a_bad_prime():
    lift = _fixture("stubborn_at_2.json")
    found = everywhere_good_reduction_model(lift, radius=2)
    assert isinstance(found, NoUnitModelFound)
    assert found.report.rows == [ReductionReportRow(2, 4, 2, True)]
    assert minimal_resultant(found.report) == 4
    assert abs(resultant(found.model.lift)) == 4
    found.model.verify()


def test_everywhere_good_reduction_model_returns_the_model():
    model = everywhere_good_reduction_model(_fixture("sum_of_squares.json"))
    assert not isinstance(model, NoUnitModelFound)
    assert abs(resultant(model.lift)) == 1


def test_plane_map_glues_a_three_dimensional_conjugator():
    model, report = global_minimal_model(_lift(2, {(2, 0, 0): 1}, {(0, 2, 0): 1}, {(0, 0, 2): 2}))
    assert report.rows == [ReductionReportRow(2, 4, 0, False)]
    assert model.conjugator.shape == (3, 3)
    assert abs(resultant(model.lift)) == 1


def test_non_morphisms_are_rejected():
    lift = _fixture("not_morphism.json")
    for run in (global_minimal_model, reduction_report, everywhere_good_reduction_model):
        with pytest.raises(DomainError):
            run(lift)


@pytest.mark.parametrize("name, radius", [("sum_of_squares.json", 1), ("diagonal_1_4.json", 2)])
def test_smallest_radius_that_reaches_a_unit(name, radius):
    model, report = global_minimal_model(_fixture(name), radius)
    assert report.all_good()
    assert abs(resultant(model.lift)) == 1
