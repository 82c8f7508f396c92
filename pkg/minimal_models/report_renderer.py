# report_renderer.py
"""Renders reports, models, lattices and adeles as text tables and JSON documents"""
import json
from fractions import Fraction
from typing import List, Union

import numpy as np

from .lattice import AdeleMatrix, Lattice
from .map_model import Model
from .map_parser import MapParser
from .math_utils import MathUtils
from .pipeline import ReductionReport
from .reduction import LocalModelSearchResult
from .resultant import resultant

INT64_LIMIT = 2 ** 63
REPORT_COLUMNS = ("prime", "input_valuation", "best_valuation", "reduction", "radius_exhausted")


def json_number(value: Union[int, Fraction]) -> Union[int, str]:
    """Integers that fit in 64 bits stay numbers; larger ones and fractions become strings"""
    value = Fraction(value)
    if value.denominator == 1 and -INT64_LIMIT <= value.numerator < INT64_LIMIT:
        return value.numerator
    return str(value)


def json_matrix(matrix: np.ndarray) -> List[list]:
    return [[json_number(x) for x in row] for row in matrix]


class ReportRenderer:
    """Text and JSON views; JSON output is deterministic (sorted keys, fixed indent)"""
    @staticmethod
    def dumps(doc) -> str:
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def report_text(report: ReductionReport) -> str:
        """Fixed-width table with one row per bad prime"""
        if not report.rows:
            return "(no bad primes)\n"
        cells = [list(REPORT_COLUMNS)]
        for row in report.rows:
            cells.append([
                str(int(row.prime)),
                str(row.input_valuation),
                str(row.best_valuation),
                "good" if row.good_reduction else "bad",
                "yes" if row.radius_exhausted else "no",
            ])
        widths = [max(len(line[i]) for line in cells) for i in range(len(REPORT_COLUMNS))]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip() for line in cells]
        return "\n".join(lines) + "\n"

    @staticmethod
    def report_json(report: ReductionReport) -> dict:
        return {
            "radius": report.radius,
            "rows": report.to_list(),
            "minimal_resultant": json_number(report.minimal_resultant()),
        }

    @staticmethod
    def model_json(model: Model) -> dict:
        lift = model.lift
        return {
            "N": lift.N,
            "d": lift.d,
            "coords": list(lift.coords),
            "forms": [MapParser.render_form(form, lift.coords) for form in lift.forms],
            "resultant": json_number(resultant(lift)),
            "conjugator": json_matrix(model.conjugator),
            "scalar": json_number(model.scalar),
        }

    @staticmethod
    def model_text(model: Model) -> str:
        lift = model.lift
        lines = [f"{name}' = {MapParser.render_form(form, lift.coords)}"
                 for name, form in zip(lift.coords, lift.forms)]
        lines.append(f"resultant: {resultant(lift)}")
        lines.append(f"conjugator: {MathUtils.to_strings(model.conjugator)}")
        lines.append(f"scalar: {model.scalar}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def search_json(result: LocalModelSearchResult) -> dict:
        return {
            "prime": int(result.prime),
            "valuation": result.valuation,
            "input_valuation": result.start_valuation,
            "radius_exhausted": result.radius_exhausted,
            "visited": result.visited,
            "model": ReportRenderer.model_json(result.model),
        }

    @staticmethod
    def search_text(result: LocalModelSearchResult) -> str:
        header = (f"prime {int(result.prime)}: valuation {result.start_valuation} -> {result.valuation}"
                  f" ({result.visited} classes, radius exhausted: {'yes' if result.radius_exhausted else 'no'})\n")
        return header + ReportRenderer.model_text(result.model)

    @staticmethod
    def matrix_text(matrix: np.ndarray) -> str:
        strings = MathUtils.to_strings(matrix)
        width = max(len(s) for row in strings for s in row)
        return "\n".join("  ".join(s.rjust(width) for s in row) for row in strings) + "\n"

    @staticmethod
    def lattice_json(lattice: Lattice) -> dict:
        return {"basis": json_matrix(lattice.basis), "scale": json_number(lattice.scale)}

    @staticmethod
    def adele_json(adele: AdeleMatrix) -> dict:
        return {
            "n": adele.n,
            "support": [{"prime": int(p), "matrix": json_matrix(m)} for p, m in adele.support.items()],
            "off_support": json_matrix(adele.off_support),
        }

    @staticmethod
    def factorization_text(C: AdeleMatrix, B: np.ndarray) -> str:
        parts = []
        for p, matrix in C.support.items():
            parts.append(f"C at {int(p)}:\n" + ReportRenderer.matrix_text(matrix))
        parts.append("C elsewhere:\n" + ReportRenderer.matrix_text(C.off_support))
        parts.append("B:\n" + ReportRenderer.matrix_text(B))
        return "".join(parts)
