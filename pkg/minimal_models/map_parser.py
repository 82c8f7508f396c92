# map_parser.py
"""Parser and writer for map files and adele spec files"""
import json
import keyword
import logging
import re
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Mul, Poly, Rational, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ

from .exceptions import DomainError, MapParseError
from .lattice import AdeleMatrix
from .map_model import Exponent, Form, HomogeneousLift, default_coords
from .math_utils import MathUtils
from .number_theory import Prime

logger = logging.getLogger(__name__)

TRANSFORMATIONS = standard_transformations + (convert_xor,)
FORM_TOKEN = re.compile(
    r"(?P<space>\s+)|(?P<integer>[0-9]+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<operator>[-+*/^()])|(?P<bad>.)",
    re.DOTALL)


class MapParser:
    """Parser for map files: JSON with N, d, coords and polynomial strings"""
    @staticmethod
    def load_model(file_path: str) -> HomogeneousLift:
        """Load a homogeneous lift from a map file"""
        with open(file_path, encoding="utf-8") as handle:
            lift = MapParser.parse_map(handle.read())
        logger.info("Loaded map of degree %d on P^%d from %s", lift.d, lift.N, file_path)
        return lift

    @staticmethod
    def parse_map(text: str) -> HomogeneousLift:
        """Parse the map file format into a HomogeneousLift"""
        doc = MapParser._load_json(text)
        forms = doc.get("forms")
        if not isinstance(forms, list) or not all(isinstance(f, str) for f in forms):
            raise MapParseError("'forms' must be a list of polynomial strings", "forms")
        coords = doc.get("coords", default_coords(len(forms)))
        if not isinstance(coords, list) or len(coords) != len(forms):
            raise MapParseError(f"'coords' must list {len(forms)} variable names", "coords")
        if not all(MapParser._is_coordinate_name(c) for c in coords) or len(set(coords)) != len(coords):
            raise MapParseError(f"invalid coordinate names {coords}", "coords")
        if "N" in doc and doc["N"] != len(forms) - 1:
            raise MapParseError(f"N = {doc['N']} but {len(forms)} forms given", "N")
        symbols = [Symbol(c) for c in coords]
        term_maps = []
        degrees = []
        for text_form in forms:
            terms, degree = MapParser._parse_form(text_form, symbols)
            term_maps.append(terms)
            if degree is not None:
                degrees.append(degree)
        declared = doc.get("d")
        if declared is not None and (not isinstance(declared, int) or declared < 1):
            raise MapParseError(f"degree must be a positive integer, got {declared!r}", "d")
        reference = declared if declared is not None else (degrees[0] if degrees else None)
        if reference is None:
            raise MapParseError("all forms are zero", "forms")
        for degree in degrees:
            if degree != reference:
                raise MapParseError(f"degree mismatch {reference} vs {degree}", "d")
        if reference < 1:
            raise MapParseError("degree 0 maps are not accepted", "d")
        try:
            return HomogeneousLift.from_terms(reference, term_maps, coords)
        except DomainError as e:
            raise MapParseError(str(e)) from e

    @staticmethod
    def _load_json(text: str) -> dict:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise MapParseError(f"not a JSON document: {e}") from e
        if not isinstance(doc, dict):
            raise MapParseError("top level must be a JSON object")
        return doc

    @staticmethod
    def _parse_form(text: str, symbols: List[Symbol]) -> Tuple[Dict[Exponent, Fraction], Optional[int]]:
        """Parse one polynomial string; returns its terms and degree (None for 0)"""
        local = {s.name: s for s in symbols}
        MapParser._check_tokens(text, local)
        try:
            expr = parse_expr(text, local_dict=local, transformations=TRANSFORMATIONS)
        except Exception as e:
            raise MapParseError(f"cannot parse form {text!r}: {e}", text) from e
        try:
            poly = Poly(expr, *symbols, domain=QQ)
        except Exception as e:
            raise MapParseError(f"{text!r} is not a polynomial: {e}", text) from e
        terms = {tuple(m): Fraction(int(c.numerator), int(c.denominator))
                 for m, c in poly.terms() if c != 0}
        if not terms:
            return {}, None
        degree = max(sum(m) for m in terms)
        for monom, coeff in terms.items():
            if sum(monom) != degree:
                term = str(Rational(coeff.numerator, coeff.denominator)
                           * Mul(*(s ** e for s, e in zip(symbols, monom))))
                raise MapParseError(f"{text!r} is not homogeneous: term {term}", term)
        return terms, degree

    @staticmethod
    def _is_coordinate_name(name) -> bool:
        if not isinstance(name, str) or keyword.iskeyword(name):
            return False
        match = FORM_TOKEN.fullmatch(name)
        return match is not None and match.lastgroup == "name"

    @staticmethod
    def _check_tokens(text: str, names: Dict[str, Symbol]):
        """Reject every token but integers, coordinates, + - * / ^ and parentheses.

        parse_expr evaluates its input, so nothing else may reach it.
        """
        for match in FORM_TOKEN.finditer(text):
            kind, token = match.lastgroup, match.group()
            if kind in ("space", "integer", "operator"):
                continue
            if kind == "name":
                if token not in names:
                    raise MapParseError(f"unknown variable {token} in {text!r}", token)
                continue
            raise MapParseError(f"unexpected character {token!r} in {text!r}", token)

    @staticmethod
    def render_form(form: Form, coords: Sequence[str]) -> str:
        """Write a form with ^ powers and exact rational coefficients"""
        if form.is_zero():
            return "0"
        pieces = []
        for exponent, coeff in form.terms.items():
            factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(coords, exponent) if e]
            magnitude = abs(coeff)
            if magnitude != 1:
                factors.insert(0, str(magnitude))
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, "*".join(factors)))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    @staticmethod
    def render_map(lift: HomogeneousLift) -> str:
        """Write a lift in the map file format; parse_map(render_map(lift)) == lift"""
        doc = {
            "N": lift.N,
            "d": lift.d,
            "coords": list(lift.coords),
            "forms": [MapParser.render_form(form, lift.coords) for form in lift.forms],
        }
        return json.dumps(doc, indent=2) + "\n"

    @staticmethod
    def load_local_data(file_path: str) -> Tuple[int, Dict[Prime, np.ndarray]]:
        """Load an adele spec file as (n, {prime: matrix})"""
        with open(file_path, encoding="utf-8") as handle:
            return MapParser.parse_local_data(handle.read())

    @staticmethod
    def parse_local_data(text: str) -> Tuple[int, Dict[Prime, np.ndarray]]:
        """Parse {"n": n, "support": [{"prime": p, "matrix": [[...]]}, ...]}"""
        doc = MapParser._load_json(text)
        n = doc.get("n")
        if not isinstance(n, int) or n < 1:
            raise MapParseError("'n' must be a positive integer", "n")
        support = doc.get("support", [])
        if not isinstance(support, list):
            raise MapParseError("'support' must be a list", "support")
        data: Dict[Prime, np.ndarray] = {}
        for entry in support:
            try:
                p = Prime(entry["prime"])
                matrix = MathUtils.parse_matrix(entry["matrix"])
            except (KeyError, TypeError) as e:
                raise MapParseError(f"support entries need 'prime' and 'matrix': {entry!r}", "support") from e
            except DomainError as e:
                raise MapParseError(str(e), "support") from e
            if matrix.shape != (n, n):
                raise MapParseError(f"matrix at {p} must be {n}x{n}", str(int(p)))
            if p in data:
                raise MapParseError(f"prime {p} listed twice", str(int(p)))
            data[p] = matrix
        return n, dict(sorted(data.items()))

    @staticmethod
    def load_adele(file_path: str) -> AdeleMatrix:
        """Load an adele spec file as an AdeleMatrix, identity off the support"""
        n, data = MapParser.load_local_data(file_path)
        return AdeleMatrix(n, data)

    @staticmethod
    def parse_adele(text: str) -> AdeleMatrix:
        n, data = MapParser.parse_local_data(text)
        return AdeleMatrix(n, data)
