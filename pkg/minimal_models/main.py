# main.py
"""Command-line entry point"""
import argparse
import logging
import sys
from typing import List, Optional, TextIO

from .exceptions import BudgetError, DomainError
from .lattice import adelic_factorize, glue_local
from .map_parser import MapParser
from .pipeline import NoUnitModelFound, everywhere_good_reduction_model, global_minimal_model, reduction_report
from .reduction import DEFAULT_RADIUS, bad_primes, minimize_local
from .report_renderer import ReportRenderer, json_number
from .resultant import is_morphism, resultant

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_BUDGET = 2
EXIT_NO_UNIT_MODEL = 3
EXIT_USAGE = 64


class UsageError(Exception):
    """Bad command line; argparse has already printed the usage"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="minmodel", description="Resultants, reduction and minimal models of maps of P^N over Q")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for search detail")
    common = _ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured JSON output")
    searching = _ArgumentParser(add_help=False)
    searching.add_argument("--radius", type=int, default=DEFAULT_RADIUS, help="neighbor-move search radius")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True
    for name, help_text in (("res", "resultant of the map"), ("morphism", "whether the map is a morphism"),
                            ("badprimes", "primes dividing the normalized resultant")):
        commands.add_parser(name, parents=[common], help=help_text).add_argument("file")
    minimize = commands.add_parser("minimize", parents=[common, searching], help="local minimal model at one prime")
    minimize.add_argument("file")
    minimize.add_argument("-p", "--prime", type=int, required=True)
    gmm = commands.add_parser("gmm", parents=[common, searching], help="global minimal model")
    gmm.add_argument("file")
    gmm.add_argument("--emit-map", action="store_true", help="print the model as a map file")
    for name, help_text in (("egr", "model with unit resultant, if one is found"),
                            ("report", "per-prime reduction table")):
        commands.add_parser(name, parents=[common, searching], help=help_text).add_argument("file")
    commands.add_parser("glue", parents=[common], help="lattice with prescribed localizations").add_argument("spec")
    commands.add_parser("factorize", parents=[common], help="split an adele as C B").add_argument("spec")
    return parser


def _emit(out: TextIO, args, doc, text: str):
    out.write(ReportRenderer.dumps(doc) if args.json else text)


def _run_command(args, out: TextIO) -> int:
    logger.debug("Running %s", args.command)
    if args.command in ("glue", "factorize"):
        if args.command == "glue":
            n, data = MapParser.load_local_data(args.spec)
            lattice = glue_local(data, n)
            _emit(out, args, ReportRenderer.lattice_json(lattice), ReportRenderer.matrix_text(lattice.basis))
        else:
            C, B = adelic_factorize(MapParser.load_adele(args.spec))
            doc = {"C": ReportRenderer.adele_json(C), "B": [[json_number(x) for x in row] for row in B]}
            _emit(out, args, doc, ReportRenderer.factorization_text(C, B))
        return EXIT_OK
    lift = MapParser.load_model(args.file)
    if args.command == "res":
        value = resultant(lift)
        _emit(out, args, {"resultant": json_number(value)}, f"{value}\n")
    elif args.command == "morphism":
        value = is_morphism(lift)
        _emit(out, args, {"morphism": value}, f"{'true' if value else 'false'}\n")
    elif args.command == "badprimes":
        primes = [int(p) for p in bad_primes(lift)]
        _emit(out, args, {"bad_primes": primes}, (" ".join(map(str, primes)) or "(none)") + "\n")
    elif args.command == "minimize":
        result = minimize_local(lift, args.prime, args.radius)
        _emit(out, args, ReportRenderer.search_json(result), ReportRenderer.search_text(result))
    elif args.command == "gmm":
        model, report = global_minimal_model(lift, args.radius)
        if args.emit_map:
            out.write(MapParser.render_map(model.lift))
        else:
            doc = {"model": ReportRenderer.model_json(model), "report": ReportRenderer.report_json(report)}
            _emit(out, args, doc, ReportRenderer.model_text(model) + ReportRenderer.report_text(report))
    elif args.command == "egr":
        found = everywhere_good_reduction_model(lift, args.radius)
        if isinstance(found, NoUnitModelFound):
            doc = {"model": None, "report": ReportRenderer.report_json(found.report)}
            _emit(out, args, doc, "no unit-resultant model found\n" + ReportRenderer.report_text(found.report))
            return EXIT_NO_UNIT_MODEL
        _emit(out, args, {"model": ReportRenderer.model_json(found)}, ReportRenderer.model_text(found))
    elif args.command == "report":
        report = reduction_report(lift, args.radius)
        _emit(out, args, ReportRenderer.report_json(report), ReportRenderer.report_text(report))
    return EXIT_OK


def run(argv: List[str], out: Optional[TextIO] = None) -> int:
    """Parse argv, dispatch, and return the exit code"""
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)
    try:
        return _run_command(args, out)
    except (DomainError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DOMAIN
    except BudgetError as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET


def main():
    """Console script entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
