"""The ``fqgauss`` command line interface"""
import argparse
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

from . import Workbench, exceptions, report, sweeps, tools
from .enums import ExitCode, Family, GaussKind, OutputFormat, Quantity, WeilQuantity

logger = logging.getLogger("fqgauss.cli")

_INVALID_INPUT = (
    exceptions.FormSyntaxError,
    exceptions.InvalidParameterError,
    exceptions.WordSyntaxError,
    exceptions.DegenerateFormError,
    exceptions.StructureError,
    ValueError,
)

_RESOURCE_CAP = (exceptions.EnumerationCapError, exceptions.SearchBudgetExceeded)


def _integer_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _quantity_list(text: str) -> List[Quantity]:
    try:
        return [Quantity(item.strip()) for item in text.split(",") if item.strip()]
    except ValueError:
        choices = ",".join(quantity.value for quantity in Quantity)
        raise argparse.ArgumentTypeError(f"expected a list out of {choices}, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fqgauss",
        description="Equivariant Gauss sums of finite quadratic forms: enumeration, closed "
        "formulas, verification sweeps and the Weil representation",
    )
    parser.add_argument(
        "--format",
        choices=[output_format.value for output_format in OutputFormat],
        default=OutputFormat.TEXT.value,
        help="Output format (default: text)",
    )
    parser.add_argument("--max-order", type=int, help="Largest group order which may be enumerated")
    parser.add_argument(
        "--budget", type=int, help="Largest number of partial assignments of the isometry search"
    )
    parser.add_argument("--workers", type=int, help="Worker processes of the verification sweeps")
    parser.add_argument("--verbose", "-v", action="count", default=0, help="Verbose output")
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", help="Compute quantities by enumeration")
    evaluate.add_argument("form", help='A form expression, for example "U(3) + q(8,3)"')
    evaluate.add_argument(
        "--what",
        type=_quantity_list,
        default=[Quantity.G, Quantity.GPRIME],
        help="Comma separated quantities out of "
        + ",".join(quantity.value for quantity in Quantity),
    )

    closed = commands.add_parser("closed", help="Evaluate the closed formula")
    closed.add_argument("form")
    closed.add_argument(
        "--kind", choices=[kind.value for kind in GaussKind], default=GaussKind.FIRST.value
    )

    verify = commands.add_parser("verify", help="Compare closed formulas with enumeration")
    verify.add_argument("family", choices=[family.value for family in Family])
    verify.add_argument("--max", type=int, help="Largest odd prime power of cyclic-odd")
    verify.add_argument(
        "--k",
        type=_integer_list,
        help="Largest exponent of cyclic-two, exponents of product-two",
    )
    verify.add_argument("--primes", type=_integer_list, help="Primes of elem-odd")
    verify.add_argument("--dims", type=_integer_list, help="Dimensions of elem-odd and elem-two")
    verify.add_argument("--count", type=int, help="Number of forms of localization")
    verify.add_argument("--pairs", type=int, help="Number of signature additivity pairs")
    verify.add_argument(
        "--max-order",
        type=int,
        dest="weil_max_order",
        help="Largest group order of the weil family",
    )

    weil = commands.add_parser("weil", help="Weil representation and invariant dimensions")
    weil.add_argument("form")
    weil.add_argument("--weight", help='The weight, "7", "15/2" or "7.5"')
    weil.add_argument(
        "--what",
        choices=[quantity.value for quantity in WeilQuantity],
        default=WeilQuantity.DIM.value,
    )
    weil.add_argument("--word", default="S", help="The word printed by --what matrix")

    table = commands.add_parser("table", help="Tabulate signature, Gauss sums and rules")
    table.add_argument("forms", nargs="+")
    return parser


def _bounds(args: argparse.Namespace) -> sweeps.Bounds:
    changes = {}
    if args.max is not None:
        changes["max_cyclic"] = args.max
    if args.k:
        changes["max_k"] = max(args.k)
        changes["product_k"] = tuple(args.k)
    if args.primes:
        changes["primes"] = tuple(args.primes)
    if args.dims:
        changes["dims"] = tuple(args.dims)
    if args.count is not None:
        changes["count"] = args.count
    if args.pairs is not None:
        changes["pairs"] = args.pairs
    if args.weil_max_order is not None:
        changes["weil_max_order"] = args.weil_max_order
    return sweeps.Bounds(**changes)


def _sweep_max_order(args: argparse.Namespace) -> Optional[int]:
    """The sweep cap applies unless a cap was configured explicitly"""
    if args.max_order is not None:
        return args.max_order
    if os.environ.get("FQGAUSS_MAX_ORDER", "").strip():
        return None
    return sweeps.SWEEP_MAX_ORDER


def _run_eval(workbench: Workbench, args: argparse.Namespace) -> report.Report:
    return workbench.evaluate(args.form, args.what)


def _run_closed(workbench: Workbench, args: argparse.Namespace) -> report.Report:
    return workbench.closed(args.form, args.kind)


def _run_verify(workbench: Workbench, args: argparse.Namespace) -> report.Report:
    return workbench.verify(args.family, _bounds(args))


def _run_weil(workbench: Workbench, args: argparse.Namespace) -> report.Report:
    return workbench.weil(args.form, args.what, args.weight, args.word)


_COMMANDS: Dict[str, Callable[[Workbench, argparse.Namespace], report.Report]] = {
    "eval": _run_eval,
    "closed": _run_closed,
    "verify": _run_verify,
    "weil": _run_weil,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    tools.configure_logging(args.verbose)
    try:
        max_order = _sweep_max_order(args) if args.command == "verify" else args.max_order
        workbench = Workbench(max_order=max_order, search_budget=args.budget, workers=args.workers)
        if args.command == "table":
            output = report.render_table(workbench.table(args.forms), OutputFormat(args.format))
            exit_code = ExitCode.OK
        else:
            result = _COMMANDS[args.command](workbench, args)
            output = result.render(OutputFormat(args.format))
            exit_code = result.exit_code
    except _RESOURCE_CAP as error:
        print(f"fqgauss: {error}", file=sys.stderr)
        return int(ExitCode.RESOURCE_CAP)
    except _INVALID_INPUT as error:
        print(f"fqgauss: {error}", file=sys.stderr)
        return int(ExitCode.INVALID_INPUT)
    sys.stdout.write(output)
    logger.debug("Exit code %d", exit_code)
    return int(exit_code)


if __name__ == "__main__":
    sys.exit(main())
