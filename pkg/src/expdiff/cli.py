"""
Command-line front end.

    python -m expdiff verify fixtures/example22.eq --f "z*exp(z) - z"
    python -m expdiff solve fixtures/example31.eq --json
    python -m expdiff growth "z*(exp(z) - 1)" --radii geometric:10,2,5

Exit codes: 0 success, 2 expected negative (NotASolution,
NoFiniteOrderSolution), 1 error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from tabulate import tabulate

from expdiff import config
from expdiff.algebra.exppoly import ExpPoly, ZPoly
from expdiff.equations.equation import VerdictTag, classify, verify
from expdiff.equations.solver import SolutionSet, SolutionTag, solve_equation, solve_theorem31, synthesize_v
from expdiff.errors import EquationFileError, ExpDiffError, InvalidArgument
from expdiff.frontend.eqfile import EquationFile, dump_equation_file, load_equation_file
from expdiff.frontend.lowering import Session, lower_expression, lower_scalar
from expdiff.frontend.parser import parse
from expdiff.frontend.printer import format_exppoly, format_scalar, format_zpoly, join_terms
from expdiff.numeric.growth import NumericContext, lambda_estimate, parse_radii, spot_check, winding_number

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2

# options whose value is an expression and may start with "-"
EXPRESSION_OPTIONS = ("--f", "--c")


# ── helpers ───────────────────────────────────────────────────────────────────

def _bindings(pairs: Sequence[str]) -> Dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--bind expects name=value, got {pair!r}")
        name, value = pair.split("=", 1)
        out[name.strip()] = value.strip()
    return out


def _context(args: argparse.Namespace) -> NumericContext:
    return NumericContext(precision=args.precision, bindings=_bindings(args.bind))


def _emit(args: argparse.Namespace, payload: Dict[str, Any], human: Optional[List[str]] = None) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
        return
    if human is None:
        human = [f"{key}: {value}" for key, value in payload.items() if value is not None]
    print("\n".join(human))


def _solution_payload(result: SolutionSet, a=None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "status": result.tag.value,
        "f0": format_zpoly(result.f0) if result.f0 is not None else None,
        "solutions": [format_exppoly(f) for f in result.solutions],
        "roots": [format_scalar(c) for c in result.roots] if result.roots else None,
        "failed_identity": result.failed_identity,
        "residual": format_exppoly(result.residual) if result.residual is not None else None,
        "constraint": result.constraint,
        "diagnostics": result.diagnostics,
    }
    if result.solved and result.roots is None and a is not None and result.f0 is not None:
        wave = f"exp({format_zpoly(ZPoly(a.domain, [a.domain.zero, a / 2]))})"
        f0 = format_zpoly(result.f0)
        payload["solutions"] = [join_terms([f"c*{wave}", f0]), join_terms([f"-c*{wave}", f0])]
    return payload


def _override_c(loaded: EquationFile, text: Optional[str]):
    if text is None:
        return loaded.c
    return lower_scalar(parse(text), loaded.session, "--c")


# ── commands ──────────────────────────────────────────────────────────────────

def cmd_verify(args: argparse.Namespace) -> int:
    loaded = load_equation_file(args.file)
    eq = loaded.require_equation()
    f = lower_expression(parse(args.f), loaded.session)
    verdict = verify(eq, f, strict=args.strict)
    payload = {
        "status": verdict.tag.value,
        "residual": format_exppoly(verdict.witness) if verdict.witness is not None else "0",
        "order": verdict.order.order if verdict.order is not None else None,
        "hyper_order": verdict.order.hyper_order if verdict.order is not None else None,
        "applied_L_zero": verdict.applied_L_zero,
        "operator_L_zero": verdict.operator_L_zero,
        "soundness_flag": verdict.soundness_flag,
        "reason": verdict.reason,
        "note": loaded.note or None,
    }
    if args.spot_check and verdict.witness is not None:
        ctx = _context(args)
        payload["spot_check"] = [
            {"z": [z.real, z.imag], "abs": value}
            for z, value in spot_check(verdict.witness, args.spot_check, ctx)
        ]
    _emit(args, payload)
    return EXIT_OK if verdict.tag is VerdictTag.VERIFIED else EXIT_NEGATIVE


def cmd_solve(args: argparse.Namespace) -> int:
    loaded = load_equation_file(args.file)
    c = _override_c(loaded, args.c)
    if loaded.instance is not None:
        result, a = solve_theorem31(loaded.instance, c), loaded.instance.a
    else:
        eq = loaded.require_equation()
        result, a = solve_equation(eq, c), eq.p[1]
    _emit(args, _solution_payload(result, a))
    return EXIT_OK if result.tag is SolutionTag.TWO_SOLUTIONS else EXIT_NEGATIVE


def cmd_synthesize(args: argparse.Namespace) -> int:
    loaded = load_equation_file(args.file)
    if not loaded.is_quadratic_form:
        raise EquationFileError(f"{args.file}: synthesize needs g, h, u, a, b and shift")
    parts = loaded.parts
    synthesis = synthesize_v(
        parts["g"], parts["h"], parts["u"], parts["a"], parts["b"], parts["shift"],
        _override_c(loaded, args.c),
    )
    loaded.equation = synthesis.instance.equation()
    if args.emit == "equation" and not args.json:
        print(dump_equation_file(loaded), end="")
        return EXIT_OK
    payload = {"v": format_zpoly(synthesis.v), **_solution_payload(synthesis.solutions, parts["a"])}
    if args.emit == "v" and not args.json:
        print(payload["v"])
        return EXIT_OK
    payload["equation"] = dump_equation_file(loaded).strip()
    _emit(args, payload)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    loaded = load_equation_file(args.file)
    verdict = classify(loaded.require_equation())
    payload = {
        "status": verdict.tag.value,
        "sigma": verdict.constraints.sigma if verdict.constraints else None,
        "lambda_bar": verdict.constraints.lambda_bar if verdict.constraints else None,
        "hyper_order": verdict.constraints.hyper_order if verdict.constraints else None,
        "reason": verdict.reason,
    }
    _emit(args, payload)
    return EXIT_OK


def _standalone(args: argparse.Namespace) -> ExpPoly:
    params = [p.strip() for p in args.params.split(",") if p.strip()] if args.params else []
    return lower_expression(parse(args.expr), Session.create(params))


def cmd_zeros(args: argparse.Namespace) -> int:
    f = _standalone(args)
    ctx = _context(args)
    rows = []
    for r in parse_radii(args.r):
        w = winding_number(f, r, ctx)
        rows.append({"r": r, "count": w.count, "value": [w.value.real, w.value.imag],
                     "samples": w.samples, "radius": w.radius})
    if args.json:
        _emit(args, {"status": "ok", "counts": rows})
    else:
        print(tabulate([[row["r"], row["count"], row["samples"]] for row in rows],
                       headers=["r", "n(r)", "samples"], tablefmt="github"))
    return EXIT_OK


def cmd_growth(args: argparse.Namespace) -> int:
    f = _standalone(args)
    report = lambda_estimate(f, parse_radii(args.radii), _context(args), strict=args.strict)
    if args.csv:
        report.to_frame().to_csv(args.csv, index=False)
        logger.info("wrote %s", args.csv)
    if args.json:
        _emit(args, report.to_dict())
    else:
        ci = f" (95% CI {report.ci[0]:.3f} .. {report.ci[1]:.3f})" if report.ci else ""
        print(report.to_table())
        print(f"{report.label}: {report.slope:.4f}{ci}  [{report.status}]")
        print(f"sigma (symbolic): {report.sigma}, hyper-order: {report.hyper_order}")
    return EXIT_OK


def cmd_print_eq(args: argparse.Namespace) -> int:
    loaded = load_equation_file(args.file)
    text = dump_equation_file(loaded)
    if args.json:
        _emit(args, {"status": "ok", "text": text})
    else:
        print(text, end="")
    return EXIT_OK


# ── parser ────────────────────────────────────────────────────────────────────

class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors become :class:`InvalidArgument` instead of exiting with status 2."""

    def error(self, message: str):
        raise InvalidArgument(f"{self.prog}: {message}")


def _attach_values(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--f -z`` as ``--f=-z`` so argparse does not take the value for an option."""
    out: List[str] = []
    args = list(argv)
    idx = 0
    while idx < len(args):
        arg = args[idx]
        if arg in EXPRESSION_OPTIONS and idx + 1 < len(args):
            out.append(f"{arg}={args[idx + 1]}")
            idx += 2
            continue
        out.append(arg)
        idx += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Machine-readable JSON output.")
    common.add_argument("--precision", type=int, default=config.PRECISION, help="Working precision in bits.")
    common.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE",
                        help="Numeric value of a parameter (repeatable).")
    common.add_argument("--log-level", default=config.LOG_LEVEL, help="Logging level.")

    parser = _ArgumentParser(
        prog="expdiff",
        description="Exact engine for f(z)^n + L(z,f) = q(z)*exp(p(z)).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="Check a candidate solution exactly.")
    p.add_argument("file", help="Equation file")
    p.add_argument("--f", required=True, help="Candidate solution, e.g. 'z*exp(z) - z'")
    p.add_argument("--spot-check", type=int, default=0, metavar="N",
                   help="Evaluate a nonzero residual at N pseudo-random points.")
    p.add_argument("--strict", action="store_true", help="Raise on a soundness flag.")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="Closed-form solutions of the shifted quadratic.")
    p.add_argument("file", help="Equation file")
    p.add_argument("--c", default=None, help="Root of b to use.")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("synthesize", parents=[common], help="Construct v so that the instance is solvable.")
    p.add_argument("file", help="Equation file with g, h, u, a, b, shift")
    p.add_argument("--c", default=None, help="Root of b to use.")
    p.add_argument("--emit", choices=["report", "v", "equation"], default="report")
    p.set_defaults(handler=cmd_synthesize)

    p = sub.add_parser("classify", parents=[common], help="What is known about entire solutions.")
    p.add_argument("file", help="Equation file")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("zeros", parents=[common], help="Count zeros in |z| <= r.")
    p.add_argument("expr", help="Exponential polynomial")
    p.add_argument("--r", required=True, help="Radii, e.g. '7' or '10,20'")
    p.add_argument("--params", default="", help="Comma-separated parameter names.")
    p.set_defaults(handler=cmd_zeros)

    p = sub.add_parser("growth", parents=[common], help="Estimate the zero growth exponent.")
    p.add_argument("expr", help="Exponential polynomial")
    p.add_argument("--radii", default=config.DEFAULT_RADII, help="geometric:r0,ratio,count or a list")
    p.add_argument("--params", default="", help="Comma-separated parameter names.")
    p.add_argument("--csv", default=None, type=Path, help="Write the count table to this CSV file.")
    p.add_argument("--strict", action="store_true", help="Fail when there are too few zeros.")
    p.set_defaults(handler=cmd_growth)

    p = sub.add_parser("print-eq", parents=[common], help="Print an equation file in canonical form.")
    p.add_argument("file", help="Equation file")
    p.set_defaults(handler=cmd_print_eq)

    return parser


def _fail(as_json: bool, code: str, message: str) -> int:
    if as_json:
        print(json.dumps({"status": "error", "error": code, "message": message}, indent=2))
    else:
        print(f"ERROR | {code}: {message}", file=sys.stderr)
    return EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _attach_values(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except InvalidArgument as exc:
        return _fail("--json" in argv, exc.code, str(exc))
    try:
        logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s | %(message)s")
        return args.handler(args)
    except ExpDiffError as exc:
        code, message = exc.code, str(exc)
    except ValueError as exc:
        code, message = InvalidArgument.code, str(exc)

    logger.debug("command failed", exc_info=True)
    return _fail(args.json, code, message)


if __name__ == "__main__":
    sys.exit(main())
