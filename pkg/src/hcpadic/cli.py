"""Command line front end: tables, solvers and oracle checks.

    hcpadic table existence --kmax 10 --pmax 200
    hcpadic solve periodic --p 3 --k 2 --lambda 13
    hcpadic oracle compat --p 3 --k 2 --lambda 13 --n 2 --boundary ti

Exit codes: 0 ok, 1 checked property fails, 2 gate failure / no solution,
3 numerical failure, 4 bad input, 5 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import CapExceededError, InvalidParameterError, PadicError
from .model import BoundaryField, ModelParams, existence_table, periodic_table
from .numtheory import is_prime
from .oracle import DEFAULT_CAP, Topology, compat_report, count_report, norms_report
from .padic import PadicNumber
from .solve import periodic_solve, ti_solve

PRECISION_ENV = "HCPADIC_PRECISION"
DEFAULT_CLI_PRECISION = 24
MIN_PRECISION = 8
# extra digits carried by lambda so that the solvers can report N digits
GUARD_DIGITS = 8

EXIT_OK, EXIT_PROPERTY, EXIT_GATE, EXIT_NUMERICAL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3, 4, 5


class BadInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise BadInput(f"not a rational number: {text!r}") from None


def parse_lambda(text: str, p: int, precision: int) -> PadicNumber:
    """`num/den`, or base-p digits (lowest first) as `digits:1,1,1` or `1,1,1`."""
    text = text.strip()
    if text.startswith("digits:") or "," in text:
        body = text.split(":", 1)[1] if text.startswith("digits:") else text
        try:
            digits = [int(d) for d in body.split(",") if d.strip()]
        except ValueError:
            raise BadInput(f"bad digit list {text!r}") from None
        if not digits or any(not 0 <= d < p for d in digits):
            raise BadInput(f"digits must lie in 0..{p - 1}: {text!r}")
        if len(digits) > precision:
            raise BadInput(f"{len(digits)} digits exceed precision {precision}")
        value = sum(d * p**i for i, d in enumerate(digits))
        return PadicNumber.from_residue(value, p, precision)
    q = parse_rational(text)
    return PadicNumber.from_rational(q.numerator, q.denominator, p, precision)


def resolve_precision(args) -> int:
    if args.precision is not None:
        prec = args.precision
    else:
        env = os.environ.get(PRECISION_ENV)
        try:
            prec = int(env) if env else DEFAULT_CLI_PRECISION
        except ValueError:
            raise BadInput(f"{PRECISION_ENV}={env!r} is not an integer") from None
    if prec < MIN_PRECISION:
        raise BadInput(f"precision must be >= {MIN_PRECISION}, got {prec}")
    return prec


def build_params(args, precision: int) -> ModelParams:
    if args.p is None or args.k is None:
        raise BadInput("--p and --k are required")
    if (args.J is None) == (args.lam is None):
        raise BadInput("give exactly one of --J and --lambda")
    p, k = args.p, args.k
    if not is_prime(p):
        raise BadInput(f"--p must be prime, got {p}")
    work = precision + GUARD_DIGITS
    try:
        if args.J is not None:
            q = parse_rational(args.J)
            return ModelParams.from_coupling(p, k, PadicNumber.from_rational(q.numerator, q.denominator, p, work))
        return ModelParams.from_fugacity(p, k, parse_lambda(args.lam, p, work))
    except InvalidParameterError as exc:
        raise BadInput(str(exc)) from None
    except PadicError as exc:
        raise BadInput(str(exc)) from None


def _emit(args, payload: dict, text: str, sort_keys: bool = True) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=sort_keys))
    else:
        print(text)


# -- table -------------------------------------------------------------------


def render_table(table: dict[int, list[int]]) -> str:
    rows = ["k\tp"]
    for k, ps in table.items():
        rows.append(f"{k}\t{', '.join(map(str, ps)) if ps else '-'}")
    return "\n".join(rows)


def cmd_table(args) -> int:
    if args.kmax is None or args.kmax < 1:
        raise BadInput("--kmax must be a positive integer")
    build = existence_table if args.kind == "existence" else periodic_table
    try:
        table = build(args.kmax, args.pmax)
    except ValueError as exc:
        raise BadInput(str(exc)) from None
    _emit(args, {str(k): v for k, v in table.items()}, render_table(table), sort_keys=False)
    return EXIT_OK


# -- solve -------------------------------------------------------------------


def cmd_solve(args) -> int:
    prec = resolve_precision(args)
    params = build_params(args, prec)
    report = ti_solve(params, prec) if args.kind == "ti" else periodic_solve(params, prec)
    _emit(args, report.to_json(), report.render_text())
    return report.exit_code


# -- oracle ------------------------------------------------------------------


def _boundary(args, params: ModelParams, prec: int):
    """(BoundaryField, None) or (None, failed SolveReport)."""
    if args.boundary == "ti":
        rep = ti_solve(params, prec + GUARD_DIGITS // 2)
        if rep.status != "ok":
            return None, rep
        return BoundaryField.constant(rep.solutions[0].values[0]), None
    if args.boundary == "periodic":
        rep = periodic_solve(params, prec + GUARD_DIGITS // 2)
        if rep.status != "ok":
            return None, rep
        z1, z2 = rep.solutions[0].values
        return BoundaryField.alternating(z1, z2), None
    z = parse_lambda(args.z or "1", params.p, params.precision)
    try:
        return BoundaryField.constant(z), None
    except InvalidParameterError as exc:
        raise BadInput(str(exc)) from None


def cmd_oracle(args) -> int:
    if args.n is None or args.n < 0:
        raise BadInput("--n must be a non-negative integer")
    cap = None if args.cap is not None and args.cap <= 0 else (args.cap or DEFAULT_CAP)
    if args.kind == "count":
        if args.k is None or args.k < 1:
            raise BadInput("--k must be a positive integer")
        topo = Topology.parse(args.topology or "full")
        report = count_report(args.k, args.n, topo, args.p, cap)
    else:
        prec = resolve_precision(args)
        params = build_params(args, prec)
        boundary, failed = _boundary(args, params, prec)
        if failed is not None:
            print(f"cannot build the {args.boundary} boundary: status {failed.status}", file=sys.stderr)
            if failed.message:
                print(failed.message, file=sys.stderr)
            return failed.exit_code
        if args.kind == "compat":
            if args.n < 1:
                raise BadInput("compat needs --n >= 1")
            report = compat_report(params, boundary, args.n, args.topology or "kbranch", cap)
        else:
            report = norms_report(params, boundary, args.n, args.topology or "full", cap)
    _emit(args, report.to_json(), report.render_text())
    return EXIT_OK if report.holds else EXIT_PROPERTY


# -- parser ------------------------------------------------------------------


def _add_model_args(sp) -> None:
    sp.add_argument("--p", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--J", help="coupling as num/den with |J|_p small enough for exp_p")
    sp.add_argument("--lambda", dest="lam", help="fugacity as num/den or base-p digits d0,d1,...")
    sp.add_argument("--precision", type=int, help=f"p-adic digits (default ${PRECISION_ENV} or {DEFAULT_CLI_PRECISION})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hcpadic", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("table", help="k -> p tables")
    t.add_argument("kind", choices=["existence", "periodic"])
    t.add_argument("--kmax", type=int, default=10)
    t.add_argument("--pmax", type=int)

    s = sub.add_parser("solve", help="construct boundary laws")
    s.add_argument("kind", choices=["ti", "periodic"])
    _add_model_args(s)

    o = sub.add_parser("oracle", help="finite-volume checks")
    o.add_argument("kind", choices=["count", "compat", "norms"])
    _add_model_args(o)
    o.add_argument("--n", type=int, default=1)
    o.add_argument("--boundary", choices=["ti", "periodic", "const"], default="ti")
    o.add_argument("--z", help="value for --boundary const (same syntax as --lambda)")
    o.add_argument("--topology", choices=["kbranch", "full"])
    o.add_argument("--cap", type=int, help=f"max vertices to enumerate (default {DEFAULT_CAP}, <= 0 disables)")

    for sp in (t, s, o):
        sp.add_argument("--format", choices=["text", "json"], default="text")
    return parser


COMMANDS = {"table": cmd_table, "solve": cmd_solve, "oracle": cmd_oracle}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BadInput as exc:
        print(f"hcpadic: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceededError as exc:
        print(f"hcpadic: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvalidParameterError as exc:
        print(f"hcpadic: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PadicError, ZeroDivisionError) as exc:
        print(f"hcpadic: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
