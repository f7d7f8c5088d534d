"""``mulfrac`` command line: ``eval``, ``verify`` and ``table``.

Exit codes: 0 success, 2 usage or parse error, 3 domain error in the
input function, 4 no closed form applies or a Gamma pole is hit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TextIO

import numpy as np

from mulfrac import parser as P
from mulfrac.core import GridFn, Interval, Side, UniformGrid, make_grid, sample
from mulfrac.errors import (
    DomainError,
    EvalDomainError,
    ExprSyntaxError,
    MulfracError,
    NonFiniteValue,
    PoleError,
    PositivityViolation,
    UnknownFunction,
    UnknownProperty,
)
from mulfrac.multiplicative import Direction, Kind, OperatorRequest
from mulfrac.reference import (
    Kind as RefKind,
    PowerLawCase,
    constant_mult_rl_value,
    gamma,
    power_law_mult_value,
)
from mulfrac import verify as V

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NO_REFERENCE = 4


class _UsageError(Exception):
    pass


class _NoReference(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 as well; keep one path
        raise _UsageError(f"{self.prog}: {message}")


@dataclass
class SeriesResult:
    x: np.ndarray
    value: np.ndarray
    metadata: dict
    reference: Optional[np.ndarray] = None
    abs_err: Optional[np.ndarray] = None

    def columns(self) -> dict[str, np.ndarray]:
        cols = {"x": self.x, "value": self.value}
        if self.reference is not None:
            cols["reference"] = self.reference
            cols["abs_err"] = self.abs_err
        return cols


# --------------------------------------------------------------------------
# serialization


def _fmt(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % v


def write_csv(columns: dict[str, np.ndarray], out: TextIO) -> None:
    names = list(columns)
    out.write(",".join(names) + "\n")
    for row in zip(*(columns[n] for n in names)):
        out.write(",".join(_fmt(float(v)) for v in row) + "\n")


def _json_number(v: float):
    v = float(v)
    return v if math.isfinite(v) else None


def write_json(columns: dict[str, np.ndarray], meta: dict, out: TextIO) -> None:
    doc = {name: [_json_number(v) for v in col] for name, col in columns.items()}
    doc["meta"] = meta
    # repr of a float is shortest round-trip, so identical inputs give identical bytes
    json.dump(doc, out, sort_keys=True, separators=(",", ":"), allow_nan=False)
    out.write("\n")


# --------------------------------------------------------------------------
# closed forms for --ref


def _match_constant(expr: P.Expr) -> Optional[float]:
    if P.has_var(expr):
        return None
    return P.eval_expr(expr, 0.0)


def _is_number(e: P.Expr, value: float) -> bool:
    return isinstance(e, P.Number) and e.value == value


def _match_power_law(expr: P.Expr, side: Side, a: float, b: float) -> Optional[float]:
    """Return ``q`` when *expr* is ``exp(d^q)`` with ``d`` the distance to the terminal."""
    if not (isinstance(expr, P.Unary) and expr.op == "exp"):
        return None
    inner = expr.arg
    if isinstance(inner, P.Binary) and inner.op == "pow" and isinstance(inner.right, P.Number):
        base, q = inner.left, inner.right.value
    else:
        base, q = inner, 1.0
    if side is Side.Left:
        ok = (isinstance(base, P.Var) and a == 0.0) or (
            isinstance(base, P.Binary)
            and base.op == "sub"
            and isinstance(base.left, P.Var)
            and _is_number(base.right, a)
        )
    else:
        ok = (
            isinstance(base, P.Binary)
            and base.op == "sub"
            and _is_number(base.left, b)
            and isinstance(base.right, P.Var)
        )
    return q if ok and q >= 0 else None


def _constant_reference(kind: Kind, c: float, req: OperatorRequest) -> Callable[[float], float]:
    lnc = math.log(c)
    alpha = req.order

    if kind in (Kind.MultDeriv, Kind.MultCaputo):
        return lambda d: 1.0
    if kind is Kind.MultIntegral:
        return lambda d: math.exp(lnc * d)
    if kind in (Kind.MultRLDeriv, Kind.MultLetnikovDeriv):
        return lambda d: constant_mult_rl_value(c, alpha, d)
    if kind in (Kind.MultRLIntegral, Kind.MultLetnikovIntegral):
        return lambda d: math.exp(lnc * d**alpha / gamma(alpha + 1.0))
    if kind is Kind.MultConfDeriv:
        return lambda d: 1.0
    if alpha <= 1.0:  # conformable integral of a constant log
        return lambda d: math.exp(lnc * d**alpha / alpha)
    raise _NoReference("no closed form for higher-order conformable integrals")


def _reference(req: OperatorRequest, expr: P.Expr) -> np.ndarray:
    grid = req.grid
    # the plain multiplicative integral always runs from a
    distances = grid.distance(Side.Left if req.kind is Kind.MultIntegral else req.side)
    c = _match_constant(expr)
    if c is not None:
        if c <= 0:
            raise _NoReference("constant is not positive")
        ref = _constant_reference(req.kind, c, req)
        return np.array([ref(float(d)) for d in distances])

    q = _match_power_law(expr, req.side, grid.a, grid.b)
    if q is not None and q > 0 and req.kind in (Kind.MultRLIntegral, Kind.MultRLDeriv):
        kind = RefKind.Integral if req.kind is Kind.MultRLIntegral else RefKind.Derivative
        case = PowerLawCase(req.order, q + 1.0, req.side, kind)  # may raise PoleError
        terminal = grid.a if req.side is Side.Left else grid.b
        return np.array([power_law_mult_value(case, terminal, float(x)) for x in grid.points])
    raise _NoReference(f"no closed form registered for {req.kind.value} of {P.to_text(expr)}")


# --------------------------------------------------------------------------
# commands


def _interval(a: float, b: float) -> Interval:
    try:
        return Interval(a, b)
    except DomainError as exc:
        raise _UsageError(str(exc)) from None


def _grid(args) -> UniformGrid:
    try:
        return make_grid(_interval(args.a, args.b), args.grid)
    except DomainError as exc:
        raise _UsageError(str(exc)) from None


def cmd_eval(args, out: TextIO) -> int:
    try:
        kind = Kind(args.op)
    except ValueError:
        raise _UsageError(f"unknown op {args.op!r}") from None
    try:
        fn = P.Function(args.fn)
    except (ExprSyntaxError, UnknownFunction) as exc:
        raise _UsageError(str(exc)) from None

    grid = _grid(args)
    side = Side(args.side)
    if kind is Kind.MultDeriv:
        order = float(args.n if args.n is not None else 1)
    elif kind is Kind.MultIntegral:
        order = None
    else:
        if args.alpha is None:
            raise _UsageError(f"--alpha is required for {kind.value}")
        order = args.alpha
    try:
        req = OperatorRequest(kind, grid, order, side, Direction.Forward)
    except (ValueError, DomainError) as exc:
        raise _UsageError(str(exc)) from None

    def safe(t: float) -> float:
        try:
            return fn(t)
        except EvalDomainError as exc:
            raise NonFiniteValue(f"f({t!r}) is undefined: {exc}") from None

    f = sample(safe, grid, require_positive=True)

    reference = None
    if args.ref:
        reference = _reference(req, fn.expr)
    with np.errstate(all="ignore"):
        value = req.apply(f).values

    meta = {
        "op": kind.value,
        "order": order,
        "side": side.value,
        "a": grid.a,
        "b": grid.b,
        "grid": grid.n_points,
        "fn": args.fn,
    }
    result = SeriesResult(np.asarray(grid.points), value, meta)
    if reference is not None:
        result.reference = reference
        with np.errstate(invalid="ignore"):
            err = np.abs(value - reference)
        result.abs_err = np.where(value == reference, 0.0, err)
    _emit(result.columns(), meta, args.out, out)
    return EXIT_OK


def _emit(columns, meta, fmt: str, out: TextIO) -> None:
    if fmt == "json":
        write_json(columns, meta, out)
    else:
        write_csv(columns, out)


def cmd_verify(args, out: TextIO) -> int:
    names = None if args.suite == "all" else [s.strip() for s in args.suite.split(",") if s.strip()]
    try:
        reports = V.run_suite(names, n_points=args.grid, seed=args.seed)
    except UnknownProperty as exc:
        raise _UsageError(f"unknown property: {exc.args[0]}") from None
    if args.out == "json":
        json.dump([r.to_dict() for r in reports], out, sort_keys=True, separators=(",", ":"))
        out.write("\n")
    else:
        for r in reports:
            out.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in reports) else 1


def cmd_table(args, out: TextIO) -> int:
    from mulfrac import multiplicative as M

    grid = _grid(args)
    side = Side(args.side)
    x = np.asarray(grid.points)
    d = grid.distance(side)
    terminal = grid.a if side is Side.Left else grid.b

    if args.case == "constant":
        c = args.c
        if not c > 0:
            raise _UsageError("--c must be positive")
        f = GridFn(grid, np.full(grid.n_points, c), positive=True)
        numeric = M.mult_rl_derivative(f, args.alpha, side).values
        closed = np.array([constant_mult_rl_value(c, args.alpha, float(di)) for di in d])
    else:
        if args.beta is None:
            raise _UsageError("--beta is required for power-law tables")
        kind = RefKind.Integral if args.case == "power-int" else RefKind.Derivative
        case = PowerLawCase(args.alpha, args.beta, side, kind)
        f = GridFn(grid, np.exp(d ** (args.beta - 1.0)), positive=True)
        op = M.mult_rl_integral if kind is RefKind.Integral else M.mult_rl_derivative
        numeric = op(f, args.alpha, side).values
        closed = np.array([power_law_mult_value(case, terminal, float(xi)) for xi in x])

    with np.errstate(invalid="ignore"):
        err = np.where(numeric == closed, 0.0, np.abs(numeric - closed))
    write_csv({"x": x, "numeric": numeric, "closed_form": closed, "abs_err": err}, out)
    return EXIT_OK


# --------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="mulfrac", description="Multiplicative fractional calculus on uniform grids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def interval_flags(sp, grid_default):
        sp.add_argument("--side", choices=[s.value for s in Side], default="left")
        sp.add_argument("--a", type=float, default=0.0)
        sp.add_argument("--b", type=float, default=1.0)
        sp.add_argument("--grid", type=_positive_int, default=grid_default)

    e = sub.add_parser("eval", help="apply an operator to a function on a grid")
    e.add_argument("--op", required=True, choices=[k.value for k in Kind])
    e.add_argument("--fn", required=True, help='expression in t, e.g. "exp(sin(t)+2)"')
    e.add_argument("--alpha", type=float)
    e.add_argument("--n", type=_positive_int, help="integer order for mderiv")
    interval_flags(e, 1025)
    e.add_argument("--out", choices=["csv", "json"], default="csv")
    e.add_argument("--ref", action="store_true", help="attach closed-form reference and abs_err")

    v = sub.add_parser("verify", help="run the property suite")
    v.add_argument("--suite", default="all", help="'all' or a comma-separated list of properties")
    v.add_argument("--grid", type=_positive_int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", choices=["text", "json"], default="text")

    t = sub.add_parser("table", help="numeric vs closed form for the analytic cases")
    t.add_argument("--case", required=True, choices=["power-int", "power-deriv", "constant"])
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--beta", type=float)
    t.add_argument("--c", type=float, default=math.e, help="the constant for --case constant")
    interval_flags(t, 1025)
    return p


_COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "table": cmd_table}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (PositivityViolation, NonFiniteValue) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    except (_NoReference, PoleError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NO_REFERENCE
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except MulfracError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
