"""Named numerical checks of the identities multiplicative fractional calculus obeys.

Each property runs on ``[0, 1]`` and reports an observed error next to
its own tolerance.  Algebraic identities are held to roundoff, while
discretization-limited ones get a tolerance matching their convergence
order.  Random test functions are ``exp(p(t))`` for cubic ``p`` with
coefficients drawn uniformly from ``[-1, 1]`` by a seeded generator.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from mulfrac import classical
from mulfrac import multiplicative as mult
from mulfrac.core import GridFn, Interval, Side, make_grid, sample
from mulfrac.errors import UnknownProperty
from mulfrac.reference import (
    Kind,
    PowerLawCase,
    constant_mult_rl_value,
    power_law_mult_value,
)

QUADRATURE_N = 2049
GL_N = 4097
# points closer than this to the terminal are excluded where an operator
# is singular there or only converges pointwise away from it
TERMINAL_GAP = 0.05


@dataclass(frozen=True)
class PropertyReport:
    name: str
    passed: bool
    observed_error: float
    tolerance: float
    config_summary: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} observed={self.observed_error:.3e} tol={self.tolerance:.0e}"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class _Property:
    check: Callable[[int, np.random.Generator], tuple[float, str]]
    tolerance: float
    default_n: int


_REGISTRY: dict[str, _Property] = {}


def _register(name: str, tolerance: float, default_n: int = QUADRATURE_N):
    def deco(fn):
        _REGISTRY[name] = _Property(fn, tolerance, default_n)
        return fn

    return deco


def property_names() -> list[str]:
    return list(_REGISTRY)


def tolerance_of(name: str) -> float:
    return _REGISTRY[name].tolerance


# --------------------------------------------------------------------------
# helpers


def _grid(n: int):
    return make_grid(Interval(0.0, 1.0), n)


def random_log_poly(rng: np.random.Generator) -> Polynomial:
    """``ln f`` for a random test function: a cubic with coefficients in ``[-1, 1]``."""
    return Polynomial(rng.uniform(-1.0, 1.0, size=4))


def _positive(p: Polynomial, n: int) -> GridFn:
    grid = _grid(n)
    return GridFn(grid, np.exp(p(grid.points)), positive=True)


def _rel_err(value: np.ndarray, ref: np.ndarray) -> float:
    value = np.asarray(value, dtype=float)
    ref = np.asarray(ref, dtype=float)
    same = (value == ref) | (np.isnan(value) & np.isnan(ref))
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.where(same, 0.0, np.abs(value - ref) / np.abs(ref))
    return float(np.max(err)) if err.size else 0.0


def _log_err(value: np.ndarray, ref: np.ndarray) -> float:
    return float(np.max(np.abs(np.log(value) - np.log(ref))))


def _away(grid, side: Side, gap: float = TERMINAL_GAP) -> np.ndarray:
    return grid.distance(side) >= gap


SIDES = (Side.Left, Side.Right)


# --------------------------------------------------------------------------
# properties


@_register("lift_identity", 5e-3, GL_N)
def _lift_identity(n: int, rng: np.random.Generator) -> tuple[float, str]:
    """Direct limit/product forms against their log-lifted counterparts."""
    p = random_log_poly(rng)
    f = _positive(p, n)
    grid = f.grid
    dp = p.deriv()
    errs = []

    # forward and backward difference quotients vs exp(g')
    for direction in mult.Direction:
        q = mult.mult_derivative_limit_quotient(f, direction).values
        ok = np.isfinite(q)
        errs.append(float(np.max(np.abs(np.log(q[ok]) - dp(grid.points[ok])))))

    # Letnikov product vs lifted RL derivative, conformable limit vs lifted conformable
    alpha = 0.5
    fn = lambda t: math.exp(p(t))  # noqa: E731
    probes = [n // 4, n // 2, 3 * n // 4]
    for side in SIDES:
        rl = mult.mult_rl_derivative(f, alpha, side).values
        conf = mult.mult_conformable_derivative(f, alpha, side).values
        for i in probes:
            direct = mult.letnikov_product(f, alpha, i, side)
            errs.append(abs(math.log(direct) - math.log(rl[i])))
            lim = mult.conformable_limit(fn, alpha, grid.points[i], 0.0, 1.0, side, eps=grid.h)
            errs.append(abs(math.log(lim) - math.log(conf[i])))
    return max(errs), f"N={n} alpha={alpha} probes={probes}"


@_register("product_rule", 1e-10)
def _product_rule(n: int, rng: np.random.Generator) -> tuple[float, str]:
    alpha = 0.7
    ops = {
        "rl": mult.mult_rl_derivative,
        "caputo": mult.mult_caputo,
        "letnikov": mult.mult_letnikov_derivative,
        "conformable": mult.mult_conformable_derivative,
    }
    pairs = 20
    err = 0.0
    for _ in range(pairs):
        pf, pg = random_log_poly(rng), random_log_poly(rng)
        f, g = _positive(pf, n), _positive(pg, n)
        fg = GridFn(f.grid, f.values * g.values, positive=True)
        for side in SIDES:
            keep = f.grid.distance(side) > 0
            for op in ops.values():
                lhs = op(fg, alpha, side).values
                rhs = op(f, alpha, side).values * op(g, alpha, side).values
                err = max(err, _rel_err(lhs[keep], rhs[keep]))
    return err, f"N={n} alpha={alpha} pairs={pairs} ops={','.join(ops)}"


@_register("caputo_constant", 1e-12)
def _caputo_constant(n: int, rng: np.random.Generator) -> tuple[float, str]:
    grid = _grid(n)
    err = 0.0
    for c in (0.5, 1.0, math.e, 10.0):
        f = GridFn(grid, np.full(n, c), positive=True)
        for alpha in (0.3, 0.7, 1.4):
            for side in SIDES:
                err = max(err, float(np.max(np.abs(mult.mult_caputo(f, alpha, side).values - 1.0))))
    return err, f"N={n} c in {{0.5,1,e,10}} alpha in {{0.3,0.7,1.4}}"


@_register("rl_constant", 1e-4)
def _rl_constant(n: int, rng: np.random.Generator) -> tuple[float, str]:
    grid = _grid(n)
    err = 0.0
    for c in (0.5, math.e, 10.0):
        f = GridFn(grid, np.full(n, c), positive=True)
        for alpha in (0.3, 0.5, 0.7):
            for side in SIDES:
                d = grid.distance(side)
                keep = d > 0
                got = mult.mult_rl_derivative(f, alpha, side).values[keep]
                ref = [constant_mult_rl_value(c, alpha, float(di)) for di in d[keep]]
                err = max(err, _rel_err(got, ref))
    return err, f"N={n} c in {{0.5,e,10}} alpha in {{0.3,0.5,0.7}}"


def _caputo_inversion(n: int, rng: np.random.Generator, side: Side) -> tuple[float, str]:
    p = random_log_poly(rng)
    f = _positive(p, n)
    ti = f.grid.terminal_index(side)
    expected = f.values / f.values[ti]
    err = 0.0
    for alpha in (0.3, 0.7):
        got = mult.mult_rl_integral(mult.mult_caputo(f, alpha, side), alpha, side).values
        err = max(err, _rel_err(got, expected))
    return err, f"N={n} alpha in {{0.3,0.7}} f=exp(cubic)"


@_register("caputo_inversion_left", 1e-3)
def _caputo_inversion_left(n, rng):
    return _caputo_inversion(n, rng, Side.Left)


@_register("caputo_inversion_right", 1e-3)
def _caputo_inversion_right(n, rng):
    return _caputo_inversion(n, rng, Side.Right)


def _conformable_inverse(n: int, rng: np.random.Generator, part: str) -> tuple[float, str]:
    p = random_log_poly(rng)
    f = _positive(p, n)
    side = Side.Left if part in "ac" else Side.Right
    err = 0.0
    for alpha in (0.25, 0.5, 0.9):
        if part in "ab":
            got = mult.mult_conformable_derivative(
                mult.mult_conformable_integral(f, alpha, side), alpha, side
            ).values
            expected = f.values
        else:
            got = mult.mult_conformable_integral(
                mult.mult_conformable_derivative(f, alpha, side), alpha, side
            ).values
            expected = f.values / f.values[f.grid.terminal_index(side)]
        err = max(err, _rel_err(got, expected))
    return err, f"N={n} alpha in {{0.25,0.5,0.9}} side={side.value}"


for _part in "abcd":
    _register(f"conformable_inverse_{_part}", 1e-4)(
        lambda n, rng, _p=_part: _conformable_inverse(n, rng, _p)
    )


def _higher_conformable(n: int, rng: np.random.Generator, side: Side) -> tuple[float, str]:
    alpha = 1.5
    p = random_log_poly(rng)
    f = _positive(p, n)
    x = f.grid.points
    terminal = 0.0 if side is Side.Left else 1.0
    # degree-1 Taylor polynomial of ln f at the terminal, from the exact derivative
    tail = p(terminal) + p.deriv()(terminal) * (x - terminal)
    expected = np.exp(p(x) - tail)
    got = mult.mult_conformable_integral(
        mult.mult_conformable_derivative(f, alpha, side), alpha, side
    ).values
    return _rel_err(got, expected), f"N={n} alpha={alpha} side={side.value}"


@_register("higher_conformable_a", 1e-3)
def _higher_conformable_a(n, rng):
    return _higher_conformable(n, rng, Side.Left)


@_register("higher_conformable_b", 1e-3)
def _higher_conformable_b(n, rng):
    return _higher_conformable(n, rng, Side.Right)


@_register("gl_matches_rl_derivative", 5e-3, GL_N)
def _gl_rl_derivative(n: int, rng: np.random.Generator) -> tuple[float, str]:
    alpha = 0.5
    f = _positive(random_log_poly(rng), n)
    err = 0.0
    for side in SIDES:
        keep = _away(f.grid, side)
        gl = mult.mult_letnikov_derivative(f, alpha, side).values[keep]
        rl = mult.mult_rl_derivative(f, alpha, side).values[keep]
        err = max(err, _rel_err(gl, rl))
    return err, f"N={n} alpha={alpha} distance>={TERMINAL_GAP}"


@_register("gl_matches_rl_integral", 5e-3, GL_N)
def _gl_rl_integral(n: int, rng: np.random.Generator) -> tuple[float, str]:
    p_order = 0.5
    f = _positive(random_log_poly(rng), n)
    err = 0.0
    for side in SIDES:
        keep = _away(f.grid, side)
        gl = mult.mult_letnikov_integral(f, p_order, side).values[keep]
        rl = mult.mult_rl_integral(f, p_order, side).values[keep]
        err = max(err, _rel_err(gl, rl))
    return err, f"N={n} p={p_order} distance>={TERMINAL_GAP}"


@_register("cauchy_integer_reduction", 1e-6)
def _cauchy_reduction(n: int, rng: np.random.Generator) -> tuple[float, str]:
    p = random_log_poly(rng)
    grid = _grid(n)
    g = GridFn(grid, p(grid.points))
    err = 0.0
    for k in (1, 2, 3):
        for side in SIDES:
            rl = classical.rl_integral(g, k, side).values
            it = classical.cauchy_iterated_integral(g, k, side).values
            err = max(err, float(np.max(np.abs(rl - it))))
    return err, f"N={n} orders 1,2,3 g=cubic"


@_register("power_law_oracle", 1e-3)
def _power_law(n: int, rng: np.random.Generator) -> tuple[float, str]:
    grid = _grid(n)
    err = 0.0
    cases = [(Kind.Integral, a, b) for a in (0.3, 0.5, 1.2) for b in (1.5, 2.0, 2.5)]
    cases += [(Kind.Derivative, 0.5, 2.0), (Kind.Derivative, 0.5, 3.0), (Kind.Derivative, 1.3, 3.0)]
    for kind, alpha, beta in cases:
        for side in SIDES:
            terminal = grid.a if side is Side.Left else grid.b
            d = grid.distance(side)
            f = GridFn(grid, np.exp(d ** (beta - 1.0)), positive=True)
            op = mult.mult_rl_integral if kind is Kind.Integral else mult.mult_rl_derivative
            got = op(f, alpha, side).values
            case = PowerLawCase(alpha, beta, side, kind)
            ref = np.array([power_law_mult_value(case, terminal, float(xi)) for xi in grid.points])
            keep = d > 0
            err = max(err, _rel_err(got[keep], ref[keep]))
    return err, f"N={n} {len(cases)} (kind, alpha, beta) cases, both sides"


@_register("mult_deriv_quotient_convergence", 0.1)
def _quotient_convergence(n: int, rng: np.random.Generator) -> tuple[float, str]:
    """Observed error is ``|slope - 1|`` of the log-log error fit."""
    p = random_log_poly(rng)
    dp = p.deriv()
    steps = [2**-k for k in range(6, 11)]
    err_f, err_b, gap = [], [], []
    for h in steps:
        f = _positive(p, int(round(1 / h)) + 1)
        x = f.grid.points
        qf = mult.mult_derivative_limit_quotient(f, mult.Direction.Forward).values
        qb = mult.mult_derivative_limit_quotient(f, mult.Direction.Backward).values
        inner = slice(1, -1)
        err_f.append(float(np.max(np.abs(np.log(qf[inner]) - dp(x[inner])))))
        err_b.append(float(np.max(np.abs(np.log(qb[inner]) - dp(x[inner])))))
        gap.append(float(np.max(np.abs(np.log(qf[inner]) - np.log(qb[inner])))))
    logh = np.log(steps)
    slopes = [np.polyfit(logh, np.log(e), 1)[0] for e in (err_f, err_b, gap)]
    observed = max(abs(s - 1.0) for s in slopes)
    return observed, "h=2^-6..2^-10 slopes(fwd,bwd,gap)=" + ",".join(f"{s:.3f}" for s in slopes)


# --------------------------------------------------------------------------


def run_property(name: str, n_points: Optional[int] = None, seed: int = 0) -> PropertyReport:
    try:
        prop = _REGISTRY[name]
    except KeyError:
        raise UnknownProperty(name) from None
    n = prop.default_n if n_points is None else int(n_points)
    # one independent stream per property, so reports do not depend on suite order
    rng = np.random.default_rng([seed, sorted(_REGISTRY).index(name)])
    observed, summary = prop.check(n, rng)
    return PropertyReport(
        name=name,
        passed=bool(observed <= prop.tolerance),
        observed_error=float(observed),
        tolerance=prop.tolerance,
        config_summary=f"seed={seed} {summary}",
    )


def run_suite(
    names: Optional[Iterable[str]] = None,
    n_points: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
) -> list[PropertyReport]:
    """Run the named properties (all of them when *names* is ``None``).

    ``n_points=None`` uses each property's default grid.  Reports come
    back in the order the names were given, whatever *workers* is.
    """
    names = property_names() if names is None else list(names)
    unknown = [nm for nm in names if nm not in _REGISTRY]
    if unknown:
        raise UnknownProperty(", ".join(unknown))
    if workers <= 1:
        return [run_property(nm, n_points, seed) for nm in names]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda nm: run_property(nm, n_points, seed), names))
