"""Multiplicative fractional integrals and derivatives of positive functions.

Every operator here is computed in log space: take ``g = ln f``, apply the
additive operator from :mod:`mulfrac.classical`, exponentiate once.  Where
an operator also has a direct limit or product form (forward/backward
quotients, the Letnikov product, the conformable limit) that form is
provided separately so the two can be checked against each other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from mulfrac import classical
from mulfrac.classical import caputo_n
from mulfrac.core import (
    FracOrder,
    GridFn,
    Side,
    UniformGrid,
    as_order,
    exp_drop,
    finite_diff,
    log_lift,
)
from mulfrac.errors import NonPositiveOrder
from mulfrac.reference import taylor_tail_log

Order = Union[FracOrder, float, int]


class Direction(enum.Enum):
    Forward = "forward"
    Backward = "backward"


class Kind(enum.Enum):
    MultDeriv = "mderiv"
    MultIntegral = "mint"
    MultRLIntegral = "mrl-int"
    MultRLDeriv = "mrl-deriv"
    MultCaputo = "mcaputo"
    MultLetnikovDeriv = "mletnikov-deriv"
    MultLetnikovIntegral = "mletnikov-int"
    MultConfDeriv = "mconf-deriv"
    MultConfIntegral = "mconf-int"


@dataclass(frozen=True)
class OperatorRequest:
    """One operator application: what, of which order, from which side, on which grid."""

    kind: Kind
    grid: UniformGrid
    order: Optional[float] = None
    side: Side = Side.Left
    direction: Direction = Direction.Forward

    def __post_init__(self) -> None:
        if self.kind is Kind.MultIntegral:
            return
        if self.order is None:
            raise ValueError(f"{self.kind.value} needs an order")
        if self.kind is Kind.MultDeriv:
            if not float(self.order).is_integer() or self.order < 1:
                raise NonPositiveOrder(f"mderiv needs an integer order >= 1, got {self.order}")
        elif not (math.isfinite(self.order) and self.order > 0):
            raise NonPositiveOrder(f"order must be > 0, got {self.order}")

    def apply(self, f: GridFn) -> GridFn:
        k = self.kind
        if k is Kind.MultDeriv:
            return mult_derivative(f, int(self.order), self.direction)
        if k is Kind.MultIntegral:
            return mult_integral(f)
        if k is Kind.MultRLIntegral:
            return mult_rl_integral(f, self.order, self.side)
        if k is Kind.MultRLDeriv:
            return mult_rl_derivative(f, self.order, self.side)
        if k is Kind.MultCaputo:
            return mult_caputo(f, self.order, self.side)
        if k is Kind.MultLetnikovDeriv:
            return mult_letnikov_derivative(f, self.order, self.side)
        if k is Kind.MultLetnikovIntegral:
            return mult_letnikov_integral(f, self.order, self.side)
        if k is Kind.MultConfDeriv:
            return mult_conformable_derivative(f, self.order, self.side)
        return mult_conformable_integral(f, self.order, self.side)


def _lifted(op: Callable[[GridFn], GridFn], f: GridFn) -> GridFn:
    return exp_drop(op(log_lift(f)))


# --------------------------------------------------------------------------
# integer order


def mult_derivative(f: GridFn, n: int = 1, direction: Direction = Direction.Forward) -> GridFn:
    """``n``-th multiplicative derivative ``exp(d^n/dx^n ln f)``.

    Forward and backward derivatives coincide on the real line, so
    *direction* does not change the result.
    """
    if n < 1:
        raise NonPositiveOrder(f"derivative order must be >= 1, got {n}")
    return _lifted(lambda g: finite_diff(g, n), f)


def mult_derivative_limit_quotient(
    f: GridFn, direction: Direction = Direction.Forward, h: Optional[float] = None
) -> GridFn:
    """Difference quotient ``(f(x+h)/f(x))^(1/h)`` (forward) or
    ``(f(x)/f(x-h))^(1/h)`` (backward) before the limit ``h -> 0``.

    ``h`` must be the grid step.  The endpoint without a neighbour (the
    last point going forward, the first going backward) is ``nan``.
    """
    step = f.grid.h
    if h is not None and not math.isclose(h, step, rel_tol=1e-12):
        raise ValueError(f"h must equal the grid step {step}, got {h}")
    g = log_lift(f).values
    out = np.full(g.size, np.nan)
    slope = (g[1:] - g[:-1]) / step
    if direction is Direction.Forward:
        out[:-1] = np.exp(slope)
    else:
        out[1:] = np.exp(slope)
    return f.with_values(out)


def mult_integral(f: GridFn) -> GridFn:
    """Cumulative multiplicative integral ``exp(int_a^x ln f)``; the last entry is the full integral."""
    return _lifted(lambda g: classical.cauchy_iterated_integral(g, 1), f)


# --------------------------------------------------------------------------
# Riemann-Liouville and Caputo


def mult_rl_integral(f: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    return _lifted(lambda g: classical.rl_integral(g, order, side), f)


def mult_rl_derivative(f: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """``exp(D^alpha ln f)``.  The terminal point is ``inf`` when singular."""
    return _lifted(lambda g: classical.rl_derivative(g, order, side), f)


def mult_caputo(f: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Caputo multiplicative derivative ``I_*^(n-alpha) f_*^(n)``, i.e.
    ``exp(C D^alpha ln f)``; constants map to ``1``."""
    return _lifted(lambda g: classical.caputo_derivative(g, order, side), f)


def mult_caputo_via_rl(f: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Caputo multiplicative derivative as ``D_*^alpha (f e^(-S_g))``.

    ``S_g`` is the Taylor polynomial of ``g = ln f`` at the terminal with
    ``n`` terms, see :func:`mulfrac.reference.taylor_tail_log`.
    """
    order = as_order(order)
    g = log_lift(f).values
    s = taylor_tail_log(f, caputo_n(order), side)
    # f * exp(-S_g), kept in log space until the final exp
    reduced = f.with_values(np.exp(g - s), positive=True)
    return mult_rl_derivative(reduced, order, side)


# --------------------------------------------------------------------------
# Letnikov


def mult_letnikov_derivative(f: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Letnikov product at the grid step, evaluated through its logarithm."""
    return _lifted(lambda g: classical.gl_derivative(g, order, side), f)


def mult_letnikov_integral(f: GridFn, p: float, side: Side = Side.Left) -> GridFn:
    return _lifted(lambda g: classical.gl_integral(g, p, side), f)


def letnikov_product(f: GridFn, order: Order, index: int, side: Side = Side.Left) -> float:
    """The Letnikov product ``(prod_r f(t -+ r h)^(w_r))^(1/h^alpha)`` at one node.

    This is the direct definition: each factor is a power of a sample of
    ``f``, multiplied up with a running binary exponent so the product
    neither overflows nor underflows.  Only the final ``1/h^alpha`` power
    goes through ``log``.  At the terminal node this is the raw one-factor
    product, not the singular marker :func:`mult_letnikov_derivative` uses.
    """
    alpha = as_order(order).alpha
    values = f.values if side is Side.Left else f.values[::-1]
    j = index if side is Side.Left else f.grid.n_points - 1 - index
    w = classical.gl_weights(alpha, j).coefficients
    factors = np.power(values[j::-1], w)

    mantissa, exponent = 1.0, 0
    for start in range(0, factors.size, 64):
        mantissa *= float(np.prod(factors[start : start + 64]))
        mantissa, e = math.frexp(mantissa)
        exponent += e
    log_product = math.log(mantissa) + exponent * math.log(2.0)
    return math.exp(log_product / f.grid.h**alpha)


# --------------------------------------------------------------------------
# conformable


def _split_conformable(alpha: float) -> tuple[int, float]:
    """``alpha in (n, n+1]`` -> ``(n, beta = alpha - n)``."""
    if not (math.isfinite(alpha) and alpha > 0):
        raise NonPositiveOrder(f"order must be > 0, got {alpha}")
    n = math.ceil(alpha) - 1
    return n, alpha - n


def mult_conformable_derivative(f: GridFn, alpha: float, side: Side = Side.Left) -> GridFn:
    """Multiplicative conformable derivative ``exp(T_alpha ln f)``.

    For ``alpha in (n, n+1]`` the order-``beta = alpha - n`` operator acts
    on the ``n``-th log-derivative.  On the right side that derivative is
    ``(-d/dt)^n``, which is what makes the right-hand inversion identity
    hold.
    """
    n, beta = _split_conformable(float(alpha))

    def op(g: GridFn) -> GridFn:
        if n:
            g = finite_diff(g, n)
            if side is Side.Right and n % 2:
                g = g.with_values(-g.values)
        return classical.conformable_derivative(g, beta, side)

    return _lifted(op, f)


def mult_conformable_integral(f: GridFn, alpha: float, side: Side = Side.Left) -> GridFn:
    """Multiplicative conformable integral.

    ``alpha in (0, 1]``: ``exp(int (x-a)^(alpha-1) ln f(x) dx)``.  For
    ``alpha in (n, n+1]`` the kernel-weighted integral of order
    ``beta = alpha - n`` is followed by ``n`` plain integrations.
    """
    n, beta = _split_conformable(float(alpha))

    def op(g: GridFn) -> GridFn:
        q = classical.conformable_integral(g, beta, side)
        if n:
            q = classical.cauchy_iterated_integral(q, n, side)
        return q

    return _lifted(op, f)


def conformable_limit(
    fn: Callable[[float], float],
    alpha: float,
    t: float,
    a: float,
    b: float,
    side: Side = Side.Left,
    eps: float = 1e-4,
) -> float:
    """Conformable quotient before the limit ``eps -> 0``.

    Left: ``(f(t + eps (t-a)^(1-alpha)) / f(t))^(1/eps)``;
    right: ``(f(t + eps (b-t)^(1-alpha)) / f(t))^(-1/eps)``.
    *fn* is evaluated off-grid, so it must be a callable.
    """
    if side is Side.Left:
        ratio = fn(t + eps * (t - a) ** (1.0 - alpha)) / fn(t)
        return ratio ** (1.0 / eps)
    ratio = fn(t + eps * (b - t) ** (1.0 - alpha)) / fn(t)
    return ratio ** (-1.0 / eps)
