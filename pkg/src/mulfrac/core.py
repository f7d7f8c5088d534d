"""Uniform grids, sampled functions and the log/exp bridge.

Every multiplicative operator in this package is computed by taking the
logarithm of a positive sampled function (:func:`log_lift`), applying an
ordinary additive operator and exponentiating once at the end
(:func:`exp_drop`).
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

from mulfrac.errors import (
    DegenerateInterval,
    GridTooCoarse,
    NonFiniteValue,
    NonPositiveOrder,
    NotPositive,
    Overflow,
    PositivityViolation,
    TooFewPoints,
)


class Side(enum.Enum):
    """Terminal point an operator accumulates memory from."""

    #: Terminal at the left endpoint ``a``.
    Left = "left"
    #: Terminal at the right endpoint ``b``.
    Right = "right"


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DegenerateInterval(f"interval endpoints must be finite: [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise DegenerateInterval(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class UniformGrid:
    interval: Interval
    n_points: int

    def __post_init__(self) -> None:
        if self.n_points < 3:
            raise TooFewPoints(f"a grid needs at least 3 points, got {self.n_points}")

    @property
    def a(self) -> float:
        return self.interval.a

    @property
    def b(self) -> float:
        return self.interval.b

    @property
    def h(self) -> float:
        return (self.interval.b - self.interval.a) / (self.n_points - 1)

    @cached_property
    def points(self) -> np.ndarray:
        x = np.linspace(self.interval.a, self.interval.b, self.n_points)
        x.setflags(write=False)
        return x

    def distance(self, side: Side) -> np.ndarray:
        """Distance of every grid point from the terminal of *side*."""
        if side is Side.Left:
            d = self.points - self.a
        else:
            d = self.b - self.points
        # endpoints are reproduced exactly by linspace, so the terminal is exactly 0
        return np.maximum(d, 0.0)

    def terminal_index(self, side: Side) -> int:
        return 0 if side is Side.Left else self.n_points - 1


@dataclass(frozen=True, eq=False)
class GridFn:
    """A function sampled on a :class:`UniformGrid`.

    ``positive`` records that the samples were validated as strictly
    positive; operators that take a logarithm trust this flag instead of
    re-checking.
    """

    grid: UniformGrid
    values: np.ndarray
    positive: bool = False

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} values, got shape {values.shape}"
            )
        if self.positive and not np.all(values > 0):
            raise PositivityViolation("values flagged positive contain entries <= 0")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def with_values(self, values: np.ndarray, positive: bool = False) -> GridFn:
        return GridFn(self.grid, values, positive)

    def mirrored(self) -> GridFn:
        """Reflect about the interval midpoint, ``t -> a + b - t``."""
        return GridFn(self.grid, self.values[::-1], self.positive)

    def __len__(self) -> int:
        return self.grid.n_points


@dataclass(frozen=True)
class FracOrder:
    """Real fractional order ``alpha > 0`` and ``n = floor(alpha) + 1``."""

    alpha: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise NonPositiveOrder(f"order must be a finite real > 0, got {self.alpha}")

    @property
    def n(self) -> int:
        return math.floor(self.alpha) + 1

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer()


def as_order(order: Union[FracOrder, float, int]) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(float(order))


def make_grid(interval: Interval, n_points: int) -> UniformGrid:
    return UniformGrid(interval, int(n_points))


def sample(
    fn: Callable[[float], float],
    grid: UniformGrid,
    require_positive: bool = False,
) -> GridFn:
    """Evaluate *fn* at every grid point.

    *fn* is any callable of one real argument; a parsed
    :class:`~mulfrac.parser.Expr` qualifies. Non-finite samples raise
    :class:`NonFiniteValue`; with *require_positive*, samples ``<= 0``
    raise :class:`PositivityViolation`.
    """
    values = np.array([fn(float(t)) for t in grid.points], dtype=np.float64)

    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFiniteValue(f"non-finite value {values[i]} at t={grid.points[i]}")
    if require_positive:
        bad = values <= 0
        if bad.any():
            i = int(np.argmax(bad))
            raise PositivityViolation(f"value {values[i]} <= 0 at t={grid.points[i]}")

    return GridFn(grid, values, positive=require_positive)


def log_lift(f: GridFn) -> GridFn:
    if not f.positive:
        raise NotPositive("log_lift needs a function flagged positive")
    return f.with_values(np.log(f.values), positive=False)


def exp_drop(g: GridFn) -> GridFn:
    """Exponentiate; ``+inf`` singular markers pass through as ``inf``."""
    with np.errstate(over="ignore"):
        values = np.exp(g.values)
    overflow = np.isinf(values) & np.isfinite(g.values)
    if overflow.any():
        i = int(np.argmax(overflow))
        raise Overflow(f"exp({g.values[i]}) overflows at t={g.x[i]}")
    return GridFn(g.grid, values, positive=bool(np.all(values > 0)))


def _diff1(values: np.ndarray, h: float) -> np.ndarray:
    # second-order central inside, second-order one-sided at both ends
    return np.gradient(values, h, edge_order=2)


@functools.lru_cache(maxsize=None)
def _edge_weights(order: int) -> np.ndarray:
    """Row ``i`` differentiates at node ``i`` from nodes ``0..order+1`` (unit step).

    ``order + 2`` nodes make each row exact for polynomials of degree
    ``order + 1``, i.e. second-order accurate like the interior.
    """
    offsets = np.arange(order + 2, dtype=np.float64)
    powers = np.arange(order + 2)
    rhs = np.zeros(order + 2)
    rhs[order] = math.factorial(order)
    rows = [np.linalg.solve(np.vander(offsets - i, increasing=True).T, rhs) for i in range(order)]
    return np.array(rows)


def finite_diff(g: GridFn, order: int = 1) -> GridFn:
    """Derivative of *order* by repeated second-order differencing.

    Repeating the one-sided end stencil costs one order of accuracy per
    pass at the first ``order`` nodes of each end, so those nodes are
    recomputed with one-shot stencils instead.  The output lives on the
    same grid as the input.
    """
    if order < 1:
        raise ValueError(f"derivative order must be >= 1, got {order}")
    if order >= g.grid.n_points - 1:
        raise GridTooCoarse(
            f"order {order} derivative needs more than {order + 1} points"
        )
    h = g.grid.h
    # shifting by a sample leaves every derivative unchanged but makes
    # the stencils of a constant cancel exactly
    base = g.values - g.values[0]
    values = base
    for _ in range(order):
        values = _diff1(values, h)
    if order > 1:
        w = _edge_weights(order) / h**order
        width = order + 2
        values[:order] = w @ base[:width]
        values[-order:] = ((-1) ** order * (w @ base[::-1][:width]))[::-1]
    return g.with_values(values)


# extra nodes beyond the minimum in terminal stencils; the Taylor tail
# multiplies these derivatives by negative powers of the distance, so
# truncation error there is amplified and has to be pushed far down
_TERMINAL_EXTRA = 6


@functools.lru_cache(maxsize=None)
def _one_sided_weights(order: int, width: int) -> np.ndarray:
    """Weights for the *order*-th derivative at node 0 from nodes ``0..width-1`` (unit step)."""
    offsets = np.arange(width, dtype=np.float64)
    rhs = np.zeros(width)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(np.vander(offsets, increasing=True).T, rhs)


def _terminal_width(order: int, n_points: int) -> int:
    return min(order + _TERMINAL_EXTRA, n_points)


def terminal_derivatives(g: GridFn, count: int, side: Side) -> np.ndarray:
    """Derivatives ``g^(k)`` in ``t`` for ``k < count`` at the terminal of *side*.

    Each uses a one-sided stencil exact for polynomials of degree
    ``k + 5``.
    """
    if count >= g.grid.n_points - 1:
        raise GridTooCoarse(f"{count} terminal derivatives need a finer grid")
    v = g.values if side is Side.Left else g.values[::-1]
    # the shift makes constants difference to exactly zero
    v = v - v[0]
    sign = 1.0 if side is Side.Left else -1.0
    out = np.empty(count)
    out[0:1] = g.values[g.grid.terminal_index(side)]
    for k in range(1, count):
        width = _terminal_width(k, g.grid.n_points)
        w = _one_sided_weights(k, width)
        out[k] = sign**k * float(w @ v[:width]) / g.grid.h**k
    return out


def terminal_derivative_noise(g: GridFn, count: int) -> np.ndarray:
    """Roundoff bound on each entry of :func:`terminal_derivatives`.

    A derivative estimate below its bound is indistinguishable from zero.
    """
    finite = g.values[np.isfinite(g.values)]
    scale = float(np.max(np.abs(finite))) if finite.size else 0.0
    eps = np.finfo(float).eps
    out = np.zeros(count)
    for k in range(1, count):
        w = _one_sided_weights(k, _terminal_width(k, g.grid.n_points))
        out[k] = 8.0 * eps * scale * float(np.sum(np.abs(w))) / g.grid.h**k
    return out
