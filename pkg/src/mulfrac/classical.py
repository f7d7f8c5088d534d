"""Classical (additive) fractional operators on sampled real functions.

All weakly singular integrals use product trapezoidal quadrature: the
density is interpolated linearly between nodes and the kernel moments are
integrated exactly on each cell.  Conformable operators are the exception;
they are local, and are discretized in the variable ``u = s^alpha / alpha``
(see the section comment below).  Right-sided operators are computed as
left-sided ones on the mirrored function ``t -> a + b - t``.

Each kernel below works on the left side only and accumulates its sums in
index order (``np.convolve`` / ``np.cumsum``), so results are bitwise
reproducible for a fixed grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from mulfrac.core import (
    FracOrder,
    GridFn,
    Side,
    as_order,
    finite_diff,
    terminal_derivative_noise,
    terminal_derivatives,
)
from mulfrac.errors import GridTooCoarse, NonPositiveOrder, OrderOutOfRange
from mulfrac.reference import gamma, rgamma

Order = Union[FracOrder, float, int]


def _on_side(
    kernel: Callable[[np.ndarray, float], np.ndarray], g: GridFn, side: Side
) -> GridFn:
    if side is Side.Left:
        return g.with_values(kernel(g.values, g.grid.h))
    return g.with_values(kernel(g.values[::-1], g.grid.h)[::-1])


def caputo_n(order: FracOrder) -> int:
    """Number of classical derivatives taken by the Caputo operator.

    ``floor(alpha) + 1`` for fractional orders; an integer order ``m`` uses
    ``m`` itself so that the operator reduces to the ordinary ``m``-th
    derivative.
    """
    return int(order.alpha) if order.is_integer else order.n


# --------------------------------------------------------------------------
# Riemann-Liouville integrals


def _second_difference_of_power(m: np.ndarray, p: float) -> np.ndarray:
    # (m+1)^p - 2 m^p + (m-1)^p, written to avoid cancellation for large m
    with np.errstate(divide="ignore"):
        up = np.expm1(p * np.log1p(1.0 / m))
        down = np.expm1(p * np.log1p(-1.0 / m))
    return m**p * (up + down)


def _rl_integral_left(values: np.ndarray, h: float, alpha: float) -> np.ndarray:
    n = values.size
    out = np.zeros(n)
    if n == 1:
        return out

    m = np.arange(1, n, dtype=np.float64)
    w = np.empty(n)
    w[0] = 1.0
    w[1:] = _second_difference_of_power(m, alpha + 1.0)[: n - 1]

    # weight of the terminal node: (j-1)^(alpha+1) - (j-1-alpha) j^alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        first = m**alpha * (alpha + (m - 1.0) * np.expm1(alpha * np.log1p(-1.0 / m)))
    first[0] = alpha

    interior = np.convolve(values[1:], w)[: n - 1]
    scale = h**alpha / gamma(alpha + 2.0)
    out[1:] = scale * (first * values[0] + interior)
    return out


def rl_integral(g: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Riemann-Liouville integral ``I^alpha g`` at every grid point.

    The value at the terminal itself is ``0``.
    """
    alpha = _positive_alpha(order)
    return _on_side(lambda v, h: _rl_integral_left(v, h, alpha), g, side)


def _cumtrapz(values: np.ndarray, h: float) -> np.ndarray:
    out = np.zeros_like(values)
    out[1:] = np.cumsum(0.5 * h * (values[1:] + values[:-1]))
    return out


def cauchy_iterated_integral(g: GridFn, n: int, side: Side = Side.Left) -> GridFn:
    """``n``-fold repeated trapezoidal integral from the terminal."""
    if n < 1:
        raise NonPositiveOrder(f"iteration count must be >= 1, got {n}")

    def kernel(v: np.ndarray, h: float) -> np.ndarray:
        for _ in range(n):
            v = _cumtrapz(v, h)
        return v

    return _on_side(kernel, g, side)


# --------------------------------------------------------------------------
# RL and Caputo derivatives


def caputo_derivative(g: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Caputo derivative ``I^(n-alpha) g^(n)``.

    For the right side the density is ``(-1)^n g^(n)``.  ``g^(n)`` comes from
    :func:`~mulfrac.core.finite_diff`.
    """
    order = as_order(order)
    n = caputo_n(order)
    dn = finite_diff(g, n)
    if side is Side.Right and n % 2:
        dn = dn.with_values(-dn.values)
    rest = n - order.alpha
    if rest == 0:
        return dn
    return rl_integral(dn, rest, side)


def _tail_coefficients(g: GridFn, order: FracOrder, side: Side) -> np.ndarray:
    """``g^(k)(terminal) / Gamma(k+1-alpha)`` for ``k < n``, signed for the side.

    Derivative estimates within roundoff of zero count as zero, so a
    density that vanishes at the terminal does not produce a spurious
    singularity.
    """
    n = caputo_n(order)
    derivs = terminal_derivatives(g, n, side)
    if side is Side.Right:
        derivs = derivs * (-1.0) ** np.arange(n)
    noise = terminal_derivative_noise(g, n)
    coefs = np.zeros(n)
    for k in range(n):
        if k > 0 and abs(derivs[k]) <= noise[k]:
            continue
        coefs[k] = derivs[k] * rgamma(k + 1.0 - order.alpha)
    return coefs


def tail_diverges(g: GridFn, order: Order, side: Side = Side.Left) -> bool:
    """Whether the RL derivative of *g* is singular at the terminal."""
    return bool(np.any(_tail_coefficients(g, as_order(order), side) != 0.0))


def rl_tail(g: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Taylor-tail term ``sum_k g^(k)(terminal) d^(k-alpha) / Gamma(k+1-alpha)``.

    ``d`` is the distance to the terminal; for the right side the
    derivatives carry ``(-1)^k``.  The terminal itself holds ``+inf``
    whenever a coefficient is nonzero.
    """
    order = as_order(order)
    coefs = _tail_coefficients(g, order, side)
    d = g.grid.distance(side)
    ti = g.grid.terminal_index(side)
    inner = np.ones_like(d, dtype=bool)
    inner[ti] = False

    tail = np.zeros_like(d)
    for k, coef in enumerate(coefs):
        if coef != 0.0:
            tail[inner] += coef * d[inner] ** (k - order.alpha)
    if np.any(coefs != 0.0):
        tail[ti] = np.inf
    return g.with_values(tail)


def rl_derivative(g: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Riemann-Liouville derivative, as Caputo derivative plus Taylor tail.

    For ``n`` times differentiable ``g``::

        D^alpha g = C D^alpha g + sum_{k<n} g^(k)(a) (x - a)^(k - alpha) / Gamma(k + 1 - alpha)

    The terminal point holds ``+inf`` whenever the tail diverges there.
    """
    order = as_order(order)
    cap = caputo_derivative(g, order, side)
    tail = rl_tail(g, order, side)
    with np.errstate(invalid="ignore"):
        return g.with_values(cap.values + tail.values)


# --------------------------------------------------------------------------
# Grunwald-Letnikov sums


@dataclass(frozen=True)
class GLWeights:
    """Signed binomial weights ``w_r = (-1)^r C(alpha, r)``, ``r = 0..N``."""

    alpha: float
    coefficients: np.ndarray


def gl_weights(alpha: float, N: int) -> GLWeights:
    """Weights from ``w_0 = 1``, ``w_r = w_{r-1} (1 - (alpha + 1) / r)``.

    A negative ``alpha = -p`` gives the rising coefficients
    ``p (p+1) ... (p+r-1) / r!`` used by the GL integral.
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    r = np.arange(1, N + 1, dtype=np.float64)
    factors = 1.0 - (alpha + 1.0) / r
    w = np.empty(N + 1)
    w[0] = 1.0
    # cumprod multiplies left to right, same as the scalar recurrence
    w[1:] = np.cumprod(factors)
    return GLWeights(float(alpha), w)


def _gl_sum_left(values: np.ndarray, weights: np.ndarray, scale: float) -> np.ndarray:
    return scale * np.convolve(weights, values)[: values.size]


def gl_derivative(g: GridFn, order: Order, side: Side = Side.Left) -> GridFn:
    """Grunwald-Letnikov sum ``h^-alpha sum_r w_r g(t -+ r h)`` at every node.

    The step ``h`` is the grid spacing, so every shifted sample is on-node.
    At the terminal the sum is the single term ``h^-alpha g(terminal)``,
    which diverges as ``h -> 0``; that node carries the same ``+inf``
    marker as :func:`rl_derivative` whenever the limit is singular.
    """
    alpha = _positive_alpha(order)
    w = gl_weights(alpha, g.grid.n_points - 1).coefficients
    scale = g.grid.h ** (-alpha)
    out = _on_side(lambda v, h: _gl_sum_left(v, w, scale), g, side)
    if tail_diverges(g, alpha, side):
        values = out.values.copy()
        values[g.grid.terminal_index(side)] = np.inf
        out = g.with_values(values)
    return out


def rising_coefficients(p: float, N: int) -> np.ndarray:
    """``[p r] = p (p+1) ... (p+r-1) / r!`` for ``r = 0..N``."""
    r = np.arange(1, N + 1, dtype=np.float64)
    c = np.empty(N + 1)
    c[0] = 1.0
    c[1:] = np.cumprod((p + r - 1.0) / r)
    return c


def gl_integral(g: GridFn, p: float, side: Side = Side.Left) -> GridFn:
    """Grunwald-Letnikov integral ``h^p sum_r [p r] g(t -+ r h)``."""
    p = _positive_alpha(p)
    c = rising_coefficients(p, g.grid.n_points - 1)
    scale = g.grid.h**p
    return _on_side(lambda v, h: _gl_sum_left(v, c, scale), g, side)


# --------------------------------------------------------------------------
# conformable operators


# Conformable operators are ordinary calculus in the variable
# u = (t - a)^alpha / alpha: the derivative is d/du and the integral is
# int du.  Away from the terminal both are discretized with fourth-order
# stencils in u.  On the first cells two function classes meet: data
# smooth in t (powers s^k) and conformable integrals of such data (powers
# s^(k+alpha)).  The near-terminal stencils are exact on both.

_NEAR = 5  # nodes covered by the near-terminal stencils


def _solve_rows(basis: np.ndarray, targets: np.ndarray) -> np.ndarray:
    # weights w with basis @ w = target for each target row
    return np.linalg.solve(basis, targets.T).T


def _near_derivative_weights(alpha: float) -> np.ndarray:
    """Rows ``i = 0..3`` of the unit-step stencil for ``s^(1-alpha) d/ds``.

    Exact for ``1, s, s^2, s^alpha, s^(1+alpha)`` on the nodes ``s = 0..4``.
    """
    j = np.arange(_NEAR, dtype=np.float64)
    powers = np.array([0.0, 1.0, 2.0, alpha, 1.0 + alpha])
    with np.errstate(divide="ignore"):
        basis = j[None, :] ** powers[:, None]
    basis[0, 0] = 1.0

    rows = []
    for i in range(_NEAR - 1):
        t = np.empty(len(powers))
        for m, p in enumerate(powers):
            # s^(1-alpha) * d/ds s^p = p s^(p - alpha)
            t[m] = p * float(i) ** (p - alpha) if i > 0 else (alpha if p == alpha else 0.0)
        rows.append(t)
    return _solve_rows(basis, np.array(rows))


def _near_integral_weights(alpha: float) -> np.ndarray:
    """Rows ``j = 1..4``: unit-step weights for ``int_0^j s^(alpha-1) P(s) ds``.

    ``P`` interpolates the nodes ``0..4`` in ``1, s, s^2, s^(1-alpha), s^(2-alpha)``.
    """
    j = np.arange(_NEAR, dtype=np.float64)
    powers = np.array([0.0, 1.0, 2.0, 1.0 - alpha, 2.0 - alpha])
    basis = j[None, :] ** powers[:, None]
    ends = j[1:]
    moments = ends[:, None] ** (powers + alpha)[None, :] / (powers + alpha)[None, :]
    return _solve_rows(basis, moments)


def _stencil_start(count: int, n: int, width: int, offset: int) -> np.ndarray:
    return np.clip(np.arange(count) - offset, 0, n - width)


def _far_derivative(values: np.ndarray, u: np.ndarray, first: int) -> np.ndarray:
    # 5-point first-derivative weights on the nonuniform nodes u
    n = u.size
    width = min(5, n)
    rows = np.arange(first, n)
    start = _stencil_start(n, n, width, width // 2)[rows]
    idx = start[:, None] + np.arange(width)[None, :]
    du = u[idx] - u[rows][:, None]
    scale = np.abs(du).max(axis=1, keepdims=True)
    z = du / scale
    vander = np.stack([z**m for m in range(width)], axis=1)
    rhs = np.zeros((rows.size, width, 1))
    rhs[:, 1, 0] = 1.0
    w = np.linalg.solve(vander, rhs)[..., 0] / scale
    return np.sum(w * values[idx], axis=1)


def _far_integral_increments(values: np.ndarray, u: np.ndarray, first: int) -> np.ndarray:
    # int du over cells [u_k, u_k+1], k >= first, of a local cubic interpolant
    n = u.size
    width = min(4, n)
    cells = np.arange(first, n - 1)
    start = _stencil_start(n - 1, n, width, width // 2 - 1)[cells]
    idx = start[:, None] + np.arange(width)[None, :]
    length = (u[cells + 1] - u[cells])[:, None]
    z = (u[idx] - u[cells][:, None]) / length
    vander = np.stack([z**m for m in range(width)], axis=1)
    rhs = np.array([1.0 / (m + 1) for m in range(width)])
    rhs = np.broadcast_to(rhs[None, :, None], (cells.size, width, 1))
    w = np.linalg.solve(vander, rhs)[..., 0] * length
    return np.sum(w * values[idx], axis=1)


def _conformable_derivative_left(values: np.ndarray, h: float, alpha: float) -> np.ndarray:
    if alpha == 1.0:
        return np.gradient(values, h, edge_order=2)
    n = values.size
    u = (np.arange(n) * h) ** alpha / alpha
    out = np.empty(n)
    near = _near_derivative_weights(alpha) * h ** (-alpha)
    out[: _NEAR - 1] = near @ values[:_NEAR]
    out[_NEAR - 1 :] = _far_derivative(values, u, _NEAR - 1)
    return out


def _conformable_integral_left(values: np.ndarray, h: float, alpha: float) -> np.ndarray:
    if alpha == 1.0:
        return _cumtrapz(values, h)
    n = values.size
    u = (np.arange(n) * h) ** alpha / alpha
    out = np.zeros(n)
    near = _near_integral_weights(alpha) * h**alpha
    out[1:_NEAR] = near @ values[:_NEAR]
    if n > _NEAR:
        inc = _far_integral_increments(values, u, _NEAR - 1)
        out[_NEAR:] = out[_NEAR - 1] + np.cumsum(inc)
    return out


def _check_conformable(alpha: float, g: GridFn) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0):
        raise OrderOutOfRange(f"conformable order must lie in (0, 1], got {alpha}")
    if alpha != 1.0 and g.grid.n_points < _NEAR:
        raise GridTooCoarse(f"fractional conformable operators need >= {_NEAR} points")
    return alpha


def conformable_derivative(g: GridFn, alpha: float, side: Side = Side.Left) -> GridFn:
    """``(t - a)^(1-alpha) g'(t)`` on the left, ``-(b - t)^(1-alpha) g'(t)`` on the right.

    Computed as ``dg/du`` with ``u = d^alpha / alpha`` and ``d`` the distance
    to the terminal.  ``alpha = 1`` is the plain second-order difference.
    """
    alpha = _check_conformable(alpha, g)
    # the right operator is the left one of the mirrored function
    return _on_side(lambda v, h: _conformable_derivative_left(v, h, alpha), g, side)


def conformable_integral(g: GridFn, alpha: float, side: Side = Side.Left) -> GridFn:
    """``int_a^t (x - a)^(alpha-1) g(x) dx`` (left) or ``int_t^b (b - x)^(alpha-1) g(x) dx`` (right).

    Product quadrature with exact kernel moments; ``alpha = 1`` is the plain
    cumulative trapezoid.
    """
    alpha = _check_conformable(alpha, g)
    return _on_side(lambda v, h: _conformable_integral_left(v, h, alpha), g, side)


def _positive_alpha(order: Order) -> float:
    alpha = order.alpha if isinstance(order, FracOrder) else float(order)
    if not (math.isfinite(alpha) and alpha > 0):
        raise NonPositiveOrder(f"order must be > 0, got {alpha}")
    return alpha
