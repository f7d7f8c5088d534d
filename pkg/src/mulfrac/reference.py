"""Closed-form values: the Gamma function and analytic multiplicative results.

These are the ground truths the numerical operators are checked against.
Power-law values use the exponents forced by the classical power rule::

    I^alpha (t - a)^(beta - 1) = Gamma(beta) / Gamma(alpha + beta) (x - a)^(alpha + beta - 1)
    D^alpha (t - a)^(beta - 1) = Gamma(beta) / Gamma(beta - alpha) (x - a)^(beta - alpha - 1)

lifted through ``exp``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from mulfrac.core import GridFn, Side, terminal_derivatives
from mulfrac.errors import GridTooCoarse, PoleError, WrongSide

# Lanczos approximation, g = 7, 9 terms
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _is_pole(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def gamma(x: float) -> float:
    """Gamma function for real ``x`` via the Lanczos approximation.

    Uses the reflection formula below ``0.5``. Raises :class:`PoleError`
    at ``0, -1, -2, ...``.
    """
    x = float(x)
    if _is_pole(x):
        raise PoleError(f"Gamma has a pole at {x:g}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))

    z = x - 1.0
    series = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        series += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power so the product survives up to x ~ 171
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * (half * math.exp(-t)) * half * series


def rgamma(x: float) -> float:
    """``1 / Gamma(x)``, continued by zero at the poles."""
    if _is_pole(x):
        return 0.0
    return 1.0 / gamma(x)


class Kind(enum.Enum):
    Integral = "integral"
    Derivative = "derivative"


@dataclass(frozen=True)
class PowerLawCase:
    """``exp((t - terminal)^(beta - 1))`` under an RL integral or derivative."""

    alpha: float
    beta: float
    side: Side
    kind: Kind

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("power-law cases need alpha > 0 and beta > 0")
        if self.kind is Kind.Derivative and _is_pole(self.beta - self.alpha):
            raise PoleError(
                f"Gamma(beta - alpha) = Gamma({self.beta - self.alpha:g}) is a pole"
            )

    def exponent_coefficient(self) -> tuple[float, float]:
        """Return ``(c, p)`` with the value ``exp(c * d**p)``."""
        if self.kind is Kind.Integral:
            c = gamma(self.beta) / gamma(self.alpha + self.beta)
            return c, self.alpha + self.beta - 1.0
        c = gamma(self.beta) * rgamma(self.beta - self.alpha)
        return c, self.beta - self.alpha - 1.0


def _distance(side: Side, terminal: float, x: float) -> float:
    d = x - terminal if side is Side.Left else terminal - x
    if d < 0:
        raise WrongSide(f"x={x} lies on the wrong side of the {side.value} terminal {terminal}")
    return d


def power_law_mult_value(case: PowerLawCase, terminal: float, x: float) -> float:
    """Closed form of the multiplicative RL operator of ``exp(d^(beta-1))``.

    ``d`` is ``x - a`` for the left side and ``b - x`` for the right side,
    with *terminal* being ``a`` or ``b`` respectively.
    """
    d = _distance(case.side, terminal, x)
    c, p = case.exponent_coefficient()
    if c == 0.0:
        return 1.0
    if d == 0.0:
        if p > 0:
            return 1.0
        if p == 0:
            return math.exp(c)
        return math.inf if c > 0 else 0.0
    return math.exp(c * d**p)


def constant_mult_rl_value(c: float, alpha: float, distance: float) -> float:
    """Multiplicative RL derivative of the constant ``c`` at *distance* from the terminal.

    Equals ``exp(ln(c) * d^(-alpha) / Gamma(1 - alpha))``; integer orders
    give ``1`` since the ordinary derivative of a constant vanishes.
    """
    if c <= 0:
        raise ValueError(f"constant must be positive, got {c}")
    if alpha <= 0:
        raise ValueError(f"order must be positive, got {alpha}")
    if float(alpha).is_integer():
        return 1.0
    lnc = math.log(c)
    if lnc == 0.0:
        return 1.0
    if distance == 0.0:
        # ln(c)/Gamma(1-alpha) * inf
        s = lnc * rgamma(1.0 - alpha)
        return math.inf if s > 0 else 0.0
    return math.exp(lnc * distance ** (-alpha) / gamma(1.0 - alpha))


def taylor_tail_log(f: GridFn, n: int, side: Side) -> np.ndarray:
    """``S_g`` on the grid: the degree ``n - 1`` Taylor polynomial of ``ln f``
    at the terminal, in powers of ``t - terminal``.

    For the right side ``(-1)^k g^(k)(b) (b - t)^k = g^(k)(b) (t - b)^k``.
    """
    if n < 1:
        raise ValueError(f"tail length must be >= 1, got {n}")
    if not f.positive:
        raise ValueError("taylor tail needs a positive function")
    if n >= f.grid.n_points - 1:
        raise GridTooCoarse(f"{n} terminal derivatives need a finer grid")
    g = f.with_values(np.log(f.values))
    derivs = terminal_derivatives(g, n, side)
    d = f.grid.distance(side)
    if side is Side.Right:
        d = -d
    total = np.zeros_like(d)
    term = np.ones_like(d)
    for k, dk in enumerate(derivs):
        if k > 0:
            term = term * d / k
        total = total + dk * term
    return total


def taylor_tail_product(f: GridFn, n: int, side: Side) -> GridFn:
    """``prod_k exp(g^(k)(terminal) (+-d)^k / k!)`` with ``g = ln f``."""
    return f.with_values(np.exp(taylor_tail_log(f, n, side)), positive=True)
