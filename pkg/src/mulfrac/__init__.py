"""Multiplicative fractional calculus on uniform grids.

Positive functions are carried to log space, acted on by the classical
Riemann-Liouville, Caputo, Grunwald-Letnikov or conformable operator, and
brought back with ``exp``.
"""

from mulfrac.core import (
    FracOrder,
    GridFn,
    Interval,
    Side,
    UniformGrid,
    exp_drop,
    log_lift,
    make_grid,
    sample,
)
from mulfrac.multiplicative import (
    Direction,
    Kind,
    OperatorRequest,
    conformable_limit,
    letnikov_product,
    mult_caputo,
    mult_caputo_via_rl,
    mult_conformable_derivative,
    mult_conformable_integral,
    mult_derivative,
    mult_derivative_limit_quotient,
    mult_integral,
    mult_letnikov_derivative,
    mult_letnikov_integral,
    mult_rl_derivative,
    mult_rl_integral,
)
from mulfrac.parser import Function, parse

__version__ = "0.1.0"

__all__ = [
    "Direction",
    "FracOrder",
    "Function",
    "GridFn",
    "Interval",
    "Kind",
    "OperatorRequest",
    "Side",
    "UniformGrid",
    "conformable_limit",
    "exp_drop",
    "letnikov_product",
    "log_lift",
    "make_grid",
    "mult_caputo",
    "mult_caputo_via_rl",
    "mult_conformable_derivative",
    "mult_conformable_integral",
    "mult_derivative",
    "mult_derivative_limit_quotient",
    "mult_integral",
    "mult_letnikov_derivative",
    "mult_letnikov_integral",
    "mult_rl_derivative",
    "mult_rl_integral",
    "parse",
    "sample",
]
