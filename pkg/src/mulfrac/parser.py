"""Recursive-descent parser for scalar functions of ``t``.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?
    primary := number | 't' | 'e' | 'pi' | func '(' expr ')' | '(' expr ')'
    func    := exp | ln | sin | cos | sqrt | abs

``^`` is right-associative and binds tighter than a leading minus, so
``-2^2`` is ``-4`` and ``2^3^2`` is ``512``.  There is no implicit
multiplication.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from mulfrac.errors import EvalDomainError, ExprSyntaxError, UnknownFunction

FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt", "abs")
CONSTANTS = {"e": math.e, "pi": math.pi}


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or one of FUNCTIONS
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # "add", "sub", "mul", "div", "pow"
    left: "Expr"
    right: "Expr"


Expr = Union[Number, Var, Const, Unary, Binary]

_BINARY_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int  # byte offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(_byte_offset(text, pos), "a number, name or operator", text)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(_Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, expected: str) -> ExprSyntaxError:
        return ExprSyntaxError(self.tok.offset, expected, self.text)

    def accept(self, symbol: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == symbol:
            self.i += 1
            return True
        return False

    def expect(self, symbol: str) -> None:
        if not self.accept(symbol):
            raise self.error(f"'{symbol}'")

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error("an operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Binary("add", node, self.term())
            elif self.accept("-"):
                node = Binary("sub", node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = Binary("mul", node, self.factor())
            elif self.accept("/"):
                node = Binary("div", node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        if self.accept("-"):
            return Unary("neg", self.factor())
        base = self.primary()
        if self.accept("^"):
            return Binary("pow", base, self.factor())
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            value = float(tok.text)
            if not math.isfinite(value):
                raise self.error("a finite number")
            self.i += 1
            return Number(value)
        if tok.kind == "ident":
            self.i += 1
            name = tok.text
            if name == "t":
                return Var()
            if name in CONSTANTS:
                return Const(name)
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(name, arg)
            raise UnknownFunction(name, tok.offset)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("an expression")


def parse(text: str) -> Expr:
    """Parse *text* into an expression tree.

    >>> eval_expr(parse("2^3^2"), 0.0)
    512.0
    """
    return _Parser(text).parse()


def _pow(x: float, y: float) -> float:
    if x == 0.0 and y < 0:
        raise EvalDomainError("pow", "zero to a negative power")
    if x < 0 and not float(y).is_integer():
        raise EvalDomainError("pow", f"negative base {x} with non-integer exponent {y}")
    try:
        return math.pow(x, y)
    except OverflowError:
        return math.copysign(math.inf, x) if float(y).is_integer() and y % 2 else math.inf


def _apply_unary(op: str, v: float) -> float:
    if op == "neg":
        return -v
    if op == "exp":
        try:
            return math.exp(v)
        except OverflowError:
            return math.inf
    if op == "ln":
        if v <= 0:
            raise EvalDomainError("ln", f"logarithm of {v}")
        return math.log(v)
    if op == "sqrt":
        if v < 0:
            raise EvalDomainError("sqrt", f"square root of {v}")
        return math.sqrt(v)
    if op == "sin":
        return math.sin(v)
    if op == "cos":
        return math.cos(v)
    if op == "abs":
        return abs(v)
    raise ValueError(f"unknown unary op {op!r}")


def eval_expr(e: Expr, t: float) -> float:
    """Evaluate *e* at ``t`` in real arithmetic."""
    if isinstance(e, Number):
        return e.value
    if isinstance(e, Var):
        return float(t)
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Unary):
        return _apply_unary(e.op, eval_expr(e.arg, t))
    x = eval_expr(e.left, t)
    y = eval_expr(e.right, t)
    if e.op == "add":
        return x + y
    if e.op == "sub":
        return x - y
    if e.op == "mul":
        return x * y
    if e.op == "div":
        if y == 0.0:
            raise EvalDomainError("div", "division by zero")
        return x / y
    return _pow(x, y)


def to_text(e: Expr) -> str:
    """Serialize *e* fully parenthesized.

    ``parse(to_text(e))`` evaluates like *e* everywhere and equals it
    structurally for any tree :func:`parse` can produce.  A negative
    literal comes back as ``neg`` of a positive one.
    """
    if isinstance(e, Number):
        if math.copysign(1.0, e.value) > 0:
            return repr(e.value)
        return f"(-{-e.value!r})"
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{to_text(e.arg)})"
        return f"{e.op}({to_text(e.arg)})"
    return f"({to_text(e.left)}{_BINARY_SYMBOL[e.op]}{to_text(e.right)})"


def has_var(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Unary):
        return has_var(e.arg)
    if isinstance(e, Binary):
        return has_var(e.left) or has_var(e.right)
    return False


class Function:
    """A parsed expression usable as a plain callable ``f(t)``."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.expr = parse(text)

    def __call__(self, t: float) -> float:
        return eval_expr(self.expr, t)

    def __repr__(self) -> str:
        return f"Function({self.text!r})"
