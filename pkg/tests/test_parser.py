import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulfrac.errors import EvalDomainError, ExprSyntaxError, UnknownFunction
from mulfrac.parser import (
    Binary,
    Const,
    Function,
    Number,
    Unary,
    Var,
    eval_expr,
    parse,
    to_text,
)

# (text, t, expected); every case must evaluate exactly
PRECEDENCE_CORPUS = [
    ("2^3^2", 0, 512.0),
    ("1+2*3", 0, 7.0),
    ("(1+2)*3", 0, 9.0),
    ("2*3+4", 0, 10.0),
    ("10-4-3", 0, 3.0),
    ("10-(4-3)", 0, 9.0),
    ("64/8/2", 0, 4.0),
    ("64/(8/2)", 0, 16.0),
    ("2*3^2", 0, 18.0),
    ("(2*3)^2", 0, 36.0),
    ("-2^2", 0, -4.0),
    ("(-2)^2", 0, 4.0),
    ("2^-1", 0, 0.5),
    ("2^-1^2", 0, 0.5),
    ("--3", 0, 3.0),
    ("-3*-2", 0, 6.0),
    ("1-2+3", 0, 2.0),
    ("1-2*3", 0, -5.0),
    ("8/2*4", 0, 16.0),
    ("2+3^2*2", 0, 20.0),
    ("t^2+1", 3, 10.0),
    ("t*t*t", 2, 8.0),
    ("t^t", 2, 4.0),
    ("(t+1)^(t-1)", 3, 16.0),
    ("exp(0)", 0, 1.0),
    ("exp(sin(t))", 0, 1.0),
    ("ln(1)", 0, 0.0),
    ("sqrt(16)+1", 0, 5.0),
    ("abs(-3)^2", 0, 9.0),
    ("-abs(-3)", 0, -3.0),
    ("cos(0)*2", 0, 2.0),
    ("2^2^0", 0, 2.0),
    ("1.5e1+0.5", 0, 15.5),
    (".5*4", 0, 2.0),
    ("4^0.5", 0, 2.0),
    ("  1 +\t2 ", 0, 3.0),
    ("-t^2", 3, -9.0),
    ("1/-2", 0, -0.5),
    ("e^0", 0, 1.0),
    ("pi-pi", 0, 0.0),
]


@pytest.mark.parametrize("text,t,expected", PRECEDENCE_CORPUS)
def test_precedence_corpus(text, t, expected):
    assert eval_expr(parse(text), t) == expected


def test_corpus_size():
    assert len(PRECEDENCE_CORPUS) >= 30


def test_tree_shape():
    assert parse("exp((t-1)^0.5)") == Unary(
        "exp", Binary("pow", Binary("sub", Var(), Number(1.0)), Number(0.5))
    )
    assert parse("-2^2") == Unary("neg", Binary("pow", Number(2.0), Number(2.0)))
    assert parse("pi") == Const("pi")


@pytest.mark.parametrize(
    "text,offset",
    [("exp(", 4), ("2t", 1), ("(1", 2), ("1+", 2), ("exp 1", 4), ("1 $ 2", 2), ("", 0), ("1e999", 0)],
)
def test_syntax_error_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


def test_offsets_are_bytes():
    # the Greek letter takes two bytes in UTF-8
    with pytest.raises(ExprSyntaxError) as info:
        parse("1+ α")
    assert info.value.offset == 3
    with pytest.raises(ExprSyntaxError) as info:
        parse("α")
    assert info.value.offset == 0


def test_unknown_function():
    with pytest.raises(UnknownFunction) as info:
        parse("1 + foo(1)")
    assert info.value.offset == 4


@pytest.mark.parametrize(
    "text,t",
    [("ln(t)", 0), ("ln(t)", -1), ("sqrt(t)", -1), ("1/t", 0), ("t^-1", 0), ("t^0.5", -2)],
)
def test_eval_domain_errors(text, t):
    with pytest.raises(EvalDomainError):
        eval_expr(parse(text), t)


def test_eval_overflow_is_infinite():
    assert eval_expr(parse("exp(1000)"), 0) == math.inf
    assert eval_expr(parse("(-10)^999"), 0) == -math.inf


def test_function_callable():
    f = Function("exp(t)")
    assert f(1.0) == math.e
    assert f.text == "exp(t)"


# --------------------------------------------------------------------------
# round trip


def _random_expr(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.4:
            return Var()
        if r < 0.5:
            return Const(rng.choice(["e", "pi"]))
        return Number(rng.choice([rng.uniform(0, 5), float(rng.randint(0, 4)), rng.uniform(0, 1e-3)]))
    r = rng.random()
    if r < 0.3:
        return Unary(rng.choice(["neg", "exp", "sin", "cos", "abs", "ln", "sqrt"]), _random_expr(rng, depth - 1))
    return Binary(
        rng.choice(["add", "sub", "mul", "div", "pow"]),
        _random_expr(rng, depth - 1),
        _random_expr(rng, depth - 1),
    )


def _safe_eval(e, t):
    try:
        return ("ok", eval_expr(e, t))
    except EvalDomainError as exc:
        return ("err", exc.kind)


def _equivalent(a, b):
    if a[0] != b[0]:
        return False
    if a[0] == "err":
        return a[1] == b[1]
    x, y = a[1], b[1]
    if math.isnan(x) or math.isnan(y):
        return math.isnan(x) and math.isnan(y)
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= 1e-12 * max(1.0, abs(x))


def test_round_trip_fuzz_1000_seeded():
    rng = random.Random(20240617)
    for _ in range(1000):
        e = _random_expr(rng, 4)
        text = to_text(e)
        back = parse(text)
        assert back == e, text
        for t in (0.0, 0.3, 1.7, -0.9):
            assert _equivalent(_safe_eval(e, t), _safe_eval(back, t)), text


_leaf = st.one_of(
    st.just(Var()),
    st.sampled_from([Const("e"), Const("pi")]),
    st.floats(min_value=0.0, max_value=1e6, allow_nan=False).map(Number),
)
_exprs = st.recursive(
    _leaf,
    lambda kids: st.one_of(
        st.tuples(st.sampled_from(["neg", "exp", "sin", "cos", "abs", "ln", "sqrt"]), kids).map(
            lambda p: Unary(*p)
        ),
        st.tuples(st.sampled_from(["add", "sub", "mul", "div", "pow"]), kids, kids).map(
            lambda p: Binary(*p)
        ),
    ),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(_exprs)
def test_round_trip_property(e):
    assert parse(to_text(e)) == e


@settings(max_examples=300, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_negative_literals_round_trip_by_value(v):
    back = parse(to_text(Number(v)))
    assert eval_expr(back, 0.0) == v
    assert math.copysign(1.0, eval_expr(back, 0.0)) == math.copysign(1.0, v)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="t0123456789.+-*/^() e", max_size=20))
def test_parse_never_crashes_unexpectedly(text):
    try:
        parse(text)
    except (ExprSyntaxError, UnknownFunction):
        pass
