import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from mulfrac.cli import main
from mulfrac.reference import constant_mult_rl_value


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def csv_rows(text):
    lines = text.strip().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_eval_caputo_constant():
    code, text = run("eval", "--op", "mcaputo", "--fn", "5", "--alpha", "0.5", "--a", "0", "--b", "1")
    assert code == 0
    header, rows = csv_rows(text)
    assert header == "x,value"
    assert len(rows) == 1025
    assert all(r[1] == "1" for r in rows)
    assert float(rows[0][0]) == 0.0 and float(rows[-1][0]) == 1.0


def test_eval_rl_constant_with_reference():
    code, text = run("eval", "--op", "mrl-deriv", "--fn", "e", "--alpha", "0.5", "--a", "0", "--b", "1", "--ref")
    assert code == 0
    header, rows = csv_rows(text)
    assert header == "x,value,reference,abs_err"
    assert rows[0][1:] == ["inf", "inf", "0"]
    errs = [float(r[3]) for r in rows[1:]]
    assert max(errs) <= 1e-3
    x = float(rows[-1][0])
    assert float(rows[-1][2]) == constant_mult_rl_value(math.e, 0.5, x)


def test_eval_non_positive_function_exit_3(capsys):
    code, text = run("eval", "--op", "mrl-int", "--fn", "t", "--alpha", "0.5", "--a", "0", "--b", "1")
    assert code == 3
    assert text == ""
    assert "error" in capsys.readouterr().err


def test_eval_undefined_function_exit_3():
    code, _ = run("eval", "--op", "mint", "--fn", "ln(t)")
    assert code == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--op", "mrl-int", "--fn", "exp(", "--alpha", "0.5"],
        ["eval", "--op", "mrl-int", "--fn", "foo(t)", "--alpha", "0.5"],
        ["eval", "--op", "nosuch", "--fn", "1"],
        ["eval", "--op", "mrl-int", "--fn", "1"],
        ["eval", "--op", "mrl-int", "--fn", "1", "--alpha", "-1"],
        ["eval", "--op", "mrl-int", "--fn", "1", "--alpha", "0.5", "--a", "1", "--b", "0"],
        ["eval", "--op", "mrl-int", "--fn", "1", "--alpha", "0.5", "--grid", "2"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv, out=io.StringIO()) == 2
    assert capsys.readouterr().err


def test_eval_no_closed_form_exit_4():
    code, _ = run("eval", "--op", "mrl-int", "--fn", "sin(t)+2", "--alpha", "0.5", "--ref")
    assert code == 4


def test_eval_power_law_reference():
    code, text = run("eval", "--op", "mrl-int", "--fn", "exp(t^0.5)", "--alpha", "0.5", "--grid", "2049", "--ref")
    assert code == 0
    _, rows = csv_rows(text)
    value = np.array([float(r[1]) for r in rows])
    ref = np.array([float(r[2]) for r in rows])
    assert np.max(np.abs(np.log(value) - np.log(ref))) <= 1e-3


def test_eval_right_side_power_law_reference():
    code, text = run(
        "eval", "--op", "mrl-deriv", "--fn", "exp((1-t)^2)", "--alpha", "0.5", "--side", "right", "--ref"
    )
    assert code == 0
    _, rows = csv_rows(text)
    errs = [float(r[3]) for r in rows if r[3] != "nan"]
    assert max(errs) <= 1e-3


def test_eval_mderiv_and_mint():
    code, text = run("eval", "--op", "mderiv", "--fn", "exp(t^2)", "--n", "2", "--grid", "257", "--ref")
    assert code == 4  # no closed form registered for this function
    code, text = run("eval", "--op", "mint", "--fn", "e", "--grid", "5", "--ref")
    assert code == 0
    _, rows = csv_rows(text)
    assert [float(r[1]) for r in rows] == pytest.approx([math.exp(x) for x in (0, 0.25, 0.5, 0.75, 1)])


def test_eval_json_is_byte_stable():
    argv = ("eval", "--op", "mrl-deriv", "--fn", "e", "--alpha", "0.5", "--grid", "9", "--out", "json", "--ref")
    a = run(*argv)[1]
    b = run(*argv)[1]
    assert a == b
    doc = json.loads(a)
    assert set(doc) == {"x", "value", "reference", "abs_err", "meta"}
    assert doc["value"][0] is None
    assert doc["meta"]["op"] == "mrl-deriv" and doc["meta"]["grid"] == 9


def test_csv_uses_17_significant_digits():
    _, text = run("eval", "--op", "mint", "--fn", "e", "--grid", "4", "--b", "1")
    _, rows = csv_rows(text)
    assert rows[1][0] == "%.17g" % (1 / 3)


def test_verify_single_and_unknown():
    code, text = run("verify", "--suite", "caputo_constant")
    assert code == 0
    assert text.startswith("PASS caputo_constant observed=")
    code, _ = run("verify", "--suite", "nosuch")
    assert code == 2


def test_verify_json():
    code, text = run("verify", "--suite", "caputo_constant,rl_constant", "--out", "json")
    assert code == 0
    assert [r["name"] for r in json.loads(text)] == ["caputo_constant", "rl_constant"]


def test_table_power_int():
    code, text = run("table", "--case", "power-int", "--alpha", "0.5", "--beta", "1.5", "--a", "0", "--b", "1")
    assert code == 0
    header, rows = csv_rows(text)
    assert header == "x,numeric,closed_form,abs_err"
    num = np.array([float(r[1]) for r in rows])
    ref = np.array([float(r[2]) for r in rows])
    assert np.max(np.abs(np.log(num) - np.log(ref))) <= 1e-3


def test_table_constant_alpha_one():
    code, text = run("table", "--case", "constant", "--alpha", "1")
    assert code == 0
    _, rows = csv_rows(text)
    assert all(r[2] == "1" for r in rows)


def test_table_pole_exit_4():
    code, _ = run("table", "--case", "power-deriv", "--alpha", "1.5", "--beta", "1.5")
    assert code == 4


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mulfrac", "eval", "--op", "mcaputo", "--fn", "5", "--alpha", "0.5", "--grid", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "x,value\n0,1\n0.5,1\n1,1\n"
