import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rnsdiv.core import RnsValue, decode, encode, mod9_default_format, mod9_power_format
from rnsdiv.decomposition import decompose
from rnsdiv.engine import (
    DivisionOptions,
    apply_script_to_numer,
    divide,
    divide_int,
    final_correction,
)
from rnsdiv.errors import DivideByZero, FormatMismatch
from rnsdiv.golden import check_division
from rnsdiv.trace import Trace, cycle_estimate

from strategies import SMALL_FORMATS

FMT9 = mod9_default_format()
X, Y = 987654321, 11634943


def test_worked_example():
    c = check_division()
    assert c.ok, c.problems


def test_worked_example_power_only_format():
    c = check_division(mod9_power_format())
    assert c.ok, c.problems


def test_worked_example_result(fmt9):
    r = divide(encode(X, fmt9), encode(Y, fmt9))
    assert (decode(r.quotient), decode(r.remainder)) == (84, 10319109)
    assert r.iterations == 2 and r.z_values == [84, 0] and r.corrections == 0
    assert r.quotient.normalized and r.remainder.normalized
    assert r.script.y_hat == 11750400


def test_cycle_estimate_pinned(fmt9):
    # regression pin; the value follows from the estimator's weights
    r = divide(encode(X, fmt9), encode(Y, fmt9))
    assert r.cycle_estimate == 93
    assert cycle_estimate(r.trace) == 93
    assert cycle_estimate(Trace()) == 0
    assert cycle_estimate([]) == 0


def test_states_visited(fmt9):
    r = divide(encode(X, fmt9), encode(Y, fmt9))
    states = {row.state for row in r.trace.rows}
    assert {"LOAD_INIT", "INC_DENOM", "DIV_DENOM", "BASE_EXTEND", "UPDATE_ACCUM",
            "CALC_NUMER", "COMPARE", "CALC_REM", "DONE"} <= states


def test_fast_paths(fmt9):
    r = divide(encode(12345, fmt9), encode(1, fmt9))
    assert (decode(r.quotient), decode(r.remainder), r.iterations) == (12345, 0, 0)
    r = divide(encode(0, fmt9), encode(77, fmt9))
    assert (decode(r.quotient), decode(r.remainder)) == (0, 0)
    assert divide_int(5, 7, fmt9) == (0, 5)


def test_errors(fmt9, fmt8):
    with pytest.raises(DivideByZero):
        divide(encode(5, fmt9), encode(0, fmt9))
    with pytest.raises(ZeroDivisionError):
        divide_int(0, 0, fmt9)
    with pytest.raises(FormatMismatch):
        divide(encode(5, fmt9), encode(5, fmt8))
    v = encode(5, fmt9)
    with pytest.raises(ValueError):
        divide(RnsValue(fmt9, v.values, (1,) + v.powers[1:]), v)


def test_wraparound_divisor(fmt9):
    top = fmt9.range - 1
    assert divide_int(top, top, fmt9) == (1, 0)
    assert divide_int(top, top - 1, fmt9) == (1, 1)
    assert divide_int(top - 1, top, fmt9) == (0, top - 1)


@pytest.mark.parametrize("fmt", SMALL_FORMATS)
def test_small_formats_exhaustive(fmt):
    R = fmt.range
    step = max(1, R // 150)
    for x in range(0, R, step):
        for y in range(1, R, step):
            assert divide_int(x, y, fmt, options=DivisionOptions(trace_rows=False)) == divmod(x, y)


def test_toy_slice(toy):
    # the full sweep lives in the acceptance suite
    for x in range(0, toy.range, 7):
        for y in range(1, toy.range):
            assert divide_int(x, y, toy, options=DivisionOptions(trace_rows=False)) == divmod(x, y)


def operands():
    big = st.integers(0, FMT9.range - 1)
    small = st.integers(1, 64).flatmap(lambda b: st.integers(1, 2**b))
    return st.tuples(big, st.one_of(big.filter(bool), small))


@settings(max_examples=300, deadline=None)
@given(operands())
def test_euclid_and_iterations(xy):
    x, y = xy
    r = divide(encode(x, FMT9), encode(y, FMT9))
    q, rem = decode(r.quotient), decode(r.remainder)
    assert x == q * y + rem and 0 <= rem < y
    assert (q, rem) == divmod(x, y)
    if r.iterations:
        assert r.z_values[-1] == 0
    if r.script is not None:
        y_hat = r.script.y_hat
        prev = None
        for rec in r.records:
            assert rec.z == rec.numer_in // y_hat
            if prev is not None:
                assert rec.numer_in < prev
            prev = rec.numer_in


@settings(max_examples=150, deadline=None)
@given(operands())
def test_live_matches_replay(xy):
    x, y = xy
    a = divide(encode(x, FMT9), encode(y, FMT9))
    b = divide(encode(x, FMT9), encode(y, FMT9), options=DivisionOptions(live=True))
    assert decode(a.quotient) == decode(b.quotient)
    assert decode(a.remainder) == decode(b.remainder)
    assert a.z_values == b.z_values


def test_live_trace_repeats_denom(fmt9):
    r = divide(encode(X, fmt9), encode(Y, fmt9), options=DivisionOptions(live=True))
    inc = [row for row in r.trace.rows if row.action == "Increment DENOM"]
    assert len(inc) == 6  # three per iteration


def test_precomputed_script(fmt9):
    y = encode(Y, fmt9)
    r = divide(encode(X, fmt9), y, script=decompose(y))
    assert (decode(r.quotient), decode(r.remainder)) == (84, 10319109)
    assert not [row for row in r.trace.rows if row.register == "DENOM" and "Increment" in row.action]


def test_rows_off_keeps_results(fmt9):
    r = divide(encode(X, fmt9), encode(Y, fmt9), options=DivisionOptions(trace_rows=False))
    assert r.trace.rows == [] and r.z_values == [84, 0]
    assert r.cycle_estimate == 93


def test_apply_script(fmt9):
    script = decompose(encode(Y, fmt9))
    z = apply_script_to_numer(encode(X, fmt9), script)
    assert decode(z) == 84
    assert decode(apply_script_to_numer(encode(0, fmt9), script)) == 0
    t = Trace()
    z = apply_script_to_numer(encode(10319109, fmt9), script, trace=t)
    assert decode(z) == 0
    assert t.rows[-2].action == "Subtract 14 from NUMER"
    assert t.rows[-1].action == "Zero detected"


def test_final_correction(fmt9):
    y = encode(Y, fmt9)
    one = encode(1, fmt9)
    acc, rem, n = final_correction(encode(10319109, fmt9), y, one)
    assert (decode(acc), decode(rem), n) == (1, 10319109, 0)
    acc, rem, n = final_correction(y, y, one)
    assert (decode(acc), decode(rem), n) == (2, 0, 1)
    acc, rem, n = final_correction(encode(3 * Y + 5, fmt9), y, one)
    assert (decode(acc), decode(rem), n) == (4, 5, 3)
