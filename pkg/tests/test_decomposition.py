import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rnsdiv.core import RnsValue, encode, increment, mod9_default_format
from rnsdiv.decomposition import (
    BaseExtend,
    Increment,
    Scale,
    decompose,
    next_step,
)
from rnsdiv.errors import ZeroDivisor
from rnsdiv.golden import check_decomposition_example
from rnsdiv.scaling import scale_by_power

from strategies import SMALL_FORMATS

FMT9 = mod9_default_format()


def replay(y, script):
    """Plain-integer replay; returns the sequence of working values."""
    w = y
    seen = []
    for step in script.steps:
        seen.append(w)
        if isinstance(step, Increment):
            w += 1
        elif isinstance(step, Scale):
            assert w % step.factor == 0
            w //= step.factor
    assert w == 1
    return seen


def check_script(y, script):
    assert script.y_hat >= y
    assert (script.y_hat == y) == (script.increments == 0)
    assert replay(y, script) == list(script.visits)
    prev = None
    for step in script.steps:
        # never two increments without a scale in between
        if isinstance(step, Increment):
            assert not isinstance(prev, Increment)
        if not isinstance(step, BaseExtend):
            prev = step


def test_decomposition_example():
    c = check_decomposition_example()
    assert c.ok, c.problems


def test_decomposition_example_visits(fmt8):
    s = decompose(encode(123456, fmt8))
    inc_at = [w for w, st_ in zip(s.visits, s.steps) if isinstance(st_, Increment)]
    be_at = [w for w, st_ in zip(s.visits, s.steps) if isinstance(st_, BaseExtend)]
    assert inc_at == [643, 23]
    assert be_at == [23]


def test_table_divisor(fmt9):
    s = decompose(encode(11634943, fmt9))
    assert s.factors == [256, 25, 9, 2, 3, 2, 17]
    assert s.y_hat == 11750400
    assert str(s) == "Inc 256 BE Inc 25 9 2 Inc 3 2 17"
    assert s.to_json()[0] == {"op": "increment"}
    assert s.to_json()[1] == {"op": "scale", "index": 4, "k": 8, "factor": 256}


def test_one(fmt9):
    s = decompose(encode(1, fmt9))
    assert s.steps == () and s.y_hat == 1


def test_zero(fmt9):
    with pytest.raises(ZeroDivisor):
        decompose(encode(0, fmt9))


def test_next_step_examples(fmt8):
    i3, i2 = fmt8.index_of_base(3), fmt8.index_of_base(2)
    assert next_step(encode(123456, fmt8)) == Scale(i3, 1, 3)
    v = scale_by_power(scale_by_power(encode(123456, fmt8), i3, 1), i2, 6)
    assert next_step(v) == Increment()
    v = scale_by_power(increment(v), i2, 2)
    v = scale_by_power(v, fmt8.index_of_base(7), 1)
    assert v.powers[i2] == 0
    assert next_step(v) == BaseExtend()
    assert next_step(encode(1, fmt8)) is None


def test_toy_exhaustive(toy):
    for y in range(1, toy.range):
        check_script(y, decompose(encode(y, toy)))


@pytest.mark.parametrize("fmt", SMALL_FORMATS)
def test_small_formats_exhaustive(fmt):
    for y in range(1, min(fmt.range, 3000)):
        check_script(y, decompose(encode(y, fmt)))


def test_wraparound(toy):
    # 359 + 1 wraps to the full range; every digit, plain 5 included, is divided out
    s = decompose(encode(359, toy))
    assert s.y_hat == 360
    assert 5 in s.factors
    s = decompose(encode(358, toy))
    assert s.y_hat >= 358
    top = FMT9.range - 1
    s = decompose(encode(top, FMT9))
    assert s.y_hat >= top


@settings(max_examples=1000, deadline=None)
@given(st.integers(1, FMT9.range - 1))
def test_decomposition_properties(y):
    check_script(y, decompose(encode(y, FMT9)))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 64).flatmap(lambda b: st.integers(1, min(2**b, FMT9.range - 1))))
def test_decomposition_small_divisors(y):
    check_script(y, decompose(encode(y, FMT9)))


def test_reduced_start_value(fmt8):
    # works from a value with reduced powers, too
    v = encode(24, fmt8)
    v = RnsValue(fmt8, v.values, (2,) + v.powers[1:])
    assert decompose(v).factors == [3, 8]
