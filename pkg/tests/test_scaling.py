import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rnsdiv.core import RnsValue, decode, effective_range, encode, mod9_default_format
from rnsdiv.errors import DigitInvalid, NotDivisible, PowerExceeded
from rnsdiv.golden import check_scaling_example
from rnsdiv.scaling import multi_factor_scale, offset_for, scale_by_power
from rnsdiv.trace import Trace

from strategies import reduced_values

FMT9 = mod9_default_format()


@settings(max_examples=1000, deadline=None)
@given(reduced_values(FMT9), st.data())
def test_scale_exact_division(xv, data):
    x, v = xv
    live = [i for i, p in enumerate(v.powers) if p]
    i = data.draw(st.sampled_from(live))
    k = data.draw(st.integers(1, v.powers[i]))
    f = FMT9.power_table[i][k]
    t = offset_for(v, i, k)
    assert t == x % f
    w = scale_by_power(RnsValue(FMT9, tuple(
        (c - t) % FMT9.power_table[j][p] if p else c
        for j, (c, p) in enumerate(zip(v.values, v.powers))), v.powers), i, k)
    # exact-division law
    assert decode(w) == (x - t) // f
    # range law: R' shrinks by exactly the factor
    assert effective_range(w) * f == effective_range(v)
    assert w.powers[i] == v.powers[i] - k


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, FMT9.range - 1), st.data())
def test_scale_multiple(y, data):
    i = data.draw(st.sampled_from(FMT9.power_indices))
    k = data.draw(st.integers(1, FMT9.max_powers[i]))
    f = FMT9.power_table[i][k]
    x = y * f
    if x >= FMT9.range:
        x = (y % (FMT9.range // f)) * f
    assert decode(scale_by_power(encode(x, FMT9), i, k)) == x // f


def test_scale_errors(fmt8):
    v = encode(6000, fmt8)
    i5 = fmt8.index_of_base(5)
    with pytest.raises(PowerExceeded):
        scale_by_power(v, i5, 4)
    with pytest.raises(PowerExceeded):
        scale_by_power(v, i5, 0)
    with pytest.raises(NotDivisible):
        scale_by_power(v, fmt8.index_of_base(7), 1)
    w = scale_by_power(v, i5, 3)
    with pytest.raises(DigitInvalid):
        scale_by_power(w, i5, 1)
    with pytest.raises(DigitInvalid):
        offset_for(w, i5, 1)
    with pytest.raises(PowerExceeded):
        offset_for(v, i5, 4)


def test_scaling_example():
    c = check_scaling_example()
    assert c.ok, c.problems


def test_multi_factor_error_reports_step(fmt8):
    i5, i7 = fmt8.index_of_base(5), fmt8.index_of_base(7)
    with pytest.raises(NotDivisible) as e:
        multi_factor_scale(encode(6000, fmt8), [(i5, 3), (i7, 1)])
    assert e.value.step == 1


def test_multi_factor_trace_shadows(fmt8):
    t = Trace()
    idx = [(fmt8.index_of_base(5), 3), (fmt8.index_of_base(3), 1), (fmt8.index_of_base(2), 4)]
    multi_factor_scale(encode(6000, fmt8), idx, trace=t)
    notes = [r.note for r in t.rows if r.register == "X"]
    assert notes == ["6000", "48", "16", "1"]
    assert t.events.count("scale") == 3
