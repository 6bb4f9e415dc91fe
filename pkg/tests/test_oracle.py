import json
import random

import pytest

from rnsdiv import oracle
from rnsdiv.core import mod9_default_format, toy_format
from rnsdiv.engine import divide as real_divide
from rnsdiv.errors import ZeroDivisor
from rnsdiv.oracle import (
    FIXTURE_COLUMNS,
    exhaustive_cases,
    fuzz_divisions,
    make_case,
    oracle_divmod,
    parse_inverse_fixture,
    run_cases,
    FuzzReport,
    verify_inverse_fixture,
)
from rnsdiv.scaling import inverse_table_for

FMT9 = mod9_default_format()


def test_oracle_divmod():
    assert oracle_divmod(987654321, 11634943) == (84, 10319109)
    assert oracle_divmod(123456, 129024) == (0, 123456)
    assert oracle_divmod(10**40 + 3, 1) == (10**40 + 3, 0)
    with pytest.raises(ZeroDivisor):
        oracle_divmod(1, 0)
    with pytest.raises(ValueError):
        oracle_divmod(-1, 3)


def test_empty_report():
    rep = fuzz_divisions(FMT9, 0, 1)
    assert rep.ok and rep.count == 0 and rep.failures == []
    assert rep.text().startswith("fuzz moduli=121,125")


def test_fuzz_small_batch():
    rep = fuzz_divisions(FMT9, 300, 7)
    assert rep.ok, rep.text()


def test_report_reproducible():
    a = fuzz_divisions(FMT9, 120, 5)
    b = fuzz_divisions(FMT9, 120, 5)
    assert a.text() == b.text()
    assert a.to_json() == b.to_json()


def test_sharding_is_order_stable():
    a = fuzz_divisions(FMT9, 40, 3)
    b = fuzz_divisions(FMT9, 40, 3, workers=2)
    assert a.to_json() == b.to_json()


def test_strata_present():
    rng = random.Random(0)
    R = FMT9.range
    cases = [make_case(rng, FMT9, i) for i in range(1000)]
    assert all(0 <= x < R and 1 <= y < R for x, y in cases)
    assert any(y == 1 for _, y in cases)
    assert any(y == 2 for _, y in cases)
    assert any(y == R - 1 for _, y in cases)
    assert any(x == 0 for x, _ in cases)
    assert any(x == y for x, y in cases)
    assert sum(1 for x, y in cases if x and x % y == 0 and y > 1) > 50
    assert any(y > x for x, y in cases)
    assert any(y.bit_length() < 40 for _, y in cases)


def test_exhaustive_case_list():
    cases = exhaustive_cases(toy_format())
    assert len(cases) == 360 * 359
    assert cases[0] == (0, 0, 1) and cases[-1] == (len(cases) - 1, 359, 359)


def test_exhaustive_slice():
    fmt = toy_format()
    cases = exhaustive_cases(fmt)[::13]
    rep = run_cases(fmt, cases, FuzzReport(fmt.moduli, len(cases), None, True),
                    reuse_scripts=True)
    assert rep.ok, rep.text()


def test_failures_are_reported(monkeypatch, tmp_path):
    from rnsdiv.core import encode

    def broken(x, y, tbl=None, options=None, script=None):
        r = real_divide(x, y, tbl, options, script)
        if options is not None and not options.trace_rows:
            r.remainder = encode(0, x.fmt) if r.remainder != encode(0, x.fmt) else r.remainder
        return r

    monkeypatch.setattr(oracle, "divide", broken)
    rep = fuzz_divisions(FMT9, 20, 11, trace_dir=str(tmp_path))
    assert not rep.ok
    f = rep.failures[0]
    assert f.got[1] == 0 and f.expected[1] != 0
    assert (tmp_path / f"case_{f.case}.md").read_text().startswith("| Step")
    assert "FAIL case" in rep.text()
    obj = json.loads(rep.to_json())
    assert obj["failures"][0]["trace"].endswith(".md")
    assert isinstance(obj["failures"][0]["x"], str)


def test_exceptions_are_failures(monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(oracle, "divide", boom)
    rep = fuzz_divisions(FMT9, 3, 0)
    assert len(rep.failures) == 3
    assert rep.failures[0].error == "RuntimeError: boom"


def test_inverse_fixture_shape():
    t = parse_inverse_fixture()
    assert len(t) == len(FIXTURE_COLUMNS) ** 2
    assert t[17, 343] == 222
    assert t[11, 121] is None
    assert t[243, 256] == 59 and 243 * 59 % 256 == 1


def test_verify_inverse_fixture():
    rep = verify_inverse_fixture(inverse_table_for(FMT9))
    assert rep.ok, rep.text()
    assert rep.generated == 606 and rep.checked == 729
    # misprinted cells are reported, each corrected value checked by definition
    assert len(rep.fixture_errata) == 8
    for d, m, printed, correct in rep.fixture_errata:
        assert d * printed % m != 1 and d * correct % m == 1
    assert (25, 64, 9, 41) in rep.fixture_errata
    # row "2" repeats row "4" in its last seven cells
    row2 = {m for d, m, *_ in rep.fixture_errata if d == 2}
    assert row2 == {17, 289, 7, 49, 343, 19, 361}


def test_verify_inverse_fixture_catches_bad_table():
    tbl = inverse_table_for(FMT9)
    lut = [list(map(lambda by_i: None if by_i is None else [list(p) for p in by_i], by_k))
           for by_k in tbl.lut]
    i5, i2 = FMT9.index_of_base(5), FMT9.index_of_base(2)
    lut[i2][8][0][2] = 27  # inverse of 256 wrt 121 is 26
    bad = type(tbl)(FMT9, lut)
    rep = verify_inverse_fixture(bad)
    assert not rep.ok
    assert (256, 121, 27) in rep.generated_bad
    assert "MISMATCH" in rep.text() or rep.generated_bad
