"""Exact division of an RNS value by powers of one of its own digit bases."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .core import RnsFormat, RnsValue
from .errors import DigitInvalid, NotDivisible, PowerExceeded
from .inverses import InverseTable, build_inverse_table
from .trace import Trace


@lru_cache(maxsize=16)
def inverse_table_for(fmt: RnsFormat) -> InverseTable:
    """Shared, lazily built inverse table for ``fmt``."""
    return build_inverse_table(fmt)


def scale_by_power(v: RnsValue, i: int, k: int, tbl: InverseTable | None = None) -> RnsValue:
    """Divide ``v`` by ``base_i**k``, which must divide it exactly.

    Digit i is divided directly and loses k powers (becoming invalid at
    zero); every other valid digit is multiplied by the inverse of
    ``base_i**k`` at its own current power.
    """
    fmt = v.fmt
    p_i = v.powers[i]
    if p_i == 0:
        raise DigitInvalid(f"digit {i} is invalid")
    if not 1 <= k <= p_i:
        raise PowerExceeded(f"digit {i} holds {p_i} powers, cannot scale by {k}")
    pt = fmt.power_table
    q, r = divmod(v.values[i], pt[i][k])
    if r:
        raise NotDivisible(f"digit {i} value {v.values[i]} not divisible by {fmt.bases[i]}^{k}")
    if tbl is None:
        tbl = inverse_table_for(fmt)
    lut = tbl.lut[i][k]
    values = list(v.values)
    powers = list(v.powers)
    for j, p in enumerate(powers):
        if p and j != i:
            values[j] = values[j] * lut[j][p] % pt[j][p]
    values[i] = q
    powers[i] = p_i - k
    return RnsValue(fmt, tuple(values), tuple(powers))


def offset_for(v: RnsValue, i: int, k: int) -> int:
    """Smallest t such that ``decode(v) - t`` is divisible by ``base_i**k``."""
    p = v.powers[i]
    if p == 0:
        raise DigitInvalid(f"digit {i} is invalid")
    if k > p:
        raise PowerExceeded(f"digit {i} holds {p} powers, asked for {k}")
    return v.values[i] % v.fmt.power_table[i][k]


def factor_label(fmt: RnsFormat, i: int, k: int) -> str:
    return str(fmt.power_table[i][k])


def record_inverse_row(trace: Trace, v: RnsValue, i: int, k: int,
                       tbl: InverseTable, note: str = "") -> None:
    if not trace.record_rows:
        return
    cells = list(tbl.row(i, k, v.powers))
    cells[i] = None
    trace.add("LUT", f"Inverses of {factor_label(v.fmt, i, k)}", cells, note,
              moduli=v.current_moduli())


def multi_factor_scale(
    v: RnsValue,
    factors: Sequence[tuple[int, int]],
    tbl: InverseTable | None = None,
    trace: Trace | None = None,
) -> RnsValue:
    """Apply ``scale_by_power`` for each ``(digit index, k)`` in order."""
    if tbl is None:
        tbl = inverse_table_for(v.fmt)
    if trace is not None:
        trace.add("X", "Starting value", v, shadow=True)
    for n, (i, k) in enumerate(factors):
        label = factor_label(v.fmt, i, k)
        if trace is not None:
            trace.next_step()
            record_inverse_row(trace, v, i, k, tbl, f"divisible by {label}")
        try:
            v = scale_by_power(v, i, k, tbl)
        except (DigitInvalid, PowerExceeded, NotDivisible) as exc:
            err = type(exc)(f"factor step {n}: {exc}")
            err.step = n
            raise err from exc
        if trace is not None:
            trace.next_step()
            trace.event("scale")
            trace.add("X", f"Multiply by 1/{label}", v, shadow=True)
    return v
