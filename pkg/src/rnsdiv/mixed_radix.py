"""Mixed-radix conversion over the valid digits of a value.

Conversion repeatedly subtracts the smallest-modulus valid digit and scales
that digit out, producing mixed-radix digits least significant first.  The
same pass drives magnitude comparison and base extension, where every
generated digit is folded into running per-target accumulators instead of
being stored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import zip_longest
from typing import Sequence

from .core import RnsValue, check_compatible
from .errors import RangeInsufficient
from .inverses import InverseTable
from .scaling import inverse_table_for
from .trace import Trace


@dataclass(frozen=True)
class MixedRadixDigit:
    index: int  # format position of the consumed digit
    radix: int  # its modulus at the time it was consumed
    a: int


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass
class RecombinationState:
    """Running accumulators for the digits being base-extended.

    ``acc[t]`` and ``weight[t]`` are kept modulo the full modulus of target
    t.  ``history[t]`` lists ``(a, weight used, acc after)`` per consumed
    digit.
    """

    moduli: dict[int, int]
    acc: dict[int, int] = field(default_factory=dict)
    weight: dict[int, int] = field(default_factory=dict)
    history: dict[int, list[tuple[int, int, int]]] = field(default_factory=dict)
    steps: int = 0

    def __post_init__(self) -> None:
        for t in self.moduli:
            self.acc[t] = 0
            self.weight[t] = 1
            self.history[t] = []

    def consume(self, a: int, radix: int) -> None:
        for t, m in self.moduli.items():
            w = self.weight[t]
            self.acc[t] = (self.acc[t] + a * w) % m
            self.history[t].append((a, w, self.acc[t]))
            self.weight[t] = w * radix % m
        self.steps += 1


def _walk(
    v: RnsValue,
    tbl: InverseTable,
    trace: Trace | None,
    recomb: RecombinationState | None = None,
) -> list[MixedRadixDigit]:
    # Works on plain lists; RnsValue snapshots are only built for trace rows.
    fmt = v.fmt
    pt = fmt.power_table
    lut = tbl.lut
    values = list(v.values)
    powers = list(v.powers)
    rows = trace is not None and trace.record_rows
    out: list[MixedRadixDigit] = []

    def snap() -> RnsValue:
        return RnsValue(fmt, tuple(values), tuple(powers))

    if rows:
        trace.add("MRC", "Starting value", v, shadow=True)
    live = [i for i, p in enumerate(powers) if p]
    while any(values[i] for i in live):
        radix, j = min((pt[i][powers[i]], i) for i in live)
        a = values[j]
        out.append(MixedRadixDigit(j, radix, a))
        if recomb is not None:
            recomb.consume(a, radix)
        for i in live:
            values[i] = (values[i] - a) % pt[i][powers[i]]
        if trace is not None:
            trace.event("mrc_digit")
        if rows:
            trace.next_step()
            trace.add("MRC", f"Subtract by d_{j + 1}={a}", snap(),
                      f"mixed radix digit a_{len(out)} = {a}")
        live.remove(j)
        if not any(values[i] for i in live):
            break
        # values[j] is now 0; dividing it by its full modulus invalidates it
        inv = lut[j][powers[j]]
        for i in live:
            m = pt[i][powers[i]]
            values[i] = values[i] * inv[i][powers[i]] % m
        powers[j] = 0
        if rows:
            trace.next_step()
            trace.add("MRC", f"Multiply by 1/{radix}", snap(),
                      f"dividing by {radix}; d_{j + 1} invalidated")
    if rows:
        trace.next_step()
        trace.add("MRC", "Zero detected", snap(), "STOP")
    return out


def mrc_digits(
    v: RnsValue, tbl: InverseTable | None = None, trace: Trace | None = None
) -> list[MixedRadixDigit]:
    """Mixed-radix digits of ``v``, least significant first."""
    return _walk(v, tbl if tbl is not None else inverse_table_for(v.fmt), trace)


def mrc_value(digits: Sequence[MixedRadixDigit]) -> int:
    x = 0
    weight = 1
    for d in digits:
        x += d.a * weight
        weight *= d.radix
    return x


def compare(
    a: RnsValue, b: RnsValue, tbl: InverseTable | None = None, trace: Trace | None = None
) -> Ordering:
    """Order ``decode(a)`` against ``decode(b)`` via their mixed-radix digits."""
    check_compatible(a, b)
    tbl = tbl if tbl is not None else inverse_table_for(a.fmt)
    da = [d.a for d in _walk(a, tbl, trace)]
    db = [d.a for d in _walk(b, tbl, trace)]
    for x, y in reversed(list(zip_longest(da, db, fillvalue=0))):
        if x != y:
            return Ordering.LESS if x < y else Ordering.GREATER
    return Ordering.EQUAL


def base_extend(
    v: RnsValue,
    tbl: InverseTable | None = None,
    trace: Trace | None = None,
    recomb_out: list[RecombinationState] | None = None,
) -> RnsValue:
    """Restore every invalid or power-reduced digit to its full modulus.

    ``recomb_out``, when given, receives the recombination state so callers
    can inspect the running weights and partial sums.
    """
    fmt = v.fmt
    targets = {i: fmt.moduli[i] for i, p in enumerate(v.powers) if p < fmt.max_powers[i]}
    if not targets:
        return v
    if not any(v.powers):
        raise RangeInsufficient("no valid digits left to extend from")
    recomb = RecombinationState(targets)
    _walk(v, tbl if tbl is not None else inverse_table_for(fmt), trace, recomb)
    if recomb_out is not None:
        recomb_out.append(recomb)
    values = list(v.values)
    for t in targets:
        values[t] = recomb.acc[t]
    return RnsValue(fmt, tuple(values), fmt.max_powers)
