"""Divisor decomposition: reduce Y to 1 by base-power scalings and increments.

The product of the scaling factors is the approximate divisor y_hat, which
is always at least Y.  A scale step divides out the largest available power
of the lowest-index power-based digit that shows a zero; when no digit
qualifies the value is incremented, unless the base-2 digit is exhausted,
in which case the value is base-extended first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

from .core import (
    RnsValue,
    any_zero,
    decode,
    effective_range,
    increment,
    is_one,
    is_zero,
)
from .errors import DivideByZero
from .inverses import InverseTable
from .mixed_radix import base_extend
from .scaling import inverse_table_for, record_inverse_row, scale_by_power
from .trace import Trace


@dataclass(frozen=True)
class Increment:
    def __str__(self) -> str:
        return "Inc"


@dataclass(frozen=True)
class Scale:
    index: int
    k: int
    factor: int

    def __str__(self) -> str:
        return str(self.factor)


@dataclass(frozen=True)
class BaseExtend:
    def __str__(self) -> str:
        return "BE"


ScriptStep = Union[Increment, Scale, BaseExtend]
DONE = None


@dataclass(frozen=True)
class FactorScript:
    steps: tuple[ScriptStep, ...]
    # decoded working value before each step, for auditing
    visits: tuple[int, ...] = ()

    @property
    def factors(self) -> list[int]:
        return [s.factor for s in self.steps if isinstance(s, Scale)]

    @property
    def y_hat(self) -> int:
        return math.prod(self.factors)

    @property
    def increments(self) -> int:
        return sum(isinstance(s, Increment) for s in self.steps)

    def __str__(self) -> str:
        return " ".join(map(str, self.steps))

    def to_json(self) -> list[dict]:
        out = []
        for s in self.steps:
            if isinstance(s, Scale):
                out.append({"op": "scale", "index": s.index, "k": s.k, "factor": s.factor})
            elif isinstance(s, Increment):
                out.append({"op": "increment"})
            else:
                out.append({"op": "base_extend"})
        return out


def working_value(state: RnsValue) -> int:
    """Integer held by a divisor working value.

    Decomposition never reaches 0, so an all-zero state means an increment
    wrapped to the effective range itself.
    """
    return effective_range(state) if is_zero(state) else decode(state)


def next_step(state: RnsValue) -> ScriptStep | None:
    """Next decomposition step for the working value, or DONE at 1."""
    if is_one(state):
        return DONE
    fmt = state.fmt
    if is_zero(state):
        # An increment wrapped the value to the effective range itself;
        # dividing out every remaining modulus brings it to exactly 1.
        i = next(i for i, p in enumerate(state.powers) if p)
        return Scale(i, state.powers[i], fmt.power_table[i][state.powers[i]])
    zeros = any_zero(state)
    if zeros:
        i, k = zeros[0]
        k = min(k, state.powers[i])
        return Scale(i, k, fmt.power_table[i][k])
    if state.powers[fmt.two_index]:
        return Increment()
    return BaseExtend()


def apply_step(
    state: RnsValue,
    step: ScriptStep,
    tbl: InverseTable,
    trace: Trace | None = None,
) -> RnsValue:
    if isinstance(step, Scale):
        return scale_by_power(state, step.index, step.k, tbl)
    if isinstance(step, Increment):
        return increment(state)
    return base_extend(state, tbl, trace)


def walk(
    y: RnsValue, tbl: InverseTable | None = None, trace: Trace | None = None
) -> Iterator[tuple[ScriptStep, RnsValue, RnsValue]]:
    """Yield ``(step, before, after)`` until the working value reaches 1.

    ``trace`` only receives the event log of nested base extensions.
    """
    if is_zero(y):
        raise DivideByZero("divisor is zero")
    tbl = tbl if tbl is not None else inverse_table_for(y.fmt)
    state = y
    while True:
        step = next_step(state)
        if step is DONE:
            return
        after = apply_step(state, step, tbl, trace)
        yield step, state, after
        state = after


def decompose(
    y: RnsValue, tbl: InverseTable | None = None, trace: Trace | None = None
) -> FactorScript:
    """Decompose divisor ``y``; one register row per step."""
    tbl = tbl if tbl is not None else inverse_table_for(y.fmt)
    steps: list[ScriptStep] = []
    visits: list[int] = []
    if trace is not None:
        trace.add("Y", "Starting value", y, shadow=True)
    inner = Trace(record_rows=False) if trace is not None else None
    for step, before, after in walk(y, tbl, inner):
        steps.append(step)
        visits.append(working_value(before))
        if trace is None:
            continue
        trace.events.extend(inner.events)
        inner.events.clear()
        trace.next_step()
        shown = str(working_value(after))
        if is_zero(after):
            shown += " (wrapped: all digits zero)"
        if isinstance(step, Scale):
            trace.event("scale")
            record_inverse_row(trace, before, step.index, step.k, tbl,
                               f"divisible by {step.factor}")
            trace.add("Y", f"Multiply by 1/{step.factor}", after, shown)
        elif isinstance(step, Increment):
            trace.event("increment")
            trace.add("Y", "Increment", after, shown)
        else:
            trace.add("Y", "Base extend", after, shown)
    return FactorScript(tuple(steps), tuple(visits))
