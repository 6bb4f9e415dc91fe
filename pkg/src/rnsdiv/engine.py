"""Division by recurrence over the approximate divisor y_hat.

Each iteration scales the running dividend through the divisor's factor
script to get Z_i = floor(X_{i-1} / y_hat), adds it to the accumulator and
recomputes X_i = X_0 - accum * Y.  Once some Z_n is zero a compare loop
fixes up the last few units and the remainder falls out of one more PAC
step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    RnsValue,
    check_compatible,
    decode,
    encode,
    is_one,
    is_zero,
    pac_add,
    pac_mul,
    pac_sub,
    subtract_scalar,
)
from .decomposition import (
    DONE,
    FactorScript,
    Increment,
    Scale,
    ScriptStep,
    apply_step,
    next_step,
)
from .errors import DivideByZero, FormatMismatch
from .inverses import InverseTable
from .mixed_radix import Ordering, base_extend, compare
from .scaling import inverse_table_for, offset_for, record_inverse_row, scale_by_power
from .trace import Trace, cycle_estimate

IDLE = "IDLE"
LOAD_INIT = "LOAD_INIT"
INC_DENOM = "INC_DENOM"
DIV_DENOM = "DIV_DENOM"
BASE_EXTEND = "BASE_EXTEND"
UPDATE_ACCUM = "UPDATE_ACCUM"
CALC_NUMER = "CALC_NUMER"
COMPARE = "COMPARE"
CALC_REM = "CALC_REM"
DONE_STATE = "DONE"
DIV_BY_ZERO = "DIV_BY_ZERO"


@dataclass
class DivisionOptions:
    live: bool = False  # re-decompose the divisor every iteration
    trace_rows: bool = True  # keep register rows and decimal shadows


@dataclass
class IterationRecord:
    numer_in: int
    z: int
    shadows: list[int] = field(default_factory=list)


@dataclass
class DivisionResult:
    quotient: RnsValue
    remainder: RnsValue
    iterations: int
    corrections: int
    cycle_estimate: int
    trace: Trace
    z_values: list[int] = field(default_factory=list)
    records: list[IterationRecord] = field(default_factory=list)
    script: FactorScript | None = None


def _quiet(trace: Trace) -> Trace:
    """Event-only view of ``trace`` for nested MRC passes."""
    return Trace(record_rows=False, events=trace.events)


def _enter(trace: Trace, state: str) -> None:
    if trace.state != state:
        trace.state = state
        trace.event("transition")


def _scale_numer(
    numer: RnsValue,
    step: Scale,
    tbl: InverseTable,
    trace: Trace,
    rec: IterationRecord | None,
) -> tuple[RnsValue, bool]:
    """Floor-divide numer by one script factor; returns (value, hit_zero)."""
    t = offset_for(numer, step.index, step.k)
    numer = subtract_scalar(numer, t)
    _enter(trace, DIV_DENOM)
    trace.next_step()
    trace.add("NUMER", f"Subtract {t} from NUMER", numer, shadow=True)
    if is_zero(numer):
        trace.add("NUMER", "Zero detected", numer, "NUMER = 0")
        if rec is not None and trace.record_rows:
            rec.shadows.append(0)
        return numer, True
    before = numer
    numer = scale_by_power(numer, step.index, step.k, tbl)
    trace.event("scale")
    trace.next_step()
    record_inverse_row(trace, before, step.index, step.k, tbl,
                       f"inverses of {step.factor}")
    trace.add("NUMER", f"Multiply by 1/{step.factor}", numer, shadow=True)
    if rec is not None and trace.record_rows:
        rec.shadows.append(decode(numer))
    return numer, False


def apply_script_to_numer(
    numer: RnsValue,
    script: FactorScript,
    tbl: InverseTable | None = None,
    trace: Trace | None = None,
    rec: IterationRecord | None = None,
) -> RnsValue:
    """Scale ``numer`` through ``script``; the result decodes to floor(X / y_hat).

    Increments touch only the divisor and are skipped.  Stops early, with a
    zero result, once the numerator is exhausted.
    """
    tbl = tbl if tbl is not None else inverse_table_for(numer.fmt)
    trace = trace if trace is not None else Trace(record_rows=False)
    for step in script.steps:
        if isinstance(step, Scale):
            numer, zero = _scale_numer(numer, step, tbl, trace, rec)
            if zero:
                return numer
        elif not isinstance(step, Increment):
            _enter(trace, BASE_EXTEND)
            trace.next_step()
            numer = base_extend(numer, tbl, _quiet(trace))
            trace.add("NUMER", "Base extend", numer, shadow=True)
    return numer


def _live_iteration(
    numer: RnsValue,
    y: RnsValue,
    tbl: InverseTable,
    trace: Trace,
    rec: IterationRecord | None,
) -> tuple[RnsValue, list[ScriptStep] | None]:
    """Co-scale numer and a fresh divisor copy; returns the steps if completed."""
    denom = y
    steps: list[ScriptStep] = []
    while True:
        step = next_step(denom)
        if step is DONE:
            return numer, steps
        steps.append(step)
        if isinstance(step, Increment):
            _enter(trace, INC_DENOM)
            trace.next_step()
            denom = apply_step(denom, step, tbl)
            trace.event("increment")
            trace.add("DENOM", "Increment DENOM", denom, shadow=True)
        elif isinstance(step, Scale):
            numer, zero = _scale_numer(numer, step, tbl, trace, rec)
            if zero:
                return numer, None
            denom = scale_by_power(denom, step.index, step.k, tbl)
            trace.add("DENOM", f"Multiply by 1/{step.factor}", denom, shadow=True)
        else:
            _enter(trace, BASE_EXTEND)
            trace.next_step()
            numer = base_extend(numer, tbl, _quiet(trace))
            trace.add("NUMER", "Base extend", numer, shadow=True)
            denom = base_extend(denom, tbl, _quiet(trace))
            trace.add("DENOM", "Base extend", denom, shadow=True)


def final_correction(
    residual: RnsValue,
    y: RnsValue,
    accum: RnsValue,
    tbl: InverseTable | None = None,
    trace: Trace | None = None,
) -> tuple[RnsValue, RnsValue, int]:
    """Subtract ``y`` while ``residual >= y``; returns (accum, remainder, count)."""
    tbl = tbl if tbl is not None else inverse_table_for(y.fmt)
    trace = trace if trace is not None else Trace(record_rows=False)
    one = encode(1, y.fmt)
    count = 0
    while True:
        _enter(trace, COMPARE)
        trace.next_step()
        trace.add("OLD NUMER", "Compare NUMER to DENOM", residual, shadow=True)
        trace.add("DENOM", "", y, shadow=True)
        if compare(residual, y, tbl, _quiet(trace)) is Ordering.LESS:
            return accum, residual, count
        residual = pac_sub(residual, y)
        accum = pac_add(accum, one)
        trace.event("pac", 2)
        count += 1


def _remainder(x0: RnsValue, q: RnsValue, y: RnsValue, trace: Trace) -> RnsValue:
    trace.event("pac", 2)
    return pac_sub(x0, pac_mul(q, y))


def divide(
    x: RnsValue,
    y: RnsValue,
    tbl: InverseTable | None = None,
    options: DivisionOptions | None = None,
    script: FactorScript | None = None,
) -> DivisionResult:
    """Quotient and remainder of ``x / y``, both normalized RNS values.

    A precomputed ``script`` for ``y`` skips the live first iteration, so
    DENOM rows are not traced; callers dividing many values by the same
    divisor use this.
    """
    options = options or DivisionOptions()
    if x.fmt != y.fmt:
        raise FormatMismatch("dividend and divisor use different formats")
    if not (x.normalized and y.normalized):
        raise ValueError("divide expects normalized operands")
    check_compatible(x, y)
    fmt = x.fmt
    tbl = tbl if tbl is not None else inverse_table_for(fmt)
    trace = Trace(record_rows=options.trace_rows, state=IDLE)
    zero = encode(0, fmt)

    _enter(trace, LOAD_INIT)
    trace.add("NUMER", "Starting value", x, shadow=True)
    trace.add("DENOM", "Starting value", y, shadow=True)
    if is_zero(y):
        _enter(trace, DIV_BY_ZERO)
        raise DivideByZero("division by zero")
    if is_one(y) or is_zero(x):
        q = x if is_one(y) else zero
        _enter(trace, DONE_STATE)
        trace.next_step()
        trace.add("QUOTIENT", "Fast path", q, shadow=True)
        return DivisionResult(q, zero, 0, 0, cycle_estimate(trace), trace)

    accum = zero
    numer = x
    records: list[IterationRecord] = []
    z_values: list[int] = []
    while True:
        rec = IterationRecord(decode(numer), 0)
        if script is None or options.live:
            z, steps = _live_iteration(numer, y, tbl, trace, rec)
            if steps is not None and script is None:
                script = FactorScript(tuple(steps))
        else:
            z = apply_script_to_numer(numer, script, tbl, trace, rec)
        if is_zero(z):
            records.append(rec)
            z_values.append(0)
            break
        _enter(trace, BASE_EXTEND)
        trace.next_step()
        z = base_extend(z, tbl, _quiet(trace))
        trace.add("NUMER", "Base extend", z, shadow=True)
        _enter(trace, UPDATE_ACCUM)
        trace.next_step()
        accum = pac_add(accum, z)
        trace.event("pac")
        trace.add("ACCUM", "NUMER added", accum, shadow=True)
        _enter(trace, CALC_NUMER)
        trace.next_step()
        numer = _remainder(x, accum, y, trace)
        trace.add("NUMER", "X0 - ACCUM*Y", numer, shadow=True)
        rec.z = decode(z)
        records.append(rec)
        z_values.append(rec.z)

    accum, _, corrections = final_correction(numer, y, accum, tbl, trace)
    _enter(trace, CALC_REM)
    trace.next_step()
    rem = _remainder(x, accum, y, trace)
    trace.add("REM", "X0 - QUOTIENT*Y", rem, shadow=True)
    _enter(trace, DONE_STATE)
    trace.next_step()
    trace.add("QUOTIENT", "Move ACCUM to QUOTIENT", accum, shadow=True)
    return DivisionResult(
        quotient=accum,
        remainder=rem,
        iterations=len(z_values),
        corrections=corrections,
        cycle_estimate=cycle_estimate(trace),
        trace=trace,
        z_values=z_values,
        records=records,
        script=script,
    )


def divide_int(x: int, y: int, fmt, tbl=None, options=None) -> tuple[int, int]:
    r = divide(encode(x, fmt), encode(y, fmt), tbl, options)
    return decode(r.quotient), decode(r.remainder)
