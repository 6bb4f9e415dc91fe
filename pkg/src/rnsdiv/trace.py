"""Step traces in the register-table layout, and their md/csv/json renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .core import RnsFormat, RnsValue, decode

# Cycle weights per recorded event kind.
CYCLE_WEIGHTS = {
    "mrc_digit": 2,  # subtract + inverse-multiply
    "scale": 2,  # subtract offset + inverse-multiply
    "increment": 1,
    "pac": 1,
    "transition": 1,
}


@dataclass(frozen=True)
class TraceRow:
    step: int
    state: str
    register: str
    action: str
    digits: tuple[int | None, ...]
    moduli: tuple[int, ...]
    note: str = ""


@dataclass
class Trace:
    """Row log plus an event log used for cycle estimation.

    With ``rows=False`` only events are kept, which is what the fuzzers use.
    """

    record_rows: bool = True
    rows: list[TraceRow] = field(default_factory=list)
    events: list[str] = field(default_factory=list)
    step: int = 0
    state: str = ""

    def next_step(self) -> int:
        self.step += 1
        return self.step

    def add(
        self,
        register: str,
        action: str,
        value: RnsValue | Sequence[int | None],
        note: str = "",
        *,
        state: str | None = None,
        moduli: Sequence[int] | None = None,
        shadow: bool = False,
    ) -> None:
        if not self.record_rows:
            return
        if isinstance(value, RnsValue):
            cells = value.cells()
            if moduli is None:
                moduli = value.current_moduli()
            if shadow:
                note = f"{note} [{decode(value)}]" if note else str(decode(value))
        else:
            cells = tuple(value)
        self.rows.append(
            TraceRow(
                self.step,
                self.state if state is None else state,
                register,
                action,
                tuple(cells),
                tuple(moduli or ()),
                note,
            )
        )

    def event(self, kind: str, count: int = 1) -> None:
        self.events.extend([kind] * count)


def cycle_estimate(trace: Trace | Sequence[str]) -> int:
    events = trace.events if isinstance(trace, Trace) else trace
    return sum(CYCLE_WEIGHTS[e] for e in events)


def _cell(c: int | None) -> str:
    return "*" if c is None else str(c)


def _width(rows: Sequence[TraceRow], fmt: RnsFormat | None) -> int:
    if fmt is not None:
        return len(fmt)
    return len(rows[0].digits) if rows else 0


def emit_markdown(rows: Sequence[TraceRow], fmt: RnsFormat | None = None) -> str:
    n = _width(rows, fmt)
    if fmt is not None:
        heads = [f"d_{i + 1} (M={m})" for i, m in enumerate(fmt.moduli)]
    else:
        heads = [f"d_{i + 1}" for i in range(n)]
    cols = ["Step", "State", "Register", "Action", *heads, "Notes"]
    out = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    moduli = tuple(fmt.moduli) if fmt is not None else None
    for r in rows:
        if moduli is not None and r.moduli and r.moduli != moduli:
            changed = ["" if a == b else "*" if a == 1 else f"M={a}"
                       for a, b in zip(r.moduli, moduli)]
            out.append("| | | | Modulus | " + " | ".join(changed) + " | |")
        if r.moduli:
            moduli = r.moduli
        cells = [str(r.step), r.state, r.register, r.action, *map(_cell, r.digits), r.note]
        out.append("| " + " | ".join(c.replace("|", "\\|") for c in cells) + " |")
    return "\n".join(out) + "\n"


def emit_csv(rows: Sequence[TraceRow], fmt: RnsFormat | None = None) -> str:
    n = _width(rows, fmt)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["step", "state", "register", "action"]
        + [f"d_{i + 1}" for i in range(n)]
        + [f"M_{i + 1}" for i in range(n)]
        + ["note"]
    )
    for r in rows:
        w.writerow(
            [r.step, r.state, r.register, r.action]
            + [_cell(c) for c in r.digits]
            + list(r.moduli or [""] * n)
            + [r.note]
        )
    return buf.getvalue()


def emit_json(rows: Sequence[TraceRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1) + "\n"


def parse_json(text: str) -> list[TraceRow]:
    return [
        TraceRow(
            step=o["step"],
            state=o["state"],
            register=o["register"],
            action=o["action"],
            digits=tuple(o["digits"]),
            moduli=tuple(o["moduli"]),
            note=o["note"],
        )
        for o in json.loads(text)
    ]


def emit_trace(trace: Trace | Sequence[TraceRow], kind: str = "md",
               fmt: RnsFormat | None = None) -> str:
    rows = trace.rows if isinstance(trace, Trace) else list(trace)
    if kind == "md":
        return emit_markdown(rows, fmt)
    if kind == "csv":
        return emit_csv(rows, fmt)
    if kind == "json":
        return emit_json(rows)
    raise ValueError(f"unknown trace format {kind!r}")
