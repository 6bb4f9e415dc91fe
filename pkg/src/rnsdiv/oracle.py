"""Plain-integer oracle, seeded/exhaustive division fuzzers and the inverse-table check."""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .core import RnsFormat, decode, encode, toy_format
from .decomposition import decompose
from .engine import DivisionOptions, divide
from .errors import DivideByZero
from .inverses import InverseTable
from .trace import emit_markdown


def oracle_divmod(x: int, y: int) -> tuple[int, int]:
    if y == 0:
        raise DivideByZero("oracle: division by zero")
    if y < 0 or x < 0:
        raise ValueError("oracle works on non-negative operands")
    q = x // y
    return q, x - q * y


# ---------------------------------------------------------------- fuzzing


@dataclass
class FuzzFailure:
    case: int
    x: int
    y: int
    expected: tuple[int, int]
    got: tuple[int, int] | None
    error: str = ""
    trace: str = ""


@dataclass
class FuzzReport:
    moduli: tuple[int, ...]
    count: int
    seed: int | None
    exhaustive: bool = False
    failures: list[FuzzFailure] = field(default_factory=list)
    max_corrections: int = 0
    max_iterations: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def text(self) -> str:
        mode = "exhaustive" if self.exhaustive else f"seed={self.seed}"
        lines = [
            f"fuzz moduli={','.join(map(str, self.moduli))} {mode} "
            f"cases={self.count} failures={len(self.failures)} "
            f"max_iterations={self.max_iterations} max_corrections={self.max_corrections}"
        ]
        for f in self.failures:
            got = f.error or f"{f.got[0]} r {f.got[1]}"
            line = (f"FAIL case {f.case}: {f.x} / {f.y} expected "
                    f"{f.expected[0]} r {f.expected[1]} got {got}")
            if f.trace:
                line += f" trace {f.trace}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        obj = asdict(self)
        obj["moduli"] = list(self.moduli)
        # big integers as strings keep the JSON portable
        for f in obj["failures"]:
            f["x"], f["y"] = str(f["x"]), str(f["y"])
            f["expected"] = [str(v) for v in f["expected"]]
            if f["got"] is not None:
                f["got"] = [str(v) for v in f["got"]]
        return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _base_power_product(rng: random.Random, fmt: RnsFormat) -> int:
    n = 1
    for i in fmt.power_indices:
        if rng.random() < 0.5:
            n *= fmt.power_table[i][rng.randint(1, fmt.max_powers[i])]
    return n


def _log_uniform(rng: random.Random, lo: int, hi: int) -> int:
    """Integer in [lo, hi] whose bit length is roughly uniform."""
    if hi <= lo:
        return lo
    bits = rng.randint(max(lo, 1).bit_length(), hi.bit_length())
    v = rng.randrange(1 << (bits - 1), 1 << bits) if bits else 0
    return min(max(v, lo), hi)


def make_case(rng: random.Random, fmt: RnsFormat, idx: int) -> tuple[int, int]:
    """One (X, Y) pair; the stratum is chosen by ``idx`` so every batch mixes them."""
    R = fmt.range
    kind = idx % 10
    x = rng.randrange(R)
    if kind <= 2:  # uniform Y in [1, X]
        return x, rng.randint(1, max(x, 1))
    if kind <= 4:  # log-uniform Y, and X too for kind 4
        if kind == 4:
            x = _log_uniform(rng, 0, R - 1)
        return x, _log_uniform(rng, 1, max(x, 1))
    if kind == 5:  # exact multiple
        y = _log_uniform(rng, 1, R - 1)
        return y * rng.randrange((R - 1) // y + 1), y
    if kind == 6:
        y = (1, 2, R - 1)[rng.randrange(3)]
        if y == R - 1 and rng.random() < 0.5:
            x = R - 1
        return x, y
    if kind == 7:
        return (0, rng.randint(1, R - 1)) if rng.random() < 0.5 else (x, max(x, 1))
    if kind == 8:  # one less than a product of base powers
        y = 1
        while y < 2 or y - 1 >= R:
            y = _base_power_product(rng, fmt)
        return x, y - 1
    return x, rng.randint(1, R - 1)  # Y may exceed X


def _check(fmt: RnsFormat, idx: int, x: int, y: int, trace_dir: str | None,
           scripts: dict | None = None):
    """Returns (failure or None, iterations, corrections)."""
    expected = oracle_divmod(x, y)
    opts = DivisionOptions(trace_rows=False)
    try:
        yv = encode(y, fmt)
        script = None
        if scripts is not None:
            script = scripts.get(y)
            if script is None:
                script = scripts[y] = decompose(yv)
        r = divide(encode(x, fmt), yv, options=opts, script=script)
        got = (decode(r.quotient), decode(r.remainder))
        if got == expected:
            return None, r.iterations, r.corrections
        fail = FuzzFailure(idx, x, y, expected, got)
    except Exception as exc:  # noqa: BLE001 - any engine error is a failure
        fail = FuzzFailure(idx, x, y, expected, None, f"{type(exc).__name__}: {exc}")
    if trace_dir is not None:
        path = Path(trace_dir) / f"case_{idx}.md"
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            full = divide(encode(x, fmt), encode(y, fmt))
            path.write_text(emit_markdown(full.trace.rows, fmt))
        except Exception as exc:  # noqa: BLE001
            path.write_text(f"trace unavailable: {exc}\n")
        fail.trace = str(path)
    return fail, 0, 0


def _run_batch(args):
    fmt, cases, trace_dir, reuse = args
    scripts = {} if reuse else None
    return [(idx, *_check(fmt, idx, x, y, trace_dir, scripts)) for idx, x, y in cases]


def fuzz_cases(fmt: RnsFormat, count: int, seed: int) -> list[tuple[int, int, int]]:
    rng = random.Random(seed)
    return [(i, *make_case(rng, fmt, i)) for i in range(count)]


def exhaustive_cases(fmt: RnsFormat) -> list[tuple[int, int, int]]:
    R = fmt.range
    pairs = ((x, y) for x in range(R) for y in range(1, R))
    return [(i, x, y) for i, (x, y) in enumerate(pairs)]


def run_cases(
    fmt: RnsFormat,
    cases: list[tuple[int, int, int]],
    report: FuzzReport,
    workers: int = 1,
    trace_dir: str | None = None,
    reuse_scripts: bool = False,
) -> FuzzReport:
    """Check ``(index, x, y)`` cases, optionally sharded over processes.

    ``reuse_scripts`` caches one decomposition per divisor, which pays off
    when divisors repeat (the exhaustive sweep).
    """
    if workers <= 1 or len(cases) < 2:
        results = _run_batch((fmt, cases, trace_dir, reuse_scripts))
    else:
        size = -(-len(cases) // workers)
        shards = [(fmt, cases[i:i + size], trace_dir, reuse_scripts)
                  for i in range(0, len(cases), size)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for part in pool.map(_run_batch, shards) for r in part]
    results.sort(key=lambda r: r[0])
    for _, fail, iters, corr in results:
        if fail is not None:
            report.failures.append(fail)
        report.max_iterations = max(report.max_iterations, iters)
        report.max_corrections = max(report.max_corrections, corr)
    return report


def fuzz_divisions(
    fmt: RnsFormat,
    count: int,
    seed: int,
    exhaustive: bool = False,
    workers: int = 1,
    trace_dir: str | None = None,
) -> FuzzReport:
    """Check ``count`` seeded cases (or every pair, if exhaustive) against the oracle."""
    if exhaustive:
        cases = exhaustive_cases(fmt)
        report = FuzzReport(fmt.moduli, len(cases), None, True)
    else:
        cases = fuzz_cases(fmt, count, seed)
        report = FuzzReport(fmt.moduli, count, seed)
    return run_cases(fmt, cases, report, workers, trace_dir, reuse_scripts=exhaustive)


def exhaustive_toy(workers: int = 1) -> FuzzReport:
    return fuzz_divisions(toy_format(), 0, 0, exhaustive=True, workers=workers)


# ------------------------------------------------------- inverse fixture

FIXTURE_COLUMNS = (11, 121, 5, 25, 125, 13, 169, 3, 9, 27, 81, 243,
                  2, 4, 8, 16, 32, 64, 128, 256, 17, 289, 7, 49, 343, 19, 361)

# Rows: divisor, then its inverse modulo each column modulus (UND = none).
INVERSE_FIXTURE = """
 11: UND UND 1 16 91 6 123 2 5 5 59 221 1 3 3 3 3 35 35 163 14 184 2 9 156 7 197
121: UND UND 1 6 31 10 88 1 7 25 79 241 1 1 1 9 9 9 73 201 9 43 4 32 326 11 182
  5: 9 97 UND UND UND 8 34 2 2 11 65 146 1 1 5 13 13 13 77 205 7 58 3 10 206 4 289
 25: 4 92 UND UND UND 12 142 1 4 13 13 175 1 1 1 9 9 9 41 41 15 185 2 2 247 16 130
125: 3 91 UND UND UND 5 96 2 8 8 35 35 1 1 5 5 21 21 85 213 3 37 6 20 118 7 26
 13: 6 28 2 2 77 UND UND 1 7 25 25 187 1 1 5 5 5 5 69 197 4 89 6 34 132 3 250
169: 3 58 4 4 54 UND UND 1 4 4 58 220 1 1 1 9 25 25 25 153 16 118 1 29 274 9 47
  3: 4 81 2 17 42 9 113 UND UND UND UND UND 1 3 3 11 11 43 43 171 6 193 5 33 229 13 241
  9: 5 27 4 14 14 3 94 UND UND UND UND UND 1 1 1 9 25 57 57 57 2 257 4 11 305 17 321
 27: 9 9 3 13 88 1 144 UND UND UND UND UND 1 3 3 3 19 19 19 19 12 182 6 20 216 12 107
 81: 3 3 1 21 71 9 48 UND UND UND UND UND 1 1 1 1 17 49 49 177 4 157 2 23 72 4 156
243: 1 1 2 7 107 3 16 UND UND UND UND UND 1 3 3 11 27 59 59 59 7 245 3 24 24 14 52
  2: 6 61 3 13 63 7 85 2 5 14 41 122 UND UND UND UND UND UND UND UND 13 217 2 37 86 5 271
  4: 3 91 4 19 94 10 127 1 7 7 61 61 UND UND UND UND UND UND UND UND 13 217 2 37 86 5 271
  8: 7 106 2 22 47 5 148 2 8 17 71 152 UND UND UND UND UND UND UND UND 15 253 1 43 43 12 316
 16: 9 53 1 11 86 9 74 1 4 22 76 76 UND UND UND UND UND UND UND UND 16 271 4 46 193 6 158
 32: 10 87 3 18 43 11 37 2 2 11 38 38 UND UND UND UND UND UND UND UND 8 280 2 23 268 3 79
 64: 5 104 4 9 84 12 103 1 1 19 19 19 UND UND UND UND UND UND UND UND 4 140 1 36 134 11 220
128: 8 52 2 17 42 6 136 2 5 23 50 131 UND UND UND UND UND UND UND UND 2 70 4 18 67 15 110
256: 4 26 1 21 21 3 68 1 7 25 25 187 UND UND UND UND UND UND UND UND 1 35 2 9 205 17 55
 17: 2 57 3 3 103 10 10 2 8 8 62 143 1 1 1 1 17 49 113 241 UND UND 5 26 222 9 85
289: 4 103 4 9 109 9 100 1 1 10 37 37 1 1 1 1 1 33 97 225 UND UND 4 39 235 5 5
  7: 8 52 3 18 18 2 145 1 4 4 58 139 1 3 7 7 23 55 55 183 5 124 UND UND UND 11 258
 49: 9 42 4 24 74 4 69 1 7 16 43 124 1 1 1 1 17 17 81 209 8 59 UND UND UND 7 140
343: 6 6 2 7 82 8 34 1 1 10 64 226 1 3 7 7 7 39 103 103 6 91 UND UND UND 1 20
 19: 7 51 4 4 79 11 89 1 1 10 64 64 1 3 3 11 27 27 27 27 9 213 3 31 325 UND UND
361: 5 60 1 16 116 4 147 1 1 19 46 208 1 1 1 9 25 25 89 217 13 285 2 30 324 UND UND
"""


def parse_inverse_fixture(text: str = INVERSE_FIXTURE) -> dict[tuple[int, int], int | None]:
    """``{(divisor, modulus): inverse or None}``."""
    out: dict[tuple[int, int], int | None] = {}
    for line in text.strip().splitlines():
        head, _, rest = line.partition(":")
        cells = rest.split()
        if len(cells) != len(FIXTURE_COLUMNS):
            raise ValueError(f"row {head.strip()}: {len(cells)} cells")
        for m, c in zip(FIXTURE_COLUMNS, cells):
            out[int(head), m] = None if c == "UND" else int(c)
    return out


@dataclass
class FixtureReport:
    checked: int = 0
    generated: int = 0
    generated_bad: list[tuple[int, int, int]] = field(default_factory=list)
    # fixture cells failing (d * v) % m == 1: (divisor, modulus, printed, correct)
    fixture_errata: list[tuple[int, int, int, int]] = field(default_factory=list)
    mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)
    und_violations: list[tuple[int, int]] = field(default_factory=list)
    missing: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.generated_bad or self.mismatches or self.und_violations
                    or self.missing)

    def text(self) -> str:
        lines = [
            f"inverse table: {self.generated} generated entries, "
            f"{self.checked} fixture cells checked",
            f"generated entries failing definition: {len(self.generated_bad)}",
            f"fixture cells disagreeing with generated table: {len(self.mismatches)}",
            f"UND cells with a generated entry: {len(self.und_violations)}",
            f"fixture errata (cell fails its own definition): {len(self.fixture_errata)}",
        ]
        for d, m, printed, correct in self.fixture_errata:
            lines.append(f"  erratum: inverse of {d} wrt {m} printed {printed}, correct {correct}")
        for d, m, printed, gen in self.mismatches:
            lines.append(f"  MISMATCH: inverse of {d} wrt {m} fixture {printed}, generated {gen}")
        return "\n".join(lines) + "\n"


def verify_inverse_fixture(tbl: InverseTable) -> FixtureReport:
    fmt = tbl.fmt
    pt = fmt.power_table
    rep = FixtureReport()
    lookup: dict[tuple[int, int], int | None] = {}
    for j in fmt.power_indices:
        for k in range(1, fmt.max_powers[j] + 1):
            for i in fmt.power_indices:
                for p in range(1, fmt.max_powers[i] + 1):
                    d, m = pt[j][k], pt[i][p]
                    inv = tbl.lut[j][k][i][p]
                    lookup[d, m] = inv
                    if inv is not None:
                        rep.generated += 1
                        if d * inv % m != 1:
                            rep.generated_bad.append((d, m, inv))
    for (d, m), printed in parse_inverse_fixture().items():
        if (d, m) not in lookup:
            rep.missing.append((d, m))
            continue
        gen = lookup[d, m]
        rep.checked += 1
        if printed is None:
            if gen is not None:
                rep.und_violations.append((d, m))
            continue
        if d * printed % m != 1:
            rep.fixture_errata.append((d, m, printed, pow(d, -1, m)))
        elif gen != printed:
            rep.mismatches.append((d, m, printed, gen))
    return rep
