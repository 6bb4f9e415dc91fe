"""Command-line front end: ``rnsdiv <subcommand>``.

Exit codes: 0 success, 1 usage or config error, 2 arithmetic error,
3 self-test or fuzz failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import golden
from .core import (
    RnsFormat,
    RnsValue,
    decode,
    encode,
    format_efficiency,
    make_format,
    mod9_default_format,
)
from .decomposition import decompose
from .engine import DivisionOptions, divide
from .errors import FormatError, RnsError
from .mixed_radix import base_extend, mrc_digits, mrc_value
from .oracle import fuzz_divisions
from .scaling import inverse_table_for, multi_factor_scale
from .trace import Trace, emit_trace

EXIT_USAGE = 1
EXIT_ARITH = 2
EXIT_FAIL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_config(path: str) -> RnsFormat:
    """Parse ``power B P`` / ``plain Q`` / ``width N`` lines; '#' starts a comment."""
    powers, plain, width = [], [], 9
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            if line[0] == "power" and len(line) == 3:
                powers.append((int(line[1]), int(line[2])))
            elif line[0] == "plain" and len(line) == 2:
                plain.append(int(line[1]))
            elif line[0] == "width" and len(line) == 2:
                width = int(line[1])
            else:
                raise ValueError
        except ValueError:
            raise UsageError(f"{path}:{n}: cannot parse {raw.strip()!r}") from None
    return make_format(powers, plain, width)


def _fmt(args) -> RnsFormat:
    return load_config(args.config) if args.config else mod9_default_format()


def _int(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise UsageError(f"not a decimal integer: {text!r}") from None
    if v < 0:
        raise UsageError(f"negative value: {text}")
    return v


def parse_cells(text: str, fmt: RnsFormat) -> RnsValue:
    cells = [c for c in text.replace(",", " ").split()]
    try:
        vals = [None if c == "*" else int(c) for c in cells]
        return RnsValue.from_digits(fmt, vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _factor(fmt: RnsFormat, f: int) -> tuple[int, int]:
    for i in fmt.power_indices:
        for k in range(1, fmt.max_powers[i] + 1):
            if fmt.power_table[i][k] == f:
                return i, k
    raise UsageError(f"{f} is not a power of a power-based digit base")


def cmd_format(args) -> int:
    fmt = _fmt(args)
    print("| Digit | Base | Power | Modulus | Kind |")
    print("|---|---|---|---|---|")
    for i, s in enumerate(fmt.specs):
        kind = "power" if s.power_based else "plain"
        print(f"| d_{i + 1} | {s.base} | {s.max_power} | {s.modulus} | {kind} |")
    print(f"digits {len(fmt)}, width {fmt.digit_width} bits")
    print(f"range R = {fmt.range}")
    print(f"log2 R = {math.log2(fmt.range):.4f}")
    print(f"efficiency = {format_efficiency(fmt):.4f}%")
    return 0


def cmd_luts(args) -> int:
    fmt = _fmt(args)
    tbl = inverse_table_for(fmt)
    idx = range(len(fmt)) if args.all else fmt.power_indices
    axis = [(i, p) for i in idx for p in range(1, fmt.max_powers[i] + 1)]
    pt = fmt.power_table
    print("| inverse of \\ wrt | " + " | ".join(str(pt[i][p]) for i, p in axis) + " |")
    print("|---|" + "---|" * len(axis))
    for j, k in axis:
        cells = []
        for i, p in axis:
            inv = tbl.lut[j][k][i][p]
            cells.append("UND" if inv is None else str(inv))
        print(f"| {pt[j][k]} | " + " | ".join(cells) + " |")
    return 0


def cmd_encode(args) -> int:
    fmt = _fmt(args)
    v = encode(_int(args.x), fmt)
    print(",".join(map(str, v.values)))
    return 0


def cmd_decode(args) -> int:
    fmt = _fmt(args)
    print(decode(parse_cells(args.digits, fmt)))
    return 0


def cmd_scale(args) -> int:
    fmt = _fmt(args)
    factors = [_factor(fmt, _int(f)) for f in args.factors.split(",")]
    t = Trace()
    v = multi_factor_scale(encode(_int(args.x), fmt), factors, trace=t)
    sys.stdout.write(emit_trace(t, args.trace, fmt))
    print(f"result {decode(v)}")
    return 0


def cmd_mrc(args) -> int:
    fmt = _fmt(args)
    t = Trace()
    digits = mrc_digits(encode(_int(args.x), fmt), trace=t)
    sys.stdout.write(emit_trace(t, args.trace, fmt))
    print("mixed radix digits " + " ".join(str(d.a) for d in digits))
    terms = []
    weight = []
    for d in digits:
        terms.append(f"{d.a}" + "".join(f"*{w}" for w in weight))
        weight.append(d.radix)
    print(f"{' + '.join(terms) or '0'} = {mrc_value(digits)}")
    return 0


def cmd_extend(args) -> int:
    fmt = _fmt(args)
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    v = parse_cells(text, fmt)
    t = Trace()
    states = []
    out = base_extend(v, trace=t, recomb_out=states)
    sys.stdout.write(emit_trace(t, args.trace, fmt))
    for st in states:
        for target, hist in st.history.items():
            parts = " ".join(f"(a={a} w={w} acc={acc})" for a, w, acc in hist)
            print(f"d_{target + 1} mod {st.moduli[target]}: {parts} -> {st.acc[target]}")
    print("extended " + ",".join(map(str, out.values)) + f" = {decode(out)}")
    return 0


def cmd_decompose(args) -> int:
    fmt = _fmt(args)
    t = Trace()
    script = decompose(encode(_int(args.y), fmt), trace=t)
    sys.stdout.write(emit_trace(t, args.trace, fmt))
    print(f"script: {script}")
    print("factors: " + " x ".join(map(str, script.factors)))
    print(f"ŷ = {script.y_hat}")
    return 0


def cmd_div(args) -> int:
    fmt = _fmt(args)
    x, y = encode(_int(args.x), fmt), encode(_int(args.y), fmt)
    opts = DivisionOptions(live=args.live, trace_rows=args.trace is not None)
    r = divide(x, y, options=opts)
    summary = f"quotient {decode(r.quotient)} remainder {decode(r.remainder)}"
    if args.trace is None:
        print(summary)
        return 0
    body = emit_trace(r.trace, args.trace, fmt)
    if args.output:
        Path(args.output).write_text(body)
        print(summary)
    elif args.trace == "md":
        sys.stdout.write(body)
        print(summary)
    else:
        # keep machine-readable stdout clean
        sys.stdout.write(body)
        print(summary, file=sys.stderr)
    return 0


def cmd_selftest(args) -> int:
    checks = golden.run_selftest()
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}")
        for n in c.notes:
            print(f"  note: {n}")
        for p in c.problems:
            print(f"  {p}")
    return 0 if all(c.ok for c in checks) else EXIT_FAIL


def cmd_fuzz(args) -> int:
    if args.exhaustive_toy:
        from .core import toy_format

        rep = fuzz_divisions(toy_format(), 0, 0, exhaustive=True, workers=args.workers,
                             trace_dir=args.trace_dir)
    else:
        rep = fuzz_divisions(_fmt(args), args.count, args.seed, workers=args.workers,
                             trace_dir=args.trace_dir)
    sys.stdout.write(rep.text())
    if args.json:
        Path(args.json).write_text(rep.to_json())
    return 0 if rep.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="format file (default: MOD-9)")
    traced = argparse.ArgumentParser(add_help=False)
    traced.add_argument("--trace", choices=("md", "csv", "json"), default="md")

    p = _Parser(prog="rnsdiv", description="RNS integer division toolkit")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("format", parents=[common], help="print the moduli and efficiency")
    s.set_defaults(fn=cmd_format)
    s = sub.add_parser("luts", parents=[common], help="print the inverse table")
    s.add_argument("--all", action="store_true", help="include plain digits")
    s.set_defaults(fn=cmd_luts)
    s = sub.add_parser("encode", parents=[common], help="integer to digits")
    s.add_argument("x")
    s.set_defaults(fn=cmd_encode)
    s = sub.add_parser("decode", parents=[common], help="digits (d1,d2,... with *) to integer")
    s.add_argument("digits")
    s.set_defaults(fn=cmd_decode)
    s = sub.add_parser("scale", parents=[common, traced], help="multi-factor scaling trace")
    s.add_argument("x")
    s.add_argument("--factors", required=True, help="comma-separated, e.g. 125,3,16")
    s.set_defaults(fn=cmd_scale)
    s = sub.add_parser("mrc", parents=[common, traced], help="mixed-radix conversion trace")
    s.add_argument("x")
    s.set_defaults(fn=cmd_mrc)
    s = sub.add_parser("extend", parents=[common, traced], help="base-extend digits from a file")
    s.add_argument("file", help="digit file ('-' for stdin), '*' marks invalid digits")
    s.set_defaults(fn=cmd_extend)
    s = sub.add_parser("decompose", parents=[common, traced], help="divisor decomposition trace")
    s.add_argument("y")
    s.set_defaults(fn=cmd_decompose)
    s = sub.add_parser("div", parents=[common], help="divide X by Y")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--live", action="store_true", help="re-decompose every iteration")
    s.add_argument("--trace", choices=("md", "csv", "json"))
    s.add_argument("--output", metavar="FILE", help="write the trace here")
    s.set_defaults(fn=cmd_div)
    s = sub.add_parser("selftest", help="golden traces and inverse table check")
    s.set_defaults(fn=cmd_selftest)
    s = sub.add_parser("fuzz", parents=[common], help="oracle-checked random divisions")
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exhaustive-toy", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--json", metavar="FILE", help="also write a JSON report")
    s.add_argument("--trace-dir", metavar="DIR", help="write traces of failing cases")
    s.set_defaults(fn=cmd_fuzz)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, FormatError, OSError) as exc:
        print(f"rnsdiv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RnsError, ArithmeticError) as exc:
        print(f"rnsdiv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ARITH


if __name__ == "__main__":
    sys.exit(main())
