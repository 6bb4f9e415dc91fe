"""RNS word formats, digit-state values and carry-free digit arithmetic.

A value is held as two parallel tuples: the residue of each digit and the
number of base powers that digit still holds.  A digit whose power count has
dropped to zero is invalid ("skipped"); its stale residue is kept but never
read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DigitInvalid,
    DuplicateBase,
    FormatMismatch,
    MissingBaseTwo,
    NotPrime,
    OutOfRange,
    ValidityMismatch,
    WidthOverflow,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class ModulusSpec:
    """One digit modulus ``base ** max_power``.

    Plain (non power-based) digits have ``max_power == 1`` and
    ``power_based == False``; the decomposition never selects them.
    """

    base: int
    max_power: int
    power_based: bool = True

    @property
    def modulus(self) -> int:
        return self.base ** self.max_power


@dataclass(frozen=True)
class RnsFormat:
    """An ordered, validated set of digit moduli (smallest modulus first)."""

    specs: tuple[ModulusSpec, ...]
    digit_width: int

    def __len__(self) -> int:
        return len(self.specs)

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return tuple(s.modulus for s in self.specs)

    @cached_property
    def bases(self) -> tuple[int, ...]:
        return tuple(s.base for s in self.specs)

    @cached_property
    def max_powers(self) -> tuple[int, ...]:
        return tuple(s.max_power for s in self.specs)

    @cached_property
    def power_table(self) -> tuple[tuple[int, ...], ...]:
        # power_table[i][p] == base_i ** p
        return tuple(
            tuple(s.base ** p for p in range(s.max_power + 1)) for s in self.specs
        )

    @cached_property
    def range(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def power_indices(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.specs) if s.power_based)

    @property
    def power_count(self) -> int:
        return len(self.power_indices)

    @cached_property
    def two_index(self) -> int:
        return self.bases.index(2)

    def index_of_base(self, base: int) -> int:
        try:
            return self.bases.index(base)
        except ValueError:
            raise KeyError(f"no digit with base {base} in format") from None


def make_format(
    power_specs: Iterable[tuple[int, int]],
    plain_primes: Iterable[int] = (),
    digit_width: int = 9,
) -> RnsFormat:
    """Build a validated format from ``(base, max_power)`` pairs and plain primes."""
    specs = [ModulusSpec(b, p, True) for b, p in power_specs]
    specs += [ModulusSpec(q, 1, False) for q in plain_primes]
    seen: set[int] = set()
    for s in specs:
        if not is_prime(s.base):
            raise NotPrime(f"{s.base} is not prime")
        if s.max_power < 1:
            raise ValueError(f"max_power must be >= 1 (got {s.max_power} for base {s.base})")
        if s.base in seen:
            raise DuplicateBase(f"base {s.base} appears more than once")
        seen.add(s.base)
        if s.modulus >= 1 << digit_width:
            raise WidthOverflow(
                f"{s.base}^{s.max_power} = {s.modulus} does not fit in {digit_width} bits"
            )
    if 2 not in seen:
        raise MissingBaseTwo("a base-2 modulus is required")
    specs.sort(key=lambda s: s.modulus)
    return RnsFormat(tuple(specs), digit_width)


MOD9_POWER_SPECS = ((11, 2), (5, 3), (13, 2), (3, 5), (2, 8), (17, 2), (7, 3), (19, 2))
MOD9_PLAIN_PRIMES = (457, 461, 463, 467, 479, 487, 491, 499, 503, 509)


def mod9_default_format() -> RnsFormat:
    """The 18-digit, 9-bit MOD-9 word: eight power-based digits then ten primes."""
    return make_format(MOD9_POWER_SPECS, MOD9_PLAIN_PRIMES, 9)


def mod9_power_format() -> RnsFormat:
    """The eight power-based MOD-9 digits alone (range ~2^66)."""
    return make_format(MOD9_POWER_SPECS, (), 9)


def toy_format() -> RnsFormat:
    """Range-360 format (5, 2^3, 3^2) used for exhaustive checks; 5 is plain."""
    return make_format([(2, 3), (3, 2)], [5], 4)


class DigitState(NamedTuple):
    value: int
    power_remaining: int

    @property
    def valid(self) -> bool:
        return self.power_remaining > 0


@dataclass(frozen=True)
class RnsValue:
    fmt: RnsFormat
    values: tuple[int, ...]
    powers: tuple[int, ...]

    @classmethod
    def from_digits(
        cls,
        fmt: RnsFormat,
        values: Sequence[int | None],
        powers: Sequence[int] | None = None,
    ) -> "RnsValue":
        """Checked constructor; ``None`` in ``values`` marks an invalid digit."""
        if len(values) != len(fmt):
            raise ValueError(f"expected {len(fmt)} digits, got {len(values)}")
        if powers is None:
            powers = [0 if v is None else p for v, p in zip(values, fmt.max_powers)]
        vals = []
        for i, (v, p) in enumerate(zip(values, powers)):
            if not 0 <= p <= fmt.max_powers[i]:
                raise ValueError(f"digit {i}: power {p} outside [0, {fmt.max_powers[i]}]")
            if p == 0:
                vals.append(0 if v is None else v)
                continue
            if v is None:
                raise ValueError(f"digit {i}: valid digit needs a value")
            m = fmt.power_table[i][p]
            if not 0 <= v < m:
                raise ValueError(f"digit {i}: value {v} outside [0, {m})")
            vals.append(v)
        return cls(fmt, tuple(vals), tuple(powers))

    @property
    def digits(self) -> tuple[DigitState, ...]:
        return tuple(DigitState(v, p) for v, p in zip(self.values, self.powers))

    def cells(self) -> tuple[int | None, ...]:
        return tuple(v if p else None for v, p in zip(self.values, self.powers))

    def current_moduli(self) -> tuple[int, ...]:
        pt = self.fmt.power_table
        return tuple(pt[i][p] for i, p in enumerate(self.powers))

    @property
    def normalized(self) -> bool:
        return self.powers == self.fmt.max_powers

    def valid(self, i: int) -> bool:
        return self.powers[i] > 0

    def __repr__(self) -> str:
        cells = ",".join("*" if c is None else str(c) for c in self.cells())
        return f"RnsValue({{{cells}}})"


def encode(x: int, fmt: RnsFormat) -> RnsValue:
    if not 0 <= x < fmt.range:
        raise OutOfRange(f"{x} outside [0, {fmt.range})")
    return RnsValue(fmt, tuple(x % m for m in fmt.moduli), fmt.max_powers)


def decode(v: RnsValue) -> int:
    """Integer value of the valid digits, by mixed-radix recombination.

    Uses the digits' current moduli; the all-invalid value decodes to 0.
    """
    pt = v.fmt.power_table
    pairs = sorted(
        (pt[i][p], v.values[i]) for i, p in enumerate(v.powers) if p
    )
    x = 0
    weight = 1
    for m, r in pairs:
        a = (r - x) * pow(weight, -1, m) % m
        x += a * weight
        weight *= m
    return x


def effective_range(v: RnsValue) -> int:
    pt = v.fmt.power_table
    return math.prod(pt[i][p] for i, p in enumerate(v.powers) if p)


def is_zero(v: RnsValue) -> bool:
    return not any(val for val, p in zip(v.values, v.powers) if p)


def is_one(v: RnsValue) -> bool:
    return all(val == 1 for val, p in zip(v.values, v.powers) if p)


def check_compatible(a: RnsValue, b: RnsValue) -> None:
    if a.fmt is not b.fmt and a.fmt != b.fmt:
        raise FormatMismatch("operands use different formats")
    if a.powers != b.powers:
        raise ValidityMismatch(f"power patterns differ: {a.powers} vs {b.powers}")


def _pac(a: RnsValue, b: RnsValue, op) -> RnsValue:
    check_compatible(a, b)
    pt = a.fmt.power_table
    out = tuple(
        op(x, y) % pt[i][p] if p else x
        for i, (x, y, p) in enumerate(zip(a.values, b.values, a.powers))
    )
    return RnsValue(a.fmt, out, a.powers)


def pac_add(a: RnsValue, b: RnsValue) -> RnsValue:
    return _pac(a, b, lambda x, y: x + y)


def pac_sub(a: RnsValue, b: RnsValue) -> RnsValue:
    return _pac(a, b, lambda x, y: x - y)


def pac_mul(a: RnsValue, b: RnsValue) -> RnsValue:
    return _pac(a, b, lambda x, y: x * y)


def subtract_scalar(v: RnsValue, t: int) -> RnsValue:
    """Broadcast-subtract a small constant from every valid digit.

    The caller guarantees ``t <= decode(v)``; this is not checked.
    """
    if t == 0:
        return v
    pt = v.fmt.power_table
    out = tuple(
        (x - t) % pt[i][p] if p else x
        for i, (x, p) in enumerate(zip(v.values, v.powers))
    )
    return RnsValue(v.fmt, out, v.powers)


def increment(v: RnsValue) -> RnsValue:
    """Add one to every valid digit (the divisor-side increment)."""
    pt = v.fmt.power_table
    out = tuple(
        (x + 1) % pt[i][p] if p else x
        for i, (x, p) in enumerate(zip(v.values, v.powers))
    )
    return RnsValue(v.fmt, out, v.powers)


def divisible_powers(v: RnsValue, i: int) -> int:
    """Largest k <= power_remaining(i) with base_i**k dividing digit i."""
    p = v.powers[i]
    if p == 0:
        raise DigitInvalid(f"digit {i} is invalid")
    x = v.values[i]
    if x == 0:
        return p
    base = v.fmt.bases[i]
    k = 0
    while x % base == 0:
        x //= base
        k += 1
    return k


def any_zero(v: RnsValue) -> list[tuple[int, int]]:
    """Power-based valid digits divisible by at least one power of their base."""
    found = []
    for i in v.fmt.power_indices:
        if v.powers[i]:
            k = divisible_powers(v, i)
            if k:
                found.append((i, k))
    return found


def efficiency(moduli: Sequence[int], digit_width: int) -> float:
    """Representation efficiency in percent: log2(prod M_i) / (n * N) * 100."""
    return math.log2(math.prod(moduli)) / (digit_width * len(moduli)) * 100.0


def format_efficiency(fmt: RnsFormat) -> float:
    return efficiency(fmt.moduli, fmt.digit_width)
