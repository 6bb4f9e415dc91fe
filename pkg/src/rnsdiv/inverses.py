"""Multiplicative-inverse tables for scaling by powers of the digit bases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import RnsFormat
from .errors import NoInverse, NotDivisible


def mod_inverse(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise NoInverse(f"{a} has no inverse modulo {m}")
    return s0 % m


@dataclass(frozen=True)
class InverseTable:
    """Dense LUT: ``lut[j][k][i][p] == |1 / base_j**k|_(base_i**p)``.

    Index 0 in the power dimensions and the ``i == j`` slots hold ``None``
    (no inverse exists for a digit's own base).
    """

    fmt: RnsFormat
    lut: tuple

    def inverse(self, j: int, k: int, i: int, p: int) -> int:
        value = self.lut[j][k][i][p]
        if value is None:
            raise LookupError(f"no inverse of digit {j}^{k} wrt digit {i}^{p}")
        return value

    def row(self, j: int, k: int, powers: tuple[int, ...]) -> tuple[int | None, ...]:
        """Inverses of base_j**k against each digit at its given power."""
        lut_jk = self.lut[j][k]
        return tuple(lut_jk[i][p] if p else None for i, p in enumerate(powers))

    def entries(self) -> Iterator[tuple[int, int, int, int, int]]:
        """Yield ``(j, k, i, p, inverse)`` for every defined entry."""
        for j, by_k in enumerate(self.lut):
            for k, by_i in enumerate(by_k):
                if by_i is None:
                    continue
                for i, by_p in enumerate(by_i):
                    for p, inv in enumerate(by_p):
                        if inv is not None:
                            yield j, k, i, p, inv

    def __len__(self) -> int:
        return sum(1 for _ in self.entries())


def build_inverse_table(fmt: RnsFormat) -> InverseTable:
    pt = fmt.power_table
    n = len(fmt)
    lut = []
    for j in range(n):
        by_k: list = [None]
        for k in range(1, fmt.max_powers[j] + 1):
            divisor = pt[j][k]
            by_i = []
            for i in range(n):
                if i == j:
                    by_i.append((None,) * (fmt.max_powers[i] + 1))
                    continue
                by_i.append(
                    (None,)
                    + tuple(mod_inverse(divisor, pt[i][p]) for p in range(1, fmt.max_powers[i] + 1))
                )
            by_k.append(tuple(by_i))
        lut.append(tuple(by_k))
    return InverseTable(fmt, tuple(lut))


def divide_digit(value: int, base: int, k: int) -> int:
    """Exact division of a digit value by ``base**k``."""
    d = base ** k
    q, r = divmod(value, d)
    if r:
        raise NotDivisible(f"{value} is not divisible by {base}^{k}")
    return q
