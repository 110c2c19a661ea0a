"""Exact dyadic fixed-point rationals a * 2**(-n).

The value space of the xi shadows and of every error window checked in
tests.  All arithmetic is exact; precisions are aligned, never rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True, slots=True)
class Dyadic:
    num: int
    prec: int

    def __post_init__(self) -> None:
        if self.prec < 0:
            raise ValueError("precision must be >= 0")

    @staticmethod
    def from_int(v: int) -> "Dyadic":
        return Dyadic(v, 0)

    @staticmethod
    def ulp(n: int) -> "Dyadic":
        """2**(-n)."""
        return Dyadic(1, n)

    def _align(self, other: "Dyadic") -> tuple[int, int, int]:
        n = max(self.prec, other.prec)
        return self.num << (n - self.prec), other.num << (n - other.prec), n

    def __add__(self, other: "Dyadic") -> "Dyadic":
        a, b, n = self._align(other)
        return Dyadic(a + b, n)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        a, b, n = self._align(other)
        return Dyadic(a - b, n)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.prec)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.num * other.num, self.prec + other.prec)

    def scale_int(self, k: int) -> "Dyadic":
        return Dyadic(self.num * k, self.prec)

    def half_pow(self, t: int) -> "Dyadic":
        """self * 2**(-t)."""
        return Dyadic(self.num, self.prec + t)

    def _cmp(self, other: "Dyadic") -> int:
        a, b, _ = self._align(other)
        return (a > b) - (a < b)

    def __lt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "Dyadic") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "Dyadic") -> bool:
        return self._cmp(other) >= 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.prec)

    def __float__(self) -> float:
        f = self.as_fraction()
        return f.numerator / f.denominator

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, 2**-{self.prec})"


ZERO = Dyadic(0, 0)
ONE = Dyadic(1, 0)
