"""Exact dyadic arithmetic, the round-to-half quantizer, and CSD encoding.

Everything here is exact: dyadic rationals are kept as integer numerators
over a power-of-two denominator, and CSD codes evaluate to Fractions.
Binary64 is only used on analysis paths, never to define a kernel entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

# Multiplier set for kernel-grade entries: {-1, -1/2, 0, 1/2, 1}.
MULTIPLIER_SET = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))
MULTIPLIER_MAX = Fraction(1)


@dataclass(frozen=True)
class DyadicComplex:
    """Complex number (re_num + j*im_num) / 2**log2_den, exact.

    Instances normalize themselves so that equality is plain field equality.
    """

    re_num: int
    im_num: int
    log2_den: int = 0

    def __post_init__(self):
        if self.log2_den < 0:
            raise ValueError("log2_den must be non-negative")
        re, im, k = self.re_num, self.im_num, self.log2_den
        while k > 0 and re % 2 == 0 and im % 2 == 0:
            re //= 2
            im //= 2
            k -= 1
        object.__setattr__(self, "re_num", re)
        object.__setattr__(self, "im_num", im)
        object.__setattr__(self, "log2_den", k)

    @property
    def re(self) -> Fraction:
        return Fraction(self.re_num, 2 ** self.log2_den)

    @property
    def im(self) -> Fraction:
        return Fraction(self.im_num, 2 ** self.log2_den)

    def to_complex(self) -> complex:
        d = float(2 ** self.log2_den)
        return complex(self.re_num / d, self.im_num / d)

    def __add__(self, other: "DyadicComplex") -> "DyadicComplex":
        k = max(self.log2_den, other.log2_den)
        a = self.re_num << (k - self.log2_den)
        b = self.im_num << (k - self.log2_den)
        c = other.re_num << (k - other.log2_den)
        d = other.im_num << (k - other.log2_den)
        return DyadicComplex(a + c, b + d, k)

    def __neg__(self) -> "DyadicComplex":
        return DyadicComplex(-self.re_num, -self.im_num, self.log2_den)

    def __sub__(self, other: "DyadicComplex") -> "DyadicComplex":
        return self + (-other)

    def __mul__(self, other: "DyadicComplex") -> "DyadicComplex":
        a, b, c, d = self.re_num, self.im_num, other.re_num, other.im_num
        return DyadicComplex(a * c - b * d, a * d + b * c, self.log2_den + other.log2_den)

    def conj(self) -> "DyadicComplex":
        return DyadicComplex(self.re_num, -self.im_num, self.log2_den)

    def halve(self) -> "DyadicComplex":
        return DyadicComplex(self.re_num, self.im_num, self.log2_den + 1)

    def is_kernel_grade(self) -> bool:
        """True when both parts lie in the multiplier set {0, +-1/2, +-1}."""
        return self.re in MULTIPLIER_SET and self.im in MULTIPLIER_SET

    @staticmethod
    def from_halves(re2: int, im2: int) -> "DyadicComplex":
        """Build from twice-the-value integers (entries in halves)."""
        return DyadicComplex(re2, im2, 1)


def round_to_half(x: float) -> float:
    """Quantize to the nearest multiple of 1/2, ties away from zero.

    This is the entrywise quantizer used to produce every low-complexity
    kernel; the tie rule matters because nearest-even would change kernel
    entries whenever the scaled input lands on an exact quarter multiple.
    """
    if not math.isfinite(x):
        raise ValueError(f"round_to_half requires a finite input, got {x!r}")
    y = 2.0 * x
    return 0.5 * math.copysign(math.floor(abs(y) + 0.5), y)


@dataclass(frozen=True)
class CsdCode:
    """Canonical signed-digit code: one integer digit, up to 7 fractional.

    digits[i] is the coefficient of 2**-i. Canonical form forbids adjacent
    nonzero digits; codes used for scale constants carry at most three
    nonzero digits so a multiplication costs at most two additions.
    """

    digits: tuple

    def __post_init__(self):
        if len(self.digits) < 1 or len(self.digits) > 8:
            raise ValueError("CSD code must have 1 integer + at most 7 fractional digits")
        if any(d not in (-1, 0, 1) for d in self.digits):
            raise ValueError("CSD digits must be -1, 0, or 1")
        for a, b in zip(self.digits, self.digits[1:]):
            if a != 0 and b != 0:
                raise ValueError("CSD code has adjacent nonzero digits")

    @property
    def nonzero_count(self) -> int:
        return sum(1 for d in self.digits if d != 0)

    def __float__(self) -> float:
        return float(csd_eval(self))

    def __str__(self) -> str:
        marks = {1: "1", 0: "0", -1: "̅1"}  # overline-1 rendered as combining mark
        head = marks[self.digits[0]]
        tail = "".join(marks[d] for d in self.digits[1:])
        return f"{head}.{tail}"


def csd_eval(code: CsdCode) -> Fraction:
    """Exact rational value of a CSD code."""
    return sum((Fraction(d, 2 ** i) for i, d in enumerate(code.digits)), Fraction(0))


@lru_cache(maxsize=None)
def _all_codes(max_nonzero: int, frac_bits: int):
    codes = []
    for digits in product((-1, 0, 1), repeat=1 + frac_bits):
        if sum(1 for d in digits if d != 0) > max_nonzero:
            continue
        if any(a != 0 and b != 0 for a, b in zip(digits, digits[1:])):
            continue
        codes.append(CsdCode(digits))
    return tuple(codes)


def csd_encode(v: float, max_nonzero: int = 3, frac_bits: int = 7) -> CsdCode:
    """Best CSD approximation of v with the given digit budget.

    Minimizes |v - value(code)|; ties break toward fewer nonzero digits and
    then toward the smaller absolute value.
    """
    if not (0.0 < v < 2.0):
        raise ValueError(f"csd_encode expects 0 < v < 2, got {v!r}")
    if max_nonzero < 1:
        raise ValueError("max_nonzero must be at least 1")
    if frac_bits > 7:
        raise ValueError("frac_bits is limited to 7")
    target = Fraction(v)
    best = None
    best_key = None
    for code in _all_codes(max_nonzero, frac_bits):
        val = csd_eval(code)
        key = (abs(val - target), code.nonzero_count, abs(val))
        if best_key is None or key < best_key:
            best, best_key = code, key
    if best is None:  # unreachable for v in range
        raise RuntimeError("no representable CSD code")
    return best
