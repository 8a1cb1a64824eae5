"""Certified interval arithmetic over exact rationals.

Enclosures are closed intervals [lo, hi] with Fraction endpoints that are
guaranteed to contain the exact real quantity they stand for.  Transcendental
endpoints (cos, sin, sqrt, pi) are produced by mpmath's interval arithmetic
and converted back to exact dyadic rationals, so every bound stays certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Union

import mpmath

Rat = Union[Fraction, int]


class BudgetExceededError(RuntimeError):
    """Raised when a certified computation cannot reach the requested
    tolerance within its configured budget."""


@dataclass(frozen=True)
class Enclosure:
    """A certified interval [lo, hi] containing an exact real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure: {self.lo} > {self.hi}")

    @staticmethod
    def exact(v: Rat) -> "Enclosure":
        v = Fraction(v)
        return Enclosure(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other: "Enclosure") -> "Enclosure":
        other = _coerce(other)
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other: "Enclosure") -> "Enclosure":
        return self + (-_coerce(other))

    def __mul__(self, other) -> "Enclosure":
        other = _coerce(other)
        prods = [self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi]
        return Enclosure(min(prods), max(prods))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("division by an enclosure containing 0")
        recs = [1 / other.lo, 1 / other.hi]
        return self * Enclosure(min(recs), max(recs))

    def abs(self) -> "Enclosure":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(Fraction(0), max(-self.lo, self.hi))

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains(self, v: Rat) -> bool:
        return self.lo <= v <= self.hi

    def scaled(self, s: Rat) -> "Enclosure":
        s = Fraction(s)
        if s >= 0:
            return Enclosure(self.lo * s, self.hi * s)
        return Enclosure(self.hi * s, self.lo * s)


def _coerce(v) -> Enclosure:
    if isinstance(v, Enclosure):
        return v
    return Enclosure.exact(v)


def emax(values: Iterable[Enclosure]) -> Enclosure:
    """Enclosure of the max of the enclosed values."""
    vals = list(values)
    if not vals:
        return Enclosure.exact(0)
    return Enclosure(max(v.lo for v in vals), max(v.hi for v in vals))


def esum(values: Iterable[Enclosure]) -> Enclosure:
    total = Enclosure.exact(0)
    for v in values:
        total = total + v
    return total


def sqrt_enclosure(v: Rat, bits: int = 64) -> Enclosure:
    """Certified enclosure of sqrt(v) for rational v >= 0, width <= 2^-bits-ish."""
    v = Fraction(v)
    if v < 0:
        raise ValueError("sqrt of negative rational")
    if v == 0:
        return Enclosure.exact(0)
    # scale so that the integer sqrt carries `bits` fractional bits
    scale = 1 << bits
    n = v.numerator * scale * scale
    d = v.denominator
    # floor sqrt of n/d: isqrt(n*d)//d
    r = isqrt(n * d)
    lo = Fraction(r, d * scale)
    hi = Fraction(r + 1, d * scale)
    return Enclosure(lo, hi)


def _raw_mpf_to_fraction(raw) -> Fraction:
    """Exact conversion of a raw finite mpf tuple to a Fraction."""
    sign, man, exp, _ = raw
    man, exp = int(man), int(exp)  # the gmpy2 backend yields mpz here
    if man == 0:
        if exp != 0:
            raise ValueError("non-finite interval endpoint")
        return Fraction(0)
    m = -man if sign else man
    if exp >= 0:
        return Fraction(m * (1 << exp))
    return Fraction(m, 1 << (-exp))


def _iv_to_enclosure(x) -> Enclosure:
    a, b = x._mpi_
    return Enclosure(_raw_mpf_to_fraction(a), _raw_mpf_to_fraction(b))


def _with_precision(func, arg: Fraction, bits: int) -> Enclosure:
    old = mpmath.iv.prec
    try:
        mpmath.iv.prec = bits
        a = mpmath.iv.mpf(arg.numerator) / mpmath.iv.mpf(arg.denominator)
        return _iv_to_enclosure(func(a))
    finally:
        mpmath.iv.prec = old


@lru_cache(maxsize=1 << 18)
def _cos_cached(v: Fraction, bits: int) -> Enclosure:
    return _with_precision(mpmath.iv.cos, v, bits)


@lru_cache(maxsize=1 << 18)
def _sin_cached(v: Fraction, bits: int) -> Enclosure:
    return _with_precision(mpmath.iv.sin, v, bits)


def cos_enclosure(v: Rat, bits: int = 64) -> Enclosure:
    return _cos_cached(Fraction(v), bits)


def sin_enclosure(v: Rat, bits: int = 64) -> Enclosure:
    return _sin_cached(Fraction(v), bits)


def pi_enclosure(bits: int = 64) -> Enclosure:
    old = mpmath.iv.prec
    try:
        mpmath.iv.prec = bits
        return _iv_to_enclosure(mpmath.iv.pi)
    finally:
        mpmath.iv.prec = old


@dataclass(frozen=True)
class QQi:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(v) -> "QQi":
        if isinstance(v, QQi):
            return v
        return QQi(Fraction(v), Fraction(0))

    def __add__(self, other) -> "QQi":
        other = QQi.of(other)
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "QQi":
        return QQi(-self.re, -self.im)

    def __sub__(self, other) -> "QQi":
        return self + (-QQi.of(other))

    def __rsub__(self, other) -> "QQi":
        return QQi.of(other) + (-self)

    def __mul__(self, other) -> "QQi":
        other = QQi.of(other)
        return QQi(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conj(self) -> "QQi":
        return QQi(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def abs_enclosure(self, bits: int = 64) -> Enclosure:
        if self.im == 0:
            return Enclosure.exact(abs(self.re))
        if self.re == 0:
            return Enclosure.exact(abs(self.im))
        return sqrt_enclosure(self.abs_sq(), bits)

    def abs_upper(self) -> Fraction:
        """Cheap rational upper bound on |self| (exact when purely real/imag)."""
        return self.abs_enclosure(16).hi


ZERO_I = QQi(Fraction(0), Fraction(0))
ONE_I = QQi(Fraction(1), Fraction(0))
IMAG = QQi(Fraction(0), Fraction(1))
