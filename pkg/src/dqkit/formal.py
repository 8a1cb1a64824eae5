"""Truncated formal power series in hbar.

A series carries its truncation order N and exactly N+1 coefficients; all
binary operations truncate to the smaller order, so every identity is exact
"mod hbar^(N+1)".  Coefficients are either scalars (Fraction/QQi) or
SmoothRep coefficient functions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .intervals import Enclosure, QQi, emax
from .coeffring import AnyRep, PolyRep, SmoothRep

DEFAULT_TRUNCATION = 4

Scalar = Union[Fraction, int, QQi]


class TruncationError(ValueError):
    """Raised when a semi-norm index exceeds the stored truncation order."""


def _zero_like(c):
    if isinstance(c, SmoothRep):
        return c.scale(0)
    return QQi.of(0) if isinstance(c, QQi) else Fraction(0)


def _is_zero_coeff(c) -> bool:
    if isinstance(c, SmoothRep):
        return c.is_zero()
    if isinstance(c, QQi):
        return c.is_zero()
    return c == 0


class FormalSeries:
    """hbar-power series truncated at order N (inclusive)."""

    __slots__ = ("N", "coeffs")

    def __init__(self, coeffs: Sequence, N: int = None):
        coeffs = list(coeffs)
        if N is None:
            N = len(coeffs) - 1
        if N < 0:
            raise ValueError("truncation order must be >= 0")
        if len(coeffs) < N + 1:
            proto = coeffs[0] if coeffs else Fraction(0)
            coeffs = coeffs + [_zero_like(proto)] * (N + 1 - len(coeffs))
        self.N = N
        self.coeffs = tuple(coeffs[: N + 1])

    def __repr__(self):
        return f"{type(self).__name__}(N={self.N}, coeffs={list(self.coeffs)})"

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.N == other.N and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def is_zero(self) -> bool:
        return all(_is_zero_coeff(c) for c in self.coeffs)

    def _rewrap(self, coeffs, N):
        return type(self)(coeffs, N)

    def truncate(self, M: int) -> "FormalSeries":
        if M > self.N:
            raise TruncationError(f"cannot extend truncation {self.N} to {M}")
        return self._rewrap(self.coeffs[: M + 1], M)

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        N = min(self.N, other.N)
        return self._rewrap(
            [a + b for a, b in zip(self.coeffs[: N + 1], other.coeffs[: N + 1])], N)

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + other.scale(-1)

    def scale(self, s) -> "FormalSeries":
        if isinstance(self.coeffs[0], SmoothRep):
            return self._rewrap([c.scale(s) for c in self.coeffs], self.N)
        return self._rewrap([c * s for c in self.coeffs], self.N)

    def __mul__(self, other: "FormalSeries") -> "FormalSeries":
        """Cauchy product: c_m = sum_{i+j=m} a_i b_j, truncated."""
        N = min(self.N, other.N)
        out = []
        for m in range(N + 1):
            acc = None
            for i in range(m + 1):
                term = self.coeffs[i] * other.coeffs[m - i]
                acc = term if acc is None else acc + term
            out.append(acc)
        return self._rewrap(out, N)

    def hbar_shift(self, k: int) -> "FormalSeries":
        """Multiply by hbar^k (keeping the truncation order)."""
        if k < 0:
            raise ValueError("negative hbar shift")
        zero = _zero_like(self.coeffs[0])
        coeffs = [zero] * min(k, self.N + 1) + list(self.coeffs[: max(0, self.N + 1 - k)])
        return self._rewrap(coeffs, self.N)


def scalar_seminorm(phi: FormalSeries, n: int) -> Enclosure:
    """max_{k<=n} |phi_k| for a scalar series; the tail above N is unknown."""
    if n > phi.N:
        raise TruncationError(f"semi-norm index {n} exceeds truncation {phi.N}")
    vals = []
    for c in phi.coeffs[: n + 1]:
        vals.append(QQi.of(c).abs_enclosure())
    return emax(vals)


class FormalFunction(FormalSeries):
    """Formal series whose coefficients are SmoothRep functions."""

    def __init__(self, coeffs: Sequence[AnyRep], N: int = None):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient")
        super().__init__(coeffs, N)
        dims = {c.dim for c in self.coeffs}
        if len(dims) != 1:
            raise ValueError("all coefficients must share dim")
        self.coeffs = tuple(self.coeffs)

    @property
    def dim(self) -> int:
        return self.coeffs[0].dim

    @staticmethod
    def of(rep: AnyRep, N: int = DEFAULT_TRUNCATION) -> "FormalFunction":
        return FormalFunction([rep], N)

    @staticmethod
    def constant(dim: int, c, N: int = DEFAULT_TRUNCATION) -> "FormalFunction":
        return FormalFunction([PolyRep.constant(dim, c)], N)

    @staticmethod
    def coordinate(dim: int, axis: int, N: int = DEFAULT_TRUNCATION) -> "FormalFunction":
        return FormalFunction([PolyRep.coordinate(dim, axis)], N)
