"""Semi-norms, the Fréchet metric, and star-product continuity ratios.

The l-th smooth semi-norm takes the certified supremum of all derivatives of
order <= l over the union of the first l+1 chart closures.  The formal
semi-norms mix hbar order and derivative order, ||f||_{hbar,k} =
sum_{i+j=k} ||f_i||_j, and induce the usual translation-invariant metric
d = sum_k 2^{-k} ||f-g||_k / (1 + ||f-g||_k), reported as an enclosure with
the exact geometric tail bound.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .coeffring import (AnyRep, Box, DimensionMismatchError, iterated_diff,
                        multi_indices, sup_enclosure)
from .formal import FormalFunction, TruncationError
from .intervals import Enclosure, emax
from .star import SymplecticStructure, moyal

DEFAULT_TOL = Fraction(1, 10 ** 6)

# Any closed interval of length >= 2*pi; suprema of periodic functions over it
# agree with suprema over a fundamental domain, and the endpoints stay rational.
_TORUS_PERIOD_COVER = (Fraction(0), Fraction(7))


class Atlas:
    """An ordered list of box charts with a manifold tag."""

    def __init__(self, charts: Sequence[Box], manifold: str = "flat_chart"):
        if not charts:
            raise ValueError("atlas needs at least one chart")
        if manifold not in ("flat_chart", "torus"):
            raise ValueError("manifold must be 'flat_chart' or 'torus'")
        dim = charts[0].dim
        if any(c.dim != dim for c in charts):
            raise DimensionMismatchError("all charts must share a dimension")
        if manifold == "torus":
            c0 = charts[0]
            for lo, hi in zip(c0.lo, c0.hi):
                if hi - lo < 7:
                    raise ValueError(
                        "torus chart 0 must cover a full fundamental domain "
                        "(each side of rational length >= 7 > 2*pi)")
        self.charts = tuple(charts)
        self.manifold = manifold

    @property
    def dim(self) -> int:
        return self.charts[0].dim

    @staticmethod
    def default_flat(dim: int) -> "Atlas":
        charts = [Box([-(i + 1)] * dim, [i + 1] * dim) for i in range(4)]
        return Atlas(charts, "flat_chart")

    @staticmethod
    def torus(dim: int) -> "Atlas":
        lo, hi = _TORUS_PERIOD_COVER
        return Atlas([Box([lo] * dim, [hi] * dim)], "torus")


def smooth_seminorm(f: AnyRep, l: int, A: Atlas, tol=DEFAULT_TOL) -> Enclosure:
    """Certified enclosure of the l-th chartwise semi-norm of f."""
    if l < 0:
        raise ValueError("semi-norm index must be >= 0")
    if f.dim != A.dim:
        raise DimensionMismatchError("dim mismatch")
    charts = A.charts[:l + 1]
    values: List[Enclosure] = []
    for I in multi_indices(f.dim, l):
        df = iterated_diff(f, I)
        if df.is_zero():
            values.append(Enclosure(Fraction(0), Fraction(0)))
            continue
        for box in charts:
            values.append(sup_enclosure(df, box, tol))
    return emax(values)


def formal_seminorm(f: FormalFunction, k: int, A: Atlas, tol=DEFAULT_TOL) -> Enclosure:
    """||f||_{hbar,k} = sum_{i+j=k} ||f_i||_j, by interval addition."""
    if k > f.N:
        raise TruncationError(
            f"semi-norm index {k} exceeds truncation order {f.N}")
    total = Enclosure(Fraction(0), Fraction(0))
    for i in range(k + 1):
        if f.coeffs[i].is_zero():
            continue
        total = total + smooth_seminorm(f.coeffs[i], k - i, A, tol)
    return total


def _metric_term(k: int, s: Enclosure) -> Enclosure:
    # 2^{-k} s/(1+s) is monotone in s, so endpoints map to endpoints
    w = Fraction(1, 2 ** k)
    return Enclosure(w * s.lo / (1 + s.lo), w * s.hi / (1 + s.hi))


def _extended_seminorm(h: FormalFunction, k: int, A: Atlas, tol) -> Enclosure:
    # like formal_seminorm, but treats coefficients beyond the truncation
    # order as zero (the series is a polynomial in hbar by construction)
    total = Enclosure(Fraction(0), Fraction(0))
    for i in range(min(k, h.N) + 1):
        if h.coeffs[i].is_zero():
            continue
        total = total + smooth_seminorm(h.coeffs[i], k - i, A, tol)
    return total


def _distance(h: FormalFunction, A: Atlas, K_terms: int, tol) -> Enclosure:
    if K_terms < 0:
        raise ValueError("K_terms must be >= 0")
    total = Enclosure(Fraction(0), Fraction(0))
    for k in range(K_terms + 1):
        total = total + _metric_term(k, _extended_seminorm(h, k, A, tol))
    return Enclosure(total.lo, total.hi + Fraction(1, 2 ** K_terms))


def frechet_distance(f: FormalFunction, g: FormalFunction, A: Atlas,
                     K_terms: int, tol=DEFAULT_TOL) -> Enclosure:
    """Enclosure of d(f,g); the upper bound carries the exact series tail."""
    return _distance(f - g, A, K_terms, tol)


def compact_distance(f: FormalFunction, g: FormalFunction, K: Box,
                     K_terms: int, tol=DEFAULT_TOL) -> Enclosure:
    """Same metric with every supremum taken over the single box K."""
    A = Atlas([K] * (K_terms + 1), "flat_chart")
    return _distance(f - g, A, K_terms, tol)


def continuity_ratio(f: FormalFunction, g: FormalFunction, l: int, A: Atlas,
                     S: SymplecticStructure, tol=DEFAULT_TOL) -> Enclosure:
    """Enclosure of ||f*g||_{hbar,l} / (||f||_{hbar,l} ||g||_{hbar,l})."""
    nf = formal_seminorm(f, l, A, tol)
    ng = formal_seminorm(g, l, A, tol)
    denom = nf * ng
    if denom.lo <= 0:
        raise ZeroDivisionError("semi-norm denominator may vanish")
    nfg = formal_seminorm(moyal(f, g, S), l, A, tol)
    return nfg / denom
