"""The formal Weyl bundle on a chart.

Elements are finite sums of monomials hbar^k * c(x) * y^I * dx^J with smooth
coefficients c, symmetric fiber variables y^i, and antisymmetric form factors
dx^j.  The weight grading |hbar| = 2, |y^i| = 1 truncates everything at a cap
W.  dx factors are kept in strictly increasing index order, with reordering
signs absorbed into the coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Tuple

from .coeffring import AnyRep, DimensionMismatchError, Exponent, PolyRep
from .formal import FormalFunction
from .star import SymplecticStructure, _bidiff_states

Key = Tuple[int, Exponent, Tuple[int, ...]]


class WeightCapError(Exception):
    """A computation produced terms beyond the representable weight cap."""


def wedge_indices(J1: Tuple[int, ...], J2: Tuple[int, ...]) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Sign and sorted index tuple of dx^J1 ^ dx^J2, or None if it vanishes."""
    combined = J1 + J2
    if len(set(combined)) != len(combined):
        return None
    sign = 1
    items = list(combined)
    # count inversions of the concatenation (bubble sort parity)
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            if items[a] > items[b]:
                sign = -sign
    return sign, tuple(sorted(items))


class WeylElement:
    """A truncated Weyl-bundle element with chart-function coefficients."""

    __slots__ = ("dim", "W", "terms")

    def __init__(self, dim: int, W: int, terms: Optional[Dict[Key, AnyRep]] = None):
        if dim <= 0 or dim % 2 != 0:
            raise ValueError("dim must be a positive even integer")
        if W < 0:
            raise ValueError("weight cap must be non-negative")
        self.dim = dim
        self.W = W
        clean: Dict[Key, AnyRep] = {}
        for (k, I, J), c in (terms or {}).items():
            if c.dim != dim:
                raise DimensionMismatchError("coefficient dim mismatch")
            if len(I) != dim or any(e < 0 for e in I):
                raise ValueError("bad y-exponent")
            if list(J) != sorted(set(J)) or any(j < 0 or j >= dim for j in J):
                raise ValueError("dx indices must be strictly increasing and in range")
            if 2 * k + sum(I) > W or len(J) > dim:
                continue
            if not c.is_zero():
                clean[(k, tuple(I), tuple(J))] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(dim: int, W: int) -> "WeylElement":
        return WeylElement(dim, W, {})

    @staticmethod
    def from_function(c: AnyRep, W: int, k: int = 0) -> "WeylElement":
        zero = (0,) * c.dim
        return WeylElement(c.dim, W, {(k, zero, ()): c})

    @staticmethod
    def monomial(c: AnyRep, W: int, k: int, I: Exponent, J: Tuple[int, ...]) -> "WeylElement":
        return WeylElement(c.dim, W, {(k, tuple(I), tuple(J)): c})

    @staticmethod
    def from_formal(f: FormalFunction, W: int) -> "WeylElement":
        zero = (0,) * f.dim
        terms = {(k, zero, ()): c for k, c in enumerate(f.coeffs) if not c.is_zero()}
        return WeylElement(f.dim, W, terms)

    # -- basic algebra ----------------------------------------------------

    def _accumulate(self, acc: Dict[Key, AnyRep], key: Key, c: AnyRep):
        if key in acc:
            acc[key] = acc[key] + c
        else:
            acc[key] = c

    def __add__(self, other: "WeylElement") -> "WeylElement":
        if self.dim != other.dim:
            raise DimensionMismatchError("dim mismatch")
        W = min(self.W, other.W)
        acc: Dict[Key, AnyRep] = dict(self.terms)
        for key, c in other.terms.items():
            self._accumulate(acc, key, c)
        return WeylElement(self.dim, W, acc)

    def scale(self, s) -> "WeylElement":
        return WeylElement(self.dim, self.W,
                           {k: c.scale(s) for k, c in self.terms.items()})

    def __sub__(self, other: "WeylElement") -> "WeylElement":
        return self + other.scale(Fraction(-1))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, WeylElement) and self.dim == other.dim
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def with_cap(self, W: int) -> "WeylElement":
        return WeylElement(self.dim, W, dict(self.terms))

    def weight_component(self, m: int) -> "WeylElement":
        if m < 0 or m > self.W:
            raise ValueError("weight out of range")
        return WeylElement(self.dim, self.W,
                           {(k, I, J): c for (k, I, J), c in self.terms.items()
                            if 2 * k + sum(I) == m})

    def max_weight(self) -> int:
        return max((2 * k + sum(I) for (k, I, J) in self.terms), default=0)

    def form_degree_component(self, q: int) -> "WeylElement":
        return WeylElement(self.dim, self.W,
                           {key: c for key, c in self.terms.items()
                            if len(key[2]) == q})

    def __repr__(self):
        return f"WeylElement(dim={self.dim}, W={self.W}, {len(self.terms)} terms)"


def _y_derivative_factor(I: Exponent, D: Exponent) -> Optional[Tuple[int, Exponent]]:
    """Coefficient and exponent of d^D/dy^D applied to y^I, or None if zero."""
    coeff = 1
    out = []
    for e, d in zip(I, D):
        if d > e:
            return None
        c = 1
        for t in range(d):
            c *= e - t
        coeff *= c
        out.append(e - d)
    return coeff, tuple(out)


def fiberwise_moyal(a: WeylElement, b: WeylElement, S: SymplecticStructure) -> WeylElement:
    """Fiberwise Moyal-Weyl product, exact, truncated at the common cap."""
    if a.dim != b.dim or a.dim != S.dim:
        raise DimensionMismatchError("dim mismatch")
    W = min(a.W, b.W)
    acc: Dict[Key, AnyRep] = {}
    out = WeylElement.zero(a.dim, W)
    states_cache: Dict[int, Dict] = {}
    for (ka, Ia, Ja), ca in a.terms.items():
        for (kb, Ib, Jb), cb in b.terms.items():
            wedge = wedge_indices(Ja, Jb)
            if wedge is None:
                continue
            sign, J = wedge
            cab = (ca * cb).scale(Fraction(sign))
            if cab.is_zero():
                continue
            mmax = min(sum(Ia), sum(Ib))
            for m in range(mmax + 1):
                k = ka + kb + m
                if 2 * k > W:
                    break
                if m == 0:
                    I = tuple(p + q for p, q in zip(Ia, Ib))
                    if 2 * k + sum(I) <= W:
                        out._accumulate(acc, (k, I, J), cab)
                    continue
                if m not in states_cache:
                    states_cache[m] = _bidiff_states(a.dim, S, m)
                pref = Fraction(1, 2 ** m * factorial(m))
                for (Dy1, Dy2), w in states_cache[m].items():
                    fa = _y_derivative_factor(Ia, Dy1)
                    if fa is None:
                        continue
                    fb = _y_derivative_factor(Ib, Dy2)
                    if fb is None:
                        continue
                    c1, I1 = fa
                    c2, I2 = fb
                    I = tuple(p + q for p, q in zip(I1, I2))
                    if 2 * k + sum(I) > W:
                        continue
                    scalar = pref * w * c1 * c2
                    if scalar == 0:
                        continue
                    out._accumulate(acc, (k, I, J), cab.scale(scalar))
    return WeylElement(a.dim, W, acc)


def delta(a: WeylElement) -> WeylElement:
    """delta(a) = dx^i ^ (d a / d y^i); lowers weight by exactly 1."""
    acc: Dict[Key, AnyRep] = {}
    out = WeylElement.zero(a.dim, a.W)
    for (k, I, J), c in a.terms.items():
        for i in range(a.dim):
            if I[i] == 0 or i in J:
                continue
            sign = (-1) ** sum(1 for j in J if j < i)
            NI = I[:i] + (I[i] - 1,) + I[i + 1:]
            NJ = tuple(sorted(J + (i,)))
            out._accumulate(acc, (k, NI, NJ), c.scale(Fraction(sign * I[i])))
    return WeylElement(a.dim, a.W, acc)


def delta_star(a: WeylElement) -> WeylElement:
    """delta*(a) = y^i iota_i(a); raises weight by exactly 1."""
    acc: Dict[Key, AnyRep] = {}
    out = WeylElement.zero(a.dim, a.W)
    for (k, I, J), c in a.terms.items():
        for pos, i in enumerate(J):
            sign = (-1) ** pos
            NI = I[:i] + (I[i] + 1,) + I[i + 1:]
            NJ = J[:pos] + J[pos + 1:]
            out._accumulate(acc, (k, NI, NJ), c.scale(Fraction(sign)))
    return WeylElement(a.dim, a.W, acc)


def delta_inv(a: WeylElement) -> WeylElement:
    """Monomial-wise delta*/(p+q); zero on monomials with no y or dx factor."""
    acc: Dict[Key, AnyRep] = {}
    out = WeylElement.zero(a.dim, a.W)
    for (k, I, J), c in a.terms.items():
        pq = sum(I) + len(J)
        if pq == 0:
            continue
        for pos, i in enumerate(J):
            sign = (-1) ** pos
            NI = I[:i] + (I[i] + 1,) + I[i + 1:]
            NJ = J[:pos] + J[pos + 1:]
            out._accumulate(acc, (k, NI, NJ), c.scale(Fraction(sign, pq)))
    return WeylElement(a.dim, a.W, acc)


def symbol(a: WeylElement) -> FormalFunction:
    """Set y = 0 and keep the zero-form part, as an hbar-series."""
    N = a.W // 2
    zero_I = (0,) * a.dim
    coeffs: List[AnyRep] = [PolyRep.constant(a.dim, Fraction(0)) for _ in range(N + 1)]
    for (k, I, J), c in a.terms.items():
        if I == zero_I and J == ():
            coeffs[k] = coeffs[k] + c
    return FormalFunction(coeffs, N)


def graded_commutator(a: WeylElement, b: WeylElement, S: SymplecticStructure) -> WeylElement:
    """[a, b] = a*b - (-1)^{qa qb} b*a, graded by form degree."""
    W = min(a.W, b.W)
    out = fiberwise_moyal(a, b, S)
    for qa in range(a.dim + 1):
        aq = a.form_degree_component(qa)
        if aq.is_zero():
            continue
        for qb in range(b.dim + 1):
            bq = b.form_degree_component(qb)
            if bq.is_zero():
                continue
            sgn = Fraction((-1) ** (qa * qb + 1))
            out = out + fiberwise_moyal(bq, aq, S).scale(sgn)
    return out.with_cap(W)


def bracket_over_hbar(a: WeylElement, b: WeylElement, S: SymplecticStructure) -> WeylElement:
    """(graded [a, b]_star) / hbar, exact to the common cap.

    The product is computed at an elevated internal cap so that dividing by
    hbar (which lowers weight by 2) loses nothing below the requested cap.
    """
    W = min(a.W, b.W)
    comm = graded_commutator(a.with_cap(W + 2), b.with_cap(W + 2), S)
    acc: Dict[Key, AnyRep] = {}
    for (k, I, J), c in comm.terms.items():
        if k == 0:
            raise ValueError("commutator is not divisible by hbar")
        acc[(k - 1, I, J)] = c
    return WeylElement(a.dim, W, acc)
