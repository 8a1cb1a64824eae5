"""Exact coefficient functions: multivariate polynomials with rational
coefficients, trigonometric polynomials on the torus with complex-rational
mode coefficients, and finite sums of the two.

All arithmetic is exact.  Suprema over boxes are returned as certified
enclosures; transcendental point evaluation is enclosure-backed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, ceil
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

from .intervals import (
    BudgetExceededError,
    Enclosure,
    QQi,
    cos_enclosure,
    sin_enclosure,
)

Exponent = Tuple[int, ...]
RatVec = Tuple[Fraction, ...]


class DimensionMismatchError(ValueError):
    pass


class MixedProductError(TypeError):
    """Raised for products that would leave the poly/trig coefficient ring."""


def _ratvec(xs: Sequence) -> RatVec:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class CEnclosure:
    """Rectangular enclosure of a complex value."""

    re: Enclosure
    im: Enclosure

    @staticmethod
    def exact(v) -> "CEnclosure":
        v = QQi.of(v)
        return CEnclosure(Enclosure.exact(v.re), Enclosure.exact(v.im))

    def __add__(self, other: "CEnclosure") -> "CEnclosure":
        return CEnclosure(self.re + other.re, self.im + other.im)

    def abs_enclosure(self, bits: int = 64) -> Enclosure:
        from .intervals import sqrt_enclosure

        if self.im.lo == self.im.hi == 0:
            return self.re.abs()
        sq = self.re * self.re + self.im * self.im
        lo = sqrt_enclosure(max(Fraction(0), sq.lo), bits).lo
        hi = sqrt_enclosure(sq.hi, bits).hi
        return Enclosure(lo, hi)

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)


class SmoothRep:
    """Base class for exact coefficient-function representations."""

    dim: int

    def _check_dim(self, other: "SmoothRep"):
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.dim} vs {other.dim}")

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        raise NotImplementedError

    def diff(self, axis: int) -> "SmoothRep":
        raise NotImplementedError

    def scale(self, s) -> "SmoothRep":
        raise NotImplementedError


class PolyRep(SmoothRep):
    """Multivariate polynomial with exact rational coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[Dict[Exponent, Fraction]] = None):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim
        clean: Dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != dim or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for dim {dim}")
            c = Fraction(c)
            if c != 0:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @staticmethod
    def constant(dim: int, c) -> "PolyRep":
        return PolyRep(dim, {(0,) * dim: Fraction(c)})

    @staticmethod
    def coordinate(dim: int, axis: int) -> "PolyRep":
        if not 0 <= axis < dim:
            raise IndexError(f"axis {axis} out of range for dim {dim}")
        exp = [0] * dim
        exp[axis] = 1
        return PolyRep(dim, {tuple(exp): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, PolyRep) and self.dim == other.dim \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        return f"PolyRep(dim={self.dim}, terms={self.terms})"

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __add__(self, other):
        if isinstance(other, (TrigRep, SumRep)):
            return SumRep.of(self) + other
        self._check_dim(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return PolyRep(self.dim, terms)

    def __mul__(self, other):
        if isinstance(other, (TrigRep, SumRep)):
            raise MixedProductError("polynomial*trigonometric product is not representable")
        self._check_dim(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return PolyRep(self.dim, terms)

    def scale(self, s) -> "PolyRep":
        s = Fraction(s)
        return PolyRep(self.dim, {e: c * s for e, c in self.terms.items()})

    def diff(self, axis: int) -> "PolyRep":
        if not 0 <= axis < self.dim:
            raise IndexError(f"axis {axis} out of range for dim {self.dim}")
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[axis] == 0:
                continue
            ne = list(e)
            ne[axis] -= 1
            terms[tuple(ne)] = terms.get(tuple(ne), Fraction(0)) + c * e[axis]
        return PolyRep(self.dim, terms)

    def eval_exact(self, x: Sequence) -> Fraction:
        x = _ratvec(x)
        if len(x) != self.dim:
            raise DimensionMismatchError("point length != dim")
        powers = [{0: Fraction(1)} for _ in range(self.dim)]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    if k not in powers[i]:
                        powers[i][k] = x[i] ** k
                    v *= powers[i][k]
            total += v
        return total

    def eval_enclosure(self, x: Sequence, tol=None, bits: int = 64) -> CEnclosure:
        return CEnclosure.exact(self.eval_exact(x))


class TrigRep(SmoothRep):
    """Trigonometric polynomial sum_k c_k exp(i k.x) with QQi coefficients."""

    __slots__ = ("dim", "modes")

    def __init__(self, dim: int, modes: Optional[Dict[Exponent, QQi]] = None):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim
        clean: Dict[Exponent, QQi] = {}
        for k, c in (modes or {}).items():
            k = tuple(int(v) for v in k)
            if len(k) != dim:
                raise ValueError(f"bad frequency vector {k} for dim {dim}")
            c = QQi.of(c)
            prev = clean.get(k)
            c = c + prev if prev is not None else c
            clean[k] = c
        self.modes = {k: c for k, c in clean.items() if not c.is_zero()}

    @staticmethod
    def mode(dim: int, k: Sequence[int], coeff=1) -> "TrigRep":
        return TrigRep(dim, {tuple(k): QQi.of(coeff)})

    def __eq__(self, other):
        return isinstance(other, TrigRep) and self.dim == other.dim \
            and self.modes == other.modes

    def __hash__(self):
        return hash((self.dim, frozenset(self.modes.items())))

    def __repr__(self):
        return f"TrigRep(dim={self.dim}, modes={self.modes})"

    def is_zero(self) -> bool:
        return not self.modes

    def is_real_valued(self) -> bool:
        """True iff the coefficient at -k is the conjugate of the one at k."""
        for k, c in self.modes.items():
            mk = tuple(-v for v in k)
            other = self.modes.get(mk)
            if other is None or other != c.conj():
                return False
        return True

    def zero_mode(self) -> QQi:
        return self.modes.get((0,) * self.dim, QQi.of(0))

    def __add__(self, other):
        if isinstance(other, (PolyRep, SumRep)):
            return SumRep.of(self) + other
        self._check_dim(other)
        modes = dict(self.modes)
        for k, c in other.modes.items():
            modes[k] = modes.get(k, QQi.of(0)) + c
        return TrigRep(self.dim, modes)

    def __mul__(self, other):
        if isinstance(other, (PolyRep, SumRep)):
            raise MixedProductError("trigonometric*polynomial product is not representable")
        self._check_dim(other)
        modes: Dict[Exponent, QQi] = {}
        for k1, c1 in self.modes.items():
            for k2, c2 in other.modes.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                modes[k] = modes.get(k, QQi.of(0)) + c1 * c2
        return TrigRep(self.dim, modes)

    def scale(self, s) -> "TrigRep":
        s = QQi.of(s)
        return TrigRep(self.dim, {k: c * s for k, c in self.modes.items()})

    def diff(self, axis: int) -> "TrigRep":
        if not 0 <= axis < self.dim:
            raise IndexError(f"axis {axis} out of range for dim {self.dim}")
        return TrigRep(self.dim, {
            k: c * QQi(Fraction(0), Fraction(k[axis]))
            for k, c in self.modes.items() if k[axis] != 0
        })

    def eval_enclosure(self, x: Sequence, tol=None, bits: int = 64) -> CEnclosure:
        """Certified enclosure of the value at a rational point.

        Precision escalates until the enclosure width is below `tol`
        (default 10^-12)."""
        x = _ratvec(x)
        if len(x) != self.dim:
            raise DimensionMismatchError("point length != dim")
        tol = Fraction(1, 10 ** 12) if tol is None else Fraction(tol)
        while True:
            re = Enclosure.exact(0)
            im = Enclosure.exact(0)
            for k, c in self.modes.items():
                angle = sum(ki * xi for ki, xi in zip(k, x))
                cosv = cos_enclosure(angle, bits)
                sinv = sin_enclosure(angle, bits)
                # (cre + i cim)(cos + i sin)
                re = re + cosv.scaled(c.re) - sinv.scaled(c.im)
                im = im + sinv.scaled(c.re) + cosv.scaled(c.im)
            result = CEnclosure(re, im)
            if result.width <= tol or bits > 4096:
                return result
            bits *= 2


class SumRep(SmoothRep):
    """Additive combination of a polynomial and a trigonometric part."""

    __slots__ = ("dim", "poly", "trig")

    def __init__(self, dim: int, poly: Optional[PolyRep] = None,
                 trig: Optional[TrigRep] = None):
        self.dim = dim
        self.poly = poly if poly is not None else PolyRep(dim)
        self.trig = trig if trig is not None else TrigRep(dim)
        if self.poly.dim != dim or self.trig.dim != dim:
            raise DimensionMismatchError("summands must share dim")

    @staticmethod
    def of(f: SmoothRep) -> "SumRep":
        if isinstance(f, SumRep):
            return f
        if isinstance(f, PolyRep):
            return SumRep(f.dim, poly=f)
        return SumRep(f.dim, trig=f)

    @property
    def parts(self) -> Tuple[SmoothRep, ...]:
        out = []
        if not self.poly.is_zero():
            out.append(self.poly)
        if not self.trig.is_zero():
            out.append(self.trig)
        return tuple(out)

    def __eq__(self, other):
        if isinstance(other, SumRep):
            return self.poly == other.poly and self.trig == other.trig
        if isinstance(other, PolyRep):
            return self.trig.is_zero() and self.poly == other
        if isinstance(other, TrigRep):
            return self.poly.is_zero() and self.trig == other
        return NotImplemented

    def __hash__(self):
        return hash((self.poly, self.trig))

    def __repr__(self):
        return f"SumRep(poly={self.poly!r}, trig={self.trig!r})"

    def is_zero(self) -> bool:
        return self.poly.is_zero() and self.trig.is_zero()

    def simplified(self) -> SmoothRep:
        if self.trig.is_zero():
            return self.poly
        if self.poly.is_zero():
            return self.trig
        return self

    def __add__(self, other):
        self._check_dim(other)
        other = SumRep.of(other)
        return SumRep(self.dim, self.poly + other.poly, self.trig + other.trig)

    def __mul__(self, other):
        self._check_dim(other)
        other = SumRep.of(other)
        if (not self.poly.is_zero() and not other.trig.is_zero()) or \
           (not self.trig.is_zero() and not other.poly.is_zero()):
            raise MixedProductError("mixed polynomial*trigonometric product is not representable")
        return SumRep(self.dim, self.poly * other.poly, self.trig * other.trig)

    def scale(self, s) -> "SumRep":
        return SumRep(self.dim, self.poly.scale(Fraction(s)), self.trig.scale(s))

    def diff(self, axis: int) -> "SumRep":
        return SumRep(self.dim, self.poly.diff(axis), self.trig.diff(axis))

    def eval_enclosure(self, x: Sequence, tol=None, bits: int = 64) -> CEnclosure:
        p = CEnclosure.exact(self.poly.eval_exact(x))
        t = self.trig.eval_enclosure(x, tol=tol, bits=bits)
        return CEnclosure(p.re + t.re, p.im + t.im)


AnyRep = Union[PolyRep, TrigRep, SumRep]


def partial_derivative(f: AnyRep, axis: int) -> AnyRep:
    """Exact partial derivative along the given (0-based) coordinate axis."""
    return f.diff(axis)


def evaluate(f: AnyRep, x: Sequence, tol=None) -> CEnclosure:
    """Point evaluation; exact for polynomials, certified enclosure otherwise."""
    return f.eval_enclosure(x, tol=tol)


@dataclass(frozen=True)
class Box:
    """Axis-aligned compact box with rational corner coordinates."""

    lo: RatVec
    hi: RatVec

    def __post_init__(self):
        object.__setattr__(self, "lo", _ratvec(self.lo))
        object.__setattr__(self, "hi", _ratvec(self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("lo/hi length mismatch")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("box requires lo_i <= hi_i")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def widths(self) -> RatVec:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def midpoint(self) -> RatVec:
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))

    @staticmethod
    def cube(dim: int, lo, hi) -> "Box":
        return Box((Fraction(lo),) * dim, (Fraction(hi),) * dim)

    def corners(self) -> Iterator[RatVec]:
        for choice in itertools.product(*[(a, b) for a, b in zip(self.lo, self.hi)]):
            yield choice


def multi_indices(dim: int, max_order: int) -> Iterator[Exponent]:
    """All multi-indices of length `dim` with |I| <= max_order."""
    def rec(d, budget):
        if d == 0:
            yield ()
            return
        for head in range(budget + 1):
            for rest in rec(d - 1, budget - head):
                yield (head,) + rest
    yield from rec(dim, max_order)


def iterated_diff(f: AnyRep, index: Exponent) -> AnyRep:
    g = f
    for axis, order in enumerate(index):
        for _ in range(order):
            g = g.diff(axis)
    return g


def jet(f: AnyRep, x0: Sequence, m: int) -> Dict[Exponent, object]:
    """Partial derivatives at x0 up to order m, keyed by multi-index.

    Values are Fractions for polynomials and CEnclosures otherwise."""
    if m < 0:
        raise ValueError("jet order must be >= 0")
    x0 = _ratvec(x0)
    out: Dict[Exponent, object] = {}
    for index in multi_indices(f.dim, m):
        g = iterated_diff(f, index)
        if isinstance(g, PolyRep):
            out[index] = g.eval_exact(x0)
        else:
            out[index] = g.eval_enclosure(x0)
    return out


# --- certified range bounds -------------------------------------------------

def _poly_to_unit_cube(p: PolyRep, box: Box) -> PolyRep:
    """Substitute x_i = lo_i + w_i t_i, returning the polynomial in t."""
    if p.dim != box.dim:
        raise DimensionMismatchError("box dim != poly dim")
    terms: Dict[Exponent, Fraction] = {}
    w = box.widths
    for e, c in p.terms.items():
        # expand prod_i (lo_i + w_i t_i)^{e_i}
        partial = {(): c}
        for i, k in enumerate(e):
            nxt: Dict[Exponent, Fraction] = {}
            for pref, pc in partial.items():
                for j in range(k + 1):
                    coeff = pc * comb(k, j) * (box.lo[i] ** (k - j)) * (w[i] ** j)
                    if coeff != 0:
                        key = pref + (j,)
                        nxt[key] = nxt.get(key, Fraction(0)) + coeff
            partial = nxt
            if not partial:
                break
        for key, pc in partial.items():
            key = key + (0,) * (p.dim - len(key))
            terms[key] = terms.get(key, Fraction(0)) + pc
    return PolyRep(p.dim, terms)


def _bernstein_coefficients(p: PolyRep) -> Dict[Exponent, Fraction]:
    """Tensor Bernstein coefficients of p on [0,1]^dim at its own degrees."""
    degs = [0] * p.dim
    for e in p.terms:
        for i, k in enumerate(e):
            degs[i] = max(degs[i], k)
    coeffs = dict(p.terms) if p.terms else {(0,) * p.dim: Fraction(0)}
    for axis in range(p.dim):
        d = degs[axis]
        grouped: Dict[Exponent, Dict[int, Fraction]] = {}
        for e, c in coeffs.items():
            rest = e[:axis] + (0,) + e[axis + 1:]
            grouped.setdefault(rest, {})[e[axis]] = c
        coeffs = {}
        for rest, line in grouped.items():
            for j in range(d + 1):
                b = Fraction(0)
                for k, a in line.items():
                    if k <= j:
                        b += Fraction(comb(j, k), comb(d, k)) * a
                # zeros are kept: the min/max below must see every coefficient
                key = rest[:axis] + (j,) + rest[axis + 1:]
                coeffs[key] = b
    return coeffs


def poly_range_bound(p: PolyRep, box: Box) -> Enclosure:
    """Certified bound on the range of p over the box (Bernstein enclosure)."""
    if not p.terms:
        return Enclosure.exact(0)
    q = _poly_to_unit_cube(p, box)
    if not q.terms:
        return Enclosure.exact(0)
    degs = [0] * q.dim
    for e in q.terms:
        for i, k in enumerate(e):
            degs[i] = max(degs[i], k)
    bc = list(_bernstein_coefficients(q).values())
    full = 1
    for d in degs:
        full *= d + 1
    if len(bc) < full:
        bc.append(Fraction(0))  # unrepresented grid slots hold zero coefficients
    return Enclosure(min(bc), max(bc))


def crude_abs_bound(f: AnyRep, box: Box) -> Fraction:
    """Cheap certified upper bound on sup_box |f|."""
    if isinstance(f, PolyRep):
        r = poly_range_bound(f, box)
        return max(abs(r.lo), abs(r.hi))
    if isinstance(f, TrigRep):
        return sum((c.abs_upper() for c in f.modes.values()), Fraction(0))
    return crude_abs_bound(f.poly, box) + crude_abs_bound(f.trig, box)


def _abs_value_at(f: AnyRep, x: RatVec, eval_tol: Fraction) -> Enclosure:
    if isinstance(f, PolyRep):
        return Enclosure.exact(abs(f.eval_exact(x)))
    return f.eval_enclosure(x, tol=eval_tol).abs_enclosure()


def sup_enclosure(f: AnyRep, box: Box, tol, max_points: int = 200_000) -> Enclosure:
    """Certified enclosure of sup over the box of |f|, of width <= tol.

    Grid sampling supplies the lower bound; a certified per-axis Lipschitz
    bound (from range bounds on the gradient) turns grid maxima into an
    upper bound.  The grid is refined until the width meets the tolerance
    or the point budget is exceeded.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if f.dim != box.dim:
        raise DimensionMismatchError("box dim != function dim")
    if isinstance(f, SumRep):
        f = f.simplified()
    if f.is_zero():
        return Enclosure.exact(0)

    eval_tol = tol / 8
    seeds = list(box.corners()) if box.dim <= 6 else []
    seeds.append(box.midpoint)
    lo = max(_abs_value_at(f, x, eval_tol).lo for x in seeds)
    upper = crude_abs_bound(f, box)
    if upper - lo <= tol:
        return Enclosure(lo, upper)

    lips = [crude_abs_bound(f.diff(i), box) for i in range(f.dim)]
    widths = box.widths
    active = [i for i in range(f.dim) if lips[i] * widths[i] > 0]
    if not active:
        # constant along every axis: the midpoint value is the sup
        v = _abs_value_at(f, box.midpoint, eval_tol)
        return Enclosure(max(lo, v.lo), min(upper, v.hi))

    slack_target = tol / 2
    cells = [1] * f.dim
    for i in active:
        cells[i] = max(1, int(ceil(Fraction(len(active)) * lips[i] * widths[i] / slack_target)))
    total = 1
    for c in cells:
        total *= c
    if total > max_points:
        raise BudgetExceededError(
            f"sup_enclosure needs {total} grid cells for tol {tol}; budget {max_points}")

    axes_points = [
        [box.lo[i] + widths[i] * Fraction(2 * j + 1, 2 * cells[i]) for j in range(cells[i])]
        for i in range(f.dim)
    ]
    slack = sum(lips[i] * widths[i] / (2 * cells[i]) for i in range(f.dim))
    grid_lo = lo
    grid_hi = Fraction(0)
    for x in itertools.product(*axes_points):
        v = _abs_value_at(f, x, eval_tol)
        grid_lo = max(grid_lo, v.lo)
        grid_hi = max(grid_hi, v.hi)
    hi = min(upper, grid_hi + slack)
    hi = max(hi, grid_lo)
    return Enclosure(grid_lo, hi)
