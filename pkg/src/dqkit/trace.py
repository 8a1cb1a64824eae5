"""The renormalized trace on the 2n-torus with the Moyal product.

For translation-invariant omega the unique trace is integration: coefficient
l of the renormalized trace is int f_l omega^n, which equals the top wedge
coefficient of omega^n times (2pi)^(2n) times the zero Fourier mode of f_l.
Values keep (2pi)^(2n) symbolic; only semi-norm comparisons expand it to a
certified enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .coeffring import SumRep, TrigRep
from .formal import FormalFunction, TruncationError
from .frechet import Atlas, DEFAULT_TOL, formal_seminorm
from .intervals import Enclosure, QQi, emax, pi_enclosure
from .star import SymplecticStructure, moyal


class NonTrigCoefficientError(Exception):
    """Trace input must have trigonometric-polynomial coefficients."""


def symplectic_volume_factor(S: SymplecticStructure) -> Fraction:
    """Coefficient c with omega^n = c dx^1 ^ ... ^ dx^2n, by exact expansion."""
    d = S.dim
    # forms as {sorted index tuple: coefficient}; omega = sum_{i<j} w_ij dx^i dx^j
    omega: Dict[Tuple[int, ...], Fraction] = {}
    for i in range(d):
        for j in range(i + 1, d):
            w = S.omega_lower[i][j]
            if w:
                omega[(i, j)] = w
    power: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
    for _ in range(S.n):
        nxt: Dict[Tuple[int, ...], Fraction] = {}
        for J1, c1 in power.items():
            for J2, c2 in omega.items():
                merged = J1 + J2
                if len(set(merged)) != len(merged):
                    continue
                sign = 1
                items = list(merged)
                for a in range(len(items)):
                    for b in range(a + 1, len(items)):
                        if items[a] > items[b]:
                            sign = -sign
                key = tuple(sorted(items))
                nxt[key] = nxt.get(key, Fraction(0)) + sign * c1 * c2
        power = nxt
    return power.get(tuple(range(d)), Fraction(0))


@dataclass(frozen=True)
class TraceValue:
    """A truncated scalar hbar-series of rational multiples of (2pi)^twopi_pow."""

    coeffs: Tuple[QQi, ...]
    twopi_pow: int

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "TraceValue") -> "TraceValue":
        if self.twopi_pow != other.twopi_pow:
            raise ValueError("mismatched symbolic (2pi) powers")
        n = min(self.N, other.N)
        return TraceValue(tuple(self.coeffs[k] + other.coeffs[k]
                                for k in range(n + 1)), self.twopi_pow)

    def scale(self, s) -> "TraceValue":
        s = QQi.of(s)
        return TraceValue(tuple(c * s for c in self.coeffs), self.twopi_pow)


def _trig_coefficient(c, m: int) -> TrigRep:
    if isinstance(c, TrigRep):
        return c
    if isinstance(c, SumRep) and c.poly.is_zero():
        return c.trig
    if c.is_zero():
        return TrigRep(c.dim)
    raise NonTrigCoefficientError(
        f"hbar^{m} coefficient is not a trigonometric polynomial")


def renormalized_trace(f: FormalFunction, S: SymplecticStructure, n: int) -> TraceValue:
    """Coefficient l is int f_l omega^n, exactly."""
    if S.n != n or f.dim != 2 * n:
        raise ValueError("expected f on the 2n-torus matching omega")
    c_top = symplectic_volume_factor(S)
    coeffs: List[QQi] = []
    for m, cm in enumerate(f.coeffs):
        zm = _trig_coefficient(cm, m).zero_mode()
        coeffs.append(zm * QQi.of(c_top))
    return TraceValue(tuple(coeffs), 2 * n)


def cyclicity_defect(f: FormalFunction, g: FormalFunction,
                     S: SymplecticStructure, n: int) -> TraceValue:
    """renormalized_trace(f*g - g*f); identically zero mod hbar^(N+1)."""
    comm = moyal(f, g, S) - moyal(g, f, S)
    return renormalized_trace(comm, S, n)


def _twopi_power_enclosure(p: int, bits: int = 96) -> Enclosure:
    tp = pi_enclosure(bits).scaled(Fraction(2))
    out = Enclosure.exact(1)
    for _ in range(p):
        out = out * tp
    return out


def scalar_trace_seminorm(t: TraceValue, l: int) -> Enclosure:
    """max_{k<=l} |t_k|, with the symbolic (2pi) power expanded."""
    if l > t.N:
        raise TruncationError(f"index {l} beyond truncation {t.N}")
    vals = [t.coeffs[k].abs_enclosure() for k in range(l + 1)]
    return emax(vals) * _twopi_power_enclosure(t.twopi_pow)


def trace_continuity_check(f: FormalFunction, l: int, A: Atlas,
                           tol=DEFAULT_TOL):
    """Check |coefficient_l of the trace| <= Vol * ||f||_{hbar,l}.

    Vol = c_top (2pi)^(2n) is the symplectic volume; the check is at
    enclosure level.  Returns (holds, lhs, rhs).
    """
    if A.manifold != "torus":
        raise ValueError("trace continuity is a torus statement")
    n = f.dim // 2
    S = SymplecticStructure.standard(n)
    t = renormalized_trace(f, S, n)
    if l > t.N:
        raise TruncationError(f"index {l} beyond truncation {t.N}")
    vol_sym = abs(symplectic_volume_factor(S))
    twopi = _twopi_power_enclosure(2 * n)
    lhs = t.coeffs[l].abs_enclosure() * twopi
    rhs = formal_seminorm(f, l, A, tol).scaled(vol_sym) * twopi
    holds = lhs.lo <= rhs.hi
    return holds, lhs, rhs
