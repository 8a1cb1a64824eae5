"""Fedosov connections on the Weyl bundle and the flat-section recursion.

The connection is D = nabla - delta + (1/hbar)[I, -].  On a Darboux chart
nabla is the de Rham differential d; an optional symmetric Christoffel datum
acts through its quadratic generator, and an optional correction 1-form I
(weight >= 3) acts by the graded bracket.  Flat sections are built weight by
weight:  (O_f)_m = (f)_m + delta_inv(nabla (O_f)_{m-1}
                                     + (1/hbar)[I, (O_f)_{<=m-2}])_{m-1}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .coeffring import (AnyRep, DimensionMismatchError, PolyRep, SumRep,
                        TrigRep, evaluate)
from .formal import FormalFunction
from .star import SymplecticStructure
from .weyl import (Key, WeylElement, bracket_over_hbar, delta, delta_inv,
                   fiberwise_moyal, symbol)


class InvalidCorrectionError(Exception):
    """The supplied correction term violates its structural invariants."""


def exterior_derivative(a: WeylElement) -> WeylElement:
    """Coordinate de Rham differential on the chart coefficients."""
    acc: Dict[Key, AnyRep] = {}
    out = WeylElement.zero(a.dim, a.W)
    for (k, I, J), c in a.terms.items():
        for i in range(a.dim):
            if i in J:
                continue
            dc = c.diff(i)
            if dc.is_zero():
                continue
            sign = (-1) ** sum(1 for j in J if j < i)
            NJ = tuple(sorted(J + (i,)))
            out._accumulate(acc, (k, I, NJ), dc.scale(Fraction(sign)))
    return WeylElement(a.dim, a.W, acc)


class FedosovData:
    """Connection data: symplectic structure, nabla, optional correction I."""

    def __init__(self, S: SymplecticStructure,
                 christoffel: Optional[Sequence[Sequence[Sequence[AnyRep]]]] = None,
                 correction: Optional[WeylElement] = None):
        self.S = S
        self.christoffel = None
        if christoffel is not None:
            d = S.dim
            if len(christoffel) != d or any(
                    len(christoffel[k]) != d or len(christoffel[k][i]) != d
                    for k in range(d) for i in range(d)):
                raise ValueError("christoffel must be a dim^3 array")
            for k in range(d):
                for i in range(d):
                    for j in range(d):
                        diff = christoffel[k][i][j] + christoffel[k][j][i].scale(Fraction(-1))
                        if not diff.is_zero():
                            raise ValueError(
                                "christoffel symbols must be symmetric in the lower indices")
            self.christoffel = tuple(tuple(tuple(row) for row in plane)
                                     for plane in christoffel)
        self.correction = None
        if correction is not None:
            if correction.dim != S.dim:
                raise DimensionMismatchError("correction dim mismatch")
            for (k, I, J), c in correction.terms.items():
                if len(J) != 1:
                    raise InvalidCorrectionError("correction must be a 1-form")
                if 2 * k + sum(I) < 3:
                    raise InvalidCorrectionError("correction terms must have weight >= 3")
            self.correction = correction

    @property
    def is_flat_connection(self) -> bool:
        return self.christoffel is None and self.correction is None

    @staticmethod
    def flat(S: SymplecticStructure) -> "FedosovData":
        return FedosovData(S)

    def _gamma_tilde(self, W: int) -> Optional[WeylElement]:
        """Quadratic generator (1/2) w_kl Gamma^l_ij y^k y^j dx^i."""
        if self.christoffel is None:
            return None
        d = self.S.dim
        acc = WeylElement.zero(d, W)
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    coeff = None
                    for l in range(d):
                        w = self.S.omega_lower[k][l]
                        if w == 0:
                            continue
                        term = self.christoffel[l][i][j].scale(w / 2)
                        coeff = term if coeff is None else coeff + term
                    if coeff is None or coeff.is_zero():
                        continue
                    I = [0] * d
                    I[k] += 1
                    I[j] += 1
                    acc = acc + WeylElement.monomial(coeff, W, 0, tuple(I), (i,))
        return acc

    def nabla(self, a: WeylElement) -> WeylElement:
        out = exterior_derivative(a)
        gt = self._gamma_tilde(a.W)
        if gt is not None:
            out = out + bracket_over_hbar(gt, a, self.S)
        return out


def covariant_derivative(a: WeylElement, F: FedosovData) -> WeylElement:
    """D(a) = nabla(a) - delta(a) + (1/hbar)[I, a]."""
    out = F.nabla(a) - delta(a)
    if F.correction is not None:
        out = out + bracket_over_hbar(F.correction.with_cap(a.W), a, F.S)
    return out


def flat_section(f: FormalFunction, F: FedosovData, W: int) -> WeylElement:
    """The D-flat section with symbol f, computed up to weight W."""
    if f.dim != F.S.dim:
        raise DimensionMismatchError("dim mismatch")
    central = WeylElement.from_formal(f, W)
    comps: List[WeylElement] = [central.weight_component(0)]
    brackets: List[WeylElement] = []
    for m in range(1, W + 1):
        prev = comps[m - 1]
        if F.correction is not None and m >= 2:
            brackets.append(
                bracket_over_hbar(F.correction.with_cap(W),
                                  comps[m - 2], F.S))
        source = F.nabla(prev)
        for br in brackets:
            source = source + br.weight_component(min(m - 1, W))
        comps.append(central.weight_component(m)
                     + delta_inv(source.weight_component(m - 1)))
    total = WeylElement.zero(f.dim, W)
    for c in comps:
        total = total + c
    return total


def check_flat(O: WeylElement, F: FedosovData) -> WeylElement:
    """The flatness defect D(O); zero certifies flatness mod the cap."""
    return covariant_derivative(O, F)


def _poly_degree(f: FormalFunction) -> Optional[int]:
    deg = 0
    for c in f.coeffs:
        if isinstance(c, PolyRep):
            deg = max(deg, c.degree())
        elif isinstance(c, SumRep) and c.trig.is_zero():
            deg = max(deg, c.poly.degree())
        elif not c.is_zero():
            return None
    return deg


def star_via_flat_sections(f: FormalFunction, g: FormalFunction,
                           F: FedosovData, W: Optional[int] = None) -> FormalFunction:
    """symbol(O_f *_MW O_g), the global star product induced by D."""
    N = min(f.N, g.N)
    df, dg = _poly_degree(f), _poly_degree(g)
    if df is not None and dg is not None:
        needed = 2 * N + df + dg
        if W is None:
            W = needed
        elif W < needed:
            warnings.warn(
                f"weight cap {W} below {needed}; symbol terms may be dropped",
                RuntimeWarning)
    elif W is None:
        raise ValueError("a weight cap W is required for non-polynomial input")
    else:
        warnings.warn(
            "non-polynomial input: symbol is exact only modulo the weight cap",
            RuntimeWarning)
    Of = flat_section(f, F, W)
    Og = flat_section(g, F, W)
    s = symbol(fiberwise_moyal(Of, Og, F.S))
    return s.truncate(min(N, s.N))


@dataclass(frozen=True)
class QuantizabilityResult:
    quantizable: bool
    weight: Optional[int]
    checked_up_to: int


def is_quantizable(f: FormalFunction, F: FedosovData, W_max: int) -> QuantizabilityResult:
    """Decide whether O_f has bounded weight, certifiably for polynomial data.

    A "yes" needs polynomial coefficients (where the recursion provably
    stabilizes once two consecutive weight components vanish); otherwise a
    finite computation can only report absence of vanishing up to W_max.
    """
    O = flat_section(f, F, W_max)
    nonzero = [m for m in range(W_max + 1)
               if not O.weight_component(m).is_zero()]
    top = max(nonzero, default=0)
    certifiable = _poly_degree(f) is not None
    if certifiable and W_max >= top + 2:
        return QuantizabilityResult(True, top, W_max)
    return QuantizabilityResult(False, None, W_max)


def _component_values(O: WeylElement, m: int, x0: Sequence):
    comp = O.weight_component(m)
    return {key: evaluate(c, x0) for key, c in comp.terms.items()}


def jet_locality_test(f: FormalFunction, x0: Sequence, m: int, F: FedosovData,
                      perturbation: Optional[AnyRep] = None, W: Optional[int] = None) -> bool:
    """Check that (O_f)_m at x0 ignores perturbations vanishing to order m+1.

    The default perturbation is sum_i (x^i - x0^i)^(m+1), added to the hbar^0
    slice of f.  Values are compared exactly for polynomial coefficients and
    at enclosure level otherwise.
    """
    dim = f.dim
    x0 = [Fraction(v) for v in x0]
    if perturbation is None:
        acc = PolyRep.constant(dim, Fraction(0))
        for i in range(dim):
            shift = PolyRep.coordinate(dim, i) + PolyRep.constant(dim, -x0[i])
            pw = PolyRep.constant(dim, Fraction(1))
            for _ in range(m + 1):
                pw = pw * shift
            acc = acc + pw
        perturbation = acc
    if W is None:
        W = m + (_poly_degree(f) or 0) + m + 1
    g_coeffs = list(f.coeffs)
    g_coeffs[0] = g_coeffs[0] + perturbation
    g = FormalFunction(g_coeffs, f.N)
    va = _component_values(flat_section(f, F, W), m, x0)
    vb = _component_values(flat_section(g, F, W), m, x0)
    keys = set(va) | set(vb)
    for key in keys:
        a = va.get(key)
        b = vb.get(key)
        az = a is None or (a.re.lo == a.re.hi == 0 and a.im.lo == a.im.hi == 0)
        bz = b is None or (b.re.lo == b.re.hi == 0 and b.im.lo == b.im.hi == 0)
        if a is None or b is None:
            if not (az and bz):
                return False
            continue
        if not (a.re.intersects(b.re) and a.im.intersects(b.im)):
            return False
        if a.re.lo == a.re.hi and b.re.lo == b.re.hi and a.re.lo != b.re.lo:
            return False
        if a.im.lo == a.im.hi and b.im.lo == b.im.hi and a.im.lo != b.im.lo:
            return False
    return True
