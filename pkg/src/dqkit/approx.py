"""Polynomial approximation: Bernstein operators, quantization of classical
polynomials with star-word witnesses, and the quantum Weierstrass procedure.

Quantization rewrites a classical polynomial as a sum of scaled hbar-powers
of star-words in the coordinate functions; the rewriting recursion terminates
because every remainder has strictly smaller polynomial degree.  The density
procedure approximates each hbar slice by a polynomial whose derivative sups
are certified below the threshold 1/((N+2) 2^(N+1)), quantizes the slices,
and certifies the compact distance to the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .coeffring import (AnyRep, Box, CEnclosure, PolyRep, SumRep, TrigRep,
                        evaluate, iterated_diff, jet, multi_indices,
                        sup_enclosure)
from .formal import FormalFunction
from .intervals import BudgetExceededError, Enclosure
from .star import SymplecticStructure, moyal

WitnessEntry = Tuple[int, Fraction, Tuple[int, ...]]

_SAMPLE_TOL = Fraction(1, 2 ** 80)


def _real_sample(f: AnyRep, x: Sequence[Fraction]) -> Fraction:
    if isinstance(f, PolyRep):
        return f.eval_exact(list(x))
    v: CEnclosure = evaluate(f, list(x), tol=_SAMPLE_TOL)
    return v.re.mid


def _shifted_power(dim: int, axis: int, x0: Fraction, scale: Fraction, j: int) -> PolyRep:
    """((x_axis - x0) * scale)^j as an exact polynomial."""
    base = (PolyRep.coordinate(dim, axis)
            + PolyRep.constant(dim, -x0)).scale(scale)
    out = PolyRep.constant(dim, Fraction(1))
    for _ in range(j):
        out = out * base
    return out


def bernstein(f: AnyRep, nu: int, K: Box) -> PolyRep:
    """Tensor-product Bernstein polynomial of f over the box K.

    Samples on the lattice (k/nu per axis) are exact for polynomial input and
    certified midpoints (width below 2^-80) for transcendental input; the
    approximation quality of the returned polynomial is certified downstream
    by taking suprema of the realized difference f - B.
    """
    if nu < 1:
        raise ValueError("Bernstein degree must be >= 1")
    d = f.dim
    widths = K.widths
    # mixed forward differences of the sample grid, one axis at a time
    grid: Dict[Tuple[int, ...], Fraction] = {}
    ranges = [range(nu + 1)] * d
    idxs: List[Tuple[int, ...]] = [()]
    for r in ranges:
        idxs = [t + (j,) for t in idxs for j in r]
    for t in idxs:
        x = [K.lo[i] + widths[i] * Fraction(t[i], nu) for i in range(d)]
        grid[t] = _real_sample(f, x)
    for axis in range(d):
        # replace grid values along this axis by forward differences
        new: Dict[Tuple[int, ...], Fraction] = {}
        for t in idxs:
            j = t[axis]
            acc = Fraction(0)
            for s in range(j + 1):
                ts = t[:axis] + (s,) + t[axis + 1:]
                acc += Fraction((-1) ** (j - s) * comb(j, s)) * grid[ts]
            new[t] = acc
        grid = new
    # B(x) = sum_t prod_i C(nu, t_i) * Delta^t s * prod_i u_i^{t_i},
    # u_i = (x_i - lo_i)/w_i
    out = PolyRep.constant(d, Fraction(0))
    power_cache: Dict[Tuple[int, int], PolyRep] = {}
    for t, dv in grid.items():
        if dv == 0:
            continue
        c = dv * Fraction(1)
        for i in range(d):
            c *= comb(nu, t[i])
        mono = PolyRep.constant(d, c)
        for i in range(d):
            if t[i] == 0:
                continue
            key = (i, t[i])
            if key not in power_cache:
                power_cache[key] = _shifted_power(d, i, K.lo[i],
                                                  1 / widths[i], t[i])
            mono = mono * power_cache[key]
        out = out + mono
    return out


@dataclass(frozen=True)
class QuantumPolynomial:
    """A star-algebra element with an explicit star-word witness."""
    value: FormalFunction
    witness: Tuple[WitnessEntry, ...]

    def dim(self) -> int:
        return self.value.dim


class _WordEvaluator:
    """Star-evaluates coordinate words with prefix memoization."""

    def __init__(self, dim: int, N: int, S: SymplecticStructure):
        self.dim = dim
        self.N = N
        self.S = S
        self.cache: Dict[Tuple[int, ...], FormalFunction] = {
            (): FormalFunction.constant(dim, Fraction(1), N)}

    def eval(self, word: Tuple[int, ...]) -> FormalFunction:
        if word in self.cache:
            return self.cache[word]
        prefix = self.eval(word[:-1])
        out = moyal(prefix, FormalFunction.coordinate(self.dim, word[-1], self.N),
                    self.S)
        self.cache[word] = out
        return out


def evaluate_witness(witness: Sequence[WitnessEntry], dim: int, N: int,
                     S: SymplecticStructure) -> FormalFunction:
    """Star-evaluate sum_a scalar * hbar^a * x^{w_1} * ... * x^{w_m}."""
    ev = _WordEvaluator(dim, N, S)
    total = FormalFunction.constant(dim, Fraction(0), N)
    for a, scalar, word in witness:
        if a > N:
            continue
        total = total + ev.eval(tuple(word)).scale(scalar).hbar_shift(a)
    return total


def classical_to_quantum(p: PolyRep, S: SymplecticStructure, N: int) -> QuantumPolynomial:
    """Write p as a quantum polynomial, exactly mod hbar^(N+1).

    Each monomial is matched by the star-word of its letters; the mismatch is
    a remainder at higher hbar powers with strictly smaller degree, which is
    quantized recursively.
    """
    dim = p.dim
    ev = _WordEvaluator(dim, N, S)
    witness: List[WitnessEntry] = []
    pending: Dict[int, PolyRep] = {0: p}
    while pending:
        a = min(pending)
        q = pending.pop(a)
        if q.is_zero() or a > N:
            continue
        for exp, c in sorted(q.terms.items()):
            word = tuple(i for i in range(dim) for _ in range(exp[i]))
            witness.append((a, c, word))
            if not word:
                continue
            w_val = ev.eval(word)
            # remainder: the star-word minus the plain monomial, at hbar >= 1
            for t in range(1, w_val.N + 1):
                slice_t = w_val.coeffs[t]
                if slice_t.is_zero() or a + t > N:
                    continue
                neg = slice_t.scale(-c)
                if a + t in pending:
                    pending[a + t] = pending[a + t] + neg
                else:
                    pending[a + t] = neg
    value = FormalFunction.of(p, N)
    return QuantumPolynomial(value, tuple(witness))


def _classical_slice(c: AnyRep) -> Optional[PolyRep]:
    if isinstance(c, PolyRep):
        return c
    if isinstance(c, SumRep) and c.trig.is_zero():
        return c.poly
    return None


def _taylor_polynomial(f: AnyRep, K: Box, deg: int) -> PolyRep:
    """Degree-deg Taylor polynomial at the box midpoint, rational midpoints."""
    x0 = K.midpoint
    jets = jet(f, x0, deg)
    dim = f.dim
    out = PolyRep.constant(dim, Fraction(0))
    power_cache: Dict[Tuple[int, int], PolyRep] = {}
    for I, v in jets.items():
        if isinstance(v, CEnclosure):
            coeff = v.re.mid
        else:
            coeff = Fraction(v)
        for e in I:
            coeff /= factorial(e)
        if coeff == 0:
            continue
        mono = PolyRep.constant(dim, coeff)
        for i, e in enumerate(I):
            if e == 0:
                continue
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = _shifted_power(dim, i, x0[i], Fraction(1), e)
            mono = mono * power_cache[key]
        out = out + mono
    return out


def _trig_taylor_with_bounds(g: TrigRep, K: Box, deg: int,
                             max_order: int) -> Tuple[PolyRep, List[Fraction]]:
    """Taylor polynomial of g at the box midpoint with certified sup bounds.

    Returns (T, B) where B[j] certifies sup_K |d^I (g - T)| <= B[j] for every
    multi-index I with |I| = j <= max_order.  The bound is the Lagrange
    remainder M_{deg+1} r^{deg+1-j} / (deg+1-j)! with M_m an exact derivative
    bound from the Fourier coefficients, plus the rounding error of storing
    rational-midpoint Taylor coefficients.
    """
    if deg <= max_order:
        raise ValueError("Taylor degree must exceed the derivative order")
    dim = g.dim
    x0 = K.midpoint
    half = [w / 2 for w in K.widths]
    r = sum(half, Fraction(0))
    # |d^I g| <= sum_modes |c| * (max_i |k_i|)^{|I|}
    def deriv_bound(order: int) -> Fraction:
        total = Fraction(0)
        for k, c in g.modes.items():
            km = max((abs(v) for v in k), default=0)
            total += c.abs_upper() * Fraction(km) ** order
        return total

    jets = jet(g, list(x0), deg)
    out = PolyRep.constant(dim, Fraction(0))
    rounding: Dict[Tuple[int, ...], Fraction] = {}
    power_cache: Dict[Tuple[int, int], PolyRep] = {}
    for I, v in jets.items():
        ifact = 1
        for e in I:
            ifact *= factorial(e)
        if isinstance(v, CEnclosure):
            coeff = v.re.mid / ifact
            err = (v.re.width / 2
                   + max(abs(v.im.lo), abs(v.im.hi))) / ifact
        else:
            coeff = Fraction(v) / ifact
            err = Fraction(0)
        if err:
            rounding[I] = err
        if coeff == 0:
            continue
        mono = PolyRep.constant(dim, coeff)
        for i, e in enumerate(I):
            if e == 0:
                continue
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = _shifted_power(dim, i, x0[i], Fraction(1), e)
            mono = mono * power_cache[key]
        out = out + mono
    M = deriv_bound(deg + 1)
    bounds: List[Fraction] = []
    for j in range(max_order + 1):
        rem = M * r ** (deg + 1 - j) / factorial(deg + 1 - j)
        # rounding: sup |d^J of err_I (x-x0)^I| <= err_I * prod falling * r^(I-J),
        # coarsened by |J| <= j over each monomial
        rnd = Fraction(0)
        for I, err in rounding.items():
            tot = sum(I)
            if tot < j:
                continue
            fall = 1
            for t in range(j):
                fall *= tot - t
            rnd += err * fall * (max(r, Fraction(1))) ** (tot - j)
        bounds.append(rem + rnd)
    return out, bounds


def _certify_below(diff: AnyRep, K: Box, max_order: int, threshold: Fraction) -> bool:
    """Certified check that sup_K |d^I diff| < threshold for all |I| <= max_order."""
    tol = threshold / 4
    for I in multi_indices(diff.dim, max_order):
        d = iterated_diff(diff, I)
        if d.is_zero():
            continue
        s = sup_enclosure(d, K, tol)
        if not s.hi < threshold:
            return False
    return True


def _approximate_slice(c: AnyRep, K: Box, N: int,
                       degree_budget: int = 64) -> Tuple[PolyRep, List[Fraction]]:
    """A polynomial within the proof threshold of c in all order <= N+1 sups.

    Returns the polynomial and certified per-order sup bounds B[0..N+1] on the
    derivatives of the difference.
    """
    zeros = [Fraction(0)] * (N + 2)
    p = _classical_slice(c)
    if p is not None:
        return p, zeros
    trig = c.trig if isinstance(c, SumRep) else c
    base = c.poly if isinstance(c, SumRep) else PolyRep.constant(c.dim, Fraction(0))
    threshold = Fraction(1, (N + 2) * 2 ** (N + 1))
    deg = max(4, N + 2)
    while deg <= degree_budget:
        cand, bounds = _trig_taylor_with_bounds(trig, K, deg, N + 1)
        if max(bounds) < threshold:
            return base + cand, bounds
        deg *= 2
    raise BudgetExceededError(
        f"no polynomial certified below the order-{N} threshold "
        f"within degree budget {degree_budget}")


def quantum_weierstrass(f: FormalFunction, K: Box, N: int,
                        S: SymplecticStructure) -> Tuple[QuantumPolynomial, Enclosure]:
    """Quantum polynomial p with a certified bound on d_K(f, p.value).

    Every hbar slice of f up to order N+1 is approximated within the proof
    threshold 1/((N+2) 2^(N+1)) in all derivative sups of order <= N+1, then
    quantized.  The returned enclosure bounds the compact distance: the upper
    end sums the certified per-slice sup bounds through the metric terms and
    adds the exact series tail 2^-(N+1).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    slices: List[PolyRep] = []
    slice_bounds: List[List[Fraction]] = []
    top = min(N + 1, f.N)
    for m in range(top + 1):
        pm, bm = _approximate_slice(f.coeffs[m], K, N)
        slices.append(pm)
        slice_bounds.append(bm)
    value_coeffs: List[AnyRep] = [
        slices[m] if m <= top else PolyRep.constant(f.dim, Fraction(0))
        for m in range(f.N + 1)]
    witness: List[WitnessEntry] = []
    for m, pm in enumerate(slices):
        if pm.is_zero():
            continue
        qp = classical_to_quantum(pm, S, f.N - m)
        witness.extend((a + m, c, w) for a, c, w in qp.witness)
    value = FormalFunction(value_coeffs, f.N)
    # ||f - p||_{hbar,k} = sum_{i+j=k} ||f_i - p_i||_j <= sum_i B_i[k-i]
    hi = Fraction(0)
    for k in range(N + 2):
        u = Fraction(0)
        for i in range(min(k, top) + 1):
            u += slice_bounds[i][k - i]
        hi += Fraction(1, 2 ** k) * u / (1 + u)
    hi += Fraction(1, 2 ** (N + 1))
    return QuantumPolynomial(value, tuple(witness)), Enclosure(Fraction(0), hi)
