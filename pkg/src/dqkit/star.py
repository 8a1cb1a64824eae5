"""The Moyal-Weyl star product on a flat Darboux chart or torus.

Star products are computed as finite bidifferential expansions: the order-k
term applies the biderivation sum_ij w^{ij} d_i (x) d_j k times with the
prefactor 1/(2^k k!).  Everything is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .coeffring import AnyRep, DimensionMismatchError, Exponent, iterated_diff
from .formal import FormalFunction

Matrix = Tuple[Tuple[Fraction, ...], ...]


def _to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def invert_matrix(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination; raises on singular input."""
    d = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(d)]
           for i, row in enumerate(m)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[d:]) for row in aug)


class SymplecticStructure:
    """Constant symplectic form w_ij with its exact inverse w^ij."""

    def __init__(self, omega_lower: Sequence[Sequence]):
        m = _to_matrix(omega_lower)
        d = len(m)
        if d == 0 or d % 2 != 0 or any(len(r) != d for r in m):
            raise ValueError("omega must be a square 2n x 2n matrix")
        for i in range(d):
            for j in range(d):
                if m[i][j] != -m[j][i]:
                    raise ValueError("omega must be antisymmetric")
        self.n = d // 2
        self.omega_lower = m
        self.omega_upper = invert_matrix(m)
        self._upper_entries = tuple(
            (i, j, self.omega_upper[i][j])
            for i in range(d) for j in range(d)
            if self.omega_upper[i][j] != 0
        )
        self._lower_entries = tuple(
            (i, j, self.omega_lower[i][j])
            for i in range(d) for j in range(d)
            if self.omega_lower[i][j] != 0
        )

    @property
    def dim(self) -> int:
        return 2 * self.n

    @staticmethod
    def standard(n: int) -> "SymplecticStructure":
        """Block form sum_i dx^{2i-1} ^ dx^{2i}."""
        d = 2 * n
        rows = [[Fraction(0)] * d for _ in range(d)]
        for i in range(n):
            rows[2 * i][2 * i + 1] = Fraction(1)
            rows[2 * i + 1][2 * i] = Fraction(-1)
        return SymplecticStructure(rows)

    def check_inverse(self) -> bool:
        d = self.dim
        for i in range(d):
            for j in range(d):
                s = sum(self.omega_upper[i][k] * self.omega_lower[k][j]
                        for k in range(d))
                if s != (1 if i == j else 0):
                    return False
        return True


def _check_dims(f: AnyRep, g: AnyRep, S: SymplecticStructure):
    if f.dim != g.dim or f.dim != S.dim:
        raise DimensionMismatchError(
            f"dims must agree: f={f.dim}, g={g.dim}, omega={S.dim}")


def poisson(f: AnyRep, g: AnyRep, S: SymplecticStructure) -> AnyRep:
    """Poisson bracket w^{ij} d_i f d_j g, exact."""
    _check_dims(f, g, S)
    acc = None
    for i, j, w in S._upper_entries:
        term = (f.diff(i) * g.diff(j)).scale(w)
        acc = term if acc is None else acc + term
    return acc if acc is not None else f.scale(0)


def _bidiff_states(dim: int, S: SymplecticStructure, k: int) -> Dict[Tuple[Exponent, Exponent], Fraction]:
    """k-fold application of sum_ij w^{ij} d_i (x) d_j as multi-index weights."""
    zero = (0,) * dim
    states: Dict[Tuple[Exponent, Exponent], Fraction] = {(zero, zero): Fraction(1)}
    for _ in range(k):
        nxt: Dict[Tuple[Exponent, Exponent], Fraction] = {}
        for (I, J), c in states.items():
            for i, j, w in S._upper_entries:
                NI = I[:i] + (I[i] + 1,) + I[i + 1:]
                NJ = J[:j] + (J[j] + 1,) + J[j + 1:]
                key = (NI, NJ)
                nxt[key] = nxt.get(key, Fraction(0)) + c * w
        states = nxt
    return states


def moyal_component(f: AnyRep, g: AnyRep, k: int, S: SymplecticStructure) -> AnyRep:
    """The order-k bidifferential term C_k(f, g) of the Moyal-Weyl product."""
    if k < 0:
        raise ValueError("order must be >= 0")
    _check_dims(f, g, S)
    if k == 0:
        return f * g
    pref = Fraction(1, 2 ** k * factorial(k))
    df_cache: Dict[Exponent, AnyRep] = {}
    dg_cache: Dict[Exponent, AnyRep] = {}
    acc = None
    for (I, J), c in _bidiff_states(f.dim, S, k).items():
        if I not in df_cache:
            df_cache[I] = iterated_diff(f, I)
        if df_cache[I].is_zero():
            continue
        if J not in dg_cache:
            dg_cache[J] = iterated_diff(g, J)
        if dg_cache[J].is_zero():
            continue
        term = (df_cache[I] * dg_cache[J]).scale(c * pref)
        acc = term if acc is None else acc + term
    return acc if acc is not None else f.scale(0)


def moyal(f: FormalFunction, g: FormalFunction, S: SymplecticStructure) -> FormalFunction:
    """Moyal-Weyl star product of formal functions, exact mod hbar^(N+1)."""
    if f.dim != g.dim or f.dim != S.dim:
        raise DimensionMismatchError("dims must agree")
    N = min(f.N, g.N)
    out: List[AnyRep] = []
    for m in range(N + 1):
        acc = None
        for m1 in range(m + 1):
            if f.coeffs[m1].is_zero():
                continue
            for m2 in range(m - m1 + 1):
                if g.coeffs[m2].is_zero():
                    continue
                m3 = m - m1 - m2
                term = moyal_component(f.coeffs[m1], g.coeffs[m2], m3, S)
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else f.coeffs[0].scale(0))
    return FormalFunction(out, N)


def commutator(f: FormalFunction, g: FormalFunction, S: SymplecticStructure) -> FormalFunction:
    """f*g - g*f; its hbar^1 coefficient is the Poisson bracket."""
    return moyal(f, g, S) - moyal(g, f, S)
