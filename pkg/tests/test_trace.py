from fractions import Fraction
from math import factorial

import pytest

from dqkit import (Atlas, FormalFunction, NonTrigCoefficientError,
                   QQi, SymplecticStructure, TrigRep, cyclicity_defect,
                   renormalized_trace, scalar_trace_seminorm,
                   symplectic_volume_factor, trace_continuity_check)

from conftest import random_trig

S1 = SymplecticStructure.standard(1)
S2 = SymplecticStructure.standard(2)


def test_volume_factor_standard():
    # the top wedge power of the standard omega is n! dx^1...dx^2n
    assert abs(symplectic_volume_factor(S1)) == 1
    assert abs(symplectic_volume_factor(S2)) == factorial(2)


def test_trace_of_constant_is_volume():
    f = FormalFunction.of(TrigRep(2, {(0, 0): QQi.of(Fraction(3))}), 2)
    t = renormalized_trace(f, S1, 1)
    assert t.twopi_pow == 2
    assert t.coeffs[0] == QQi.of(Fraction(3) * symplectic_volume_factor(S1))


def test_trace_keeps_only_zero_mode():
    f = FormalFunction.of(
        TrigRep(2, {(1, 0): QQi(Fraction(1), Fraction(0)),
                    (0, 0): QQi(Fraction(5), Fraction(0))}), 1)
    t = renormalized_trace(f, S1, 1)
    assert t.coeffs[0] == QQi.of(Fraction(5) * symplectic_volume_factor(S1))


def test_nonconstant_polynomial_rejected():
    f = FormalFunction.coordinate(2, 0, 1)
    with pytest.raises(NonTrigCoefficientError):
        renormalized_trace(f, S1, 1)


def test_cyclicity_exact_zero(rng):
    for _ in range(10):
        f = FormalFunction.of(random_trig(rng, 2, 2), 3)
        g = FormalFunction.of(random_trig(rng, 2, 2), 3)
        assert cyclicity_defect(f, g, S1, 1).is_zero()


def test_trace_is_linear(rng):
    f = FormalFunction.of(random_trig(rng, 2, 2), 2)
    g = FormalFunction.of(random_trig(rng, 2, 2), 2)
    lhs = renormalized_trace(f + g, S1, 1)
    rhs = renormalized_trace(f, S1, 1) + renormalized_trace(g, S1, 1)
    assert lhs.coeffs == rhs.coeffs


def test_scalar_trace_seminorm_monotone(rng):
    f = FormalFunction([random_trig(rng, 2, 1) for _ in range(3)], 2)
    t = renormalized_trace(f, S1, 1)
    vals = [scalar_trace_seminorm(t, l) for l in range(3)]
    for a, b in zip(vals, vals[1:]):
        assert a.lo <= b.hi


def test_trace_continuity(rng):
    A = Atlas.torus(2)
    for _ in range(5):
        f = FormalFunction([random_trig(rng, 2, 2) for _ in range(3)], 2)
        for l in range(3):
            holds, lhs, rhs = trace_continuity_check(f, l, A, Fraction(64))
            assert holds, (l, lhs, rhs)


def test_trace_continuity_requires_torus():
    f = FormalFunction.of(TrigRep(2, {(0, 0): QQi.of(Fraction(1))}), 1)
    with pytest.raises(ValueError):
        trace_continuity_check(f, 0, Atlas.default_flat(2))
