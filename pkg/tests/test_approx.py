from fractions import Fraction

import pytest

from dqkit import (Box, BudgetExceededError, FormalFunction, PolyRep,
                   SymplecticStructure, TrigRep, QQi, bernstein,
                   classical_to_quantum, evaluate_witness,
                   quantum_weierstrass, sup_enclosure)
from dqkit.coeffring import iterated_diff

from conftest import random_poly

S = SymplecticStructure.standard(1)
K01 = Box.cube(2, 0, 1)
SIN_X1 = TrigRep(2, {(1, 0): QQi(Fraction(0), Fraction(-1, 2)),
                     (-1, 0): QQi(Fraction(0), Fraction(1, 2))})


def test_bernstein_reproduces_affine():
    f = PolyRep(2, {(1, 0): Fraction(2), (0, 0): Fraction(-1)})
    assert bernstein(f, 6, K01) == f


def _poly_at(p: PolyRep, x):
    total = Fraction(0)
    for exp, c in p.terms.items():
        v = c
        for xi, e in zip(x, exp):
            v *= Fraction(xi) ** e
        total += v
    return total


def test_bernstein_interpolates_endpoints():
    f = PolyRep(2, {(2, 0): Fraction(1)})
    b = bernstein(f, 8, K01)
    for x in ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))):
        assert _poly_at(b, x) == _poly_at(f, x)


def test_bernstein_derivative_convergence():
    # some degree nu <= 256 brings all derivative sups of order <= 2
    # below 1/10 on the unit box
    target = Fraction(1, 10)
    nu = 4
    while nu <= 256:
        diff = bernstein(SIN_X1, nu, K01) + SIN_X1.scale(Fraction(-1))
        ok = True
        for I in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]:
            d = iterated_diff(diff, I)
            try:
                e = sup_enclosure(d, K01, target / 4)
            except BudgetExceededError:
                ok = False
                break
            if e.hi >= target:
                ok = False
                break
        if ok:
            return
        nu *= 2
    pytest.fail("no Bernstein degree <= 256 certified the bound")


def test_classical_to_quantum_value_embeds_exactly(rng):
    for _ in range(10):
        p = random_poly(rng, 2, 3)
        qp = classical_to_quantum(p, S, 3)
        assert qp.value.coeffs[0] == p


def test_witness_star_evaluates_to_value(rng):
    for _ in range(10):
        p = random_poly(rng, 2, 3)
        qp = classical_to_quantum(p, S, 3)
        assert evaluate_witness(qp.witness, 2, 3, S) == qp.value


def test_quantum_weierstrass_certified_bound():
    f = FormalFunction.of(SIN_X1, 3)
    qp, bound = quantum_weierstrass(f, K01, 2, S)
    assert bound.lo == 0
    assert bound.hi < Fraction(5, 8) / 4 + Fraction(1, 8)
    assert evaluate_witness(qp.witness, 2, 3, S) == qp.value


def test_quantum_weierstrass_polynomial_input_zero_tailwise():
    f = FormalFunction.of(PolyRep(2, {(1, 1): Fraction(1)}), 3)
    qp, bound = quantum_weierstrass(f, K01, 2, S)
    # a polynomial is its own approximant up to the series tail
    assert qp.value.coeffs[0] == f.coeffs[0]
    assert bound.hi <= Fraction(1, 8) + Fraction(1, 1000)


def test_quantum_weierstrass_rejects_bad_order():
    f = FormalFunction.of(SIN_X1, 2)
    with pytest.raises(ValueError):
        quantum_weierstrass(f, K01, 0, S)
