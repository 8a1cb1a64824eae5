from fractions import Fraction

import pytest

from dqkit import (FedosovData, FormalFunction, InvalidCorrectionError,
                   PolyRep, SymplecticStructure, WeylElement, check_flat,
                   exterior_derivative, flat_section, is_quantizable,
                   jet_locality_test, moyal, star_via_flat_sections, symbol)

from conftest import random_poly


S = SymplecticStructure.standard(1)
FLAT = FedosovData.flat(S)


def test_exterior_derivative_squares_to_zero():
    f = FormalFunction.of(PolyRep(2, {(2, 1): Fraction(1)}), 2)
    a = WeylElement.from_formal(f, 6)
    assert exterior_derivative(exterior_derivative(a)).is_zero()


def test_flat_section_of_coordinate_is_x_plus_y():
    for i in range(2):
        f = FormalFunction.coordinate(2, i, 2)
        O = flat_section(f, FLAT, 6)
        I = [0, 0]
        I[i] = 1
        expected = (WeylElement.from_formal(f, 6)
                    + WeylElement.monomial(PolyRep.constant(2, Fraction(1)),
                                           6, 0, tuple(I), ()))
        assert O == expected


def test_flat_section_symbol_roundtrip(rng):
    for _ in range(10):
        f = FormalFunction.of(random_poly(rng, 2, 3), 2)
        O = flat_section(f, FLAT, 10)
        s = symbol(O)
        assert s.truncate(f.N) == f
        assert all(c.is_zero() for c in s.coeffs[f.N + 1:])


def test_flat_section_defect_vanishes(rng):
    for _ in range(5):
        f = FormalFunction.of(random_poly(rng, 2, 3), 2)
        O = flat_section(f, FLAT, 10)
        assert check_flat(O, FLAT).is_zero()


def test_star_via_flat_sections_matches_moyal(rng):
    for _ in range(5):
        f = FormalFunction.of(random_poly(rng, 2, 3), 3)
        g = FormalFunction.of(random_poly(rng, 2, 3), 3)
        assert star_via_flat_sections(f, g, FLAT) == moyal(f, g, S)


def test_is_quantizable_polynomial_yes():
    f = FormalFunction.of(PolyRep(2, {(2, 2): Fraction(1)}), 2)
    res = is_quantizable(f, FLAT, 12)
    assert res.quantizable
    assert res.weight == 4


def test_is_quantizable_insufficient_cap_says_no():
    f = FormalFunction.of(PolyRep(2, {(3, 3): Fraction(1)}), 2)
    res = is_quantizable(f, FLAT, 5)
    assert not res.quantizable
    assert res.weight is None


def test_jet_locality():
    f = FormalFunction.of(PolyRep(2, {(2, 0): Fraction(1)}), 2)
    assert jet_locality_test(f, [Fraction(1), Fraction(2)], 2, FLAT)


def test_correction_must_be_one_form():
    bad = WeylElement.monomial(PolyRep.constant(2, Fraction(1)), 6, 0,
                               (3, 0), (0, 1))
    with pytest.raises(InvalidCorrectionError):
        FedosovData(S, correction=bad)


def test_correction_weight_floor():
    bad = WeylElement.monomial(PolyRep.constant(2, Fraction(1)), 6, 0,
                               (1, 0), (0,))
    with pytest.raises(InvalidCorrectionError):
        FedosovData(S, correction=bad)


def test_christoffel_symmetry_enforced():
    zero = PolyRep.constant(2, Fraction(0))
    one = PolyRep.constant(2, Fraction(1))
    gamma = [[[zero, zero], [zero, zero]], [[zero, one], [zero, zero]]]
    with pytest.raises(ValueError):
        FedosovData(S, christoffel=gamma)


def test_symmetric_christoffel_accepted_and_flat_sections_close():
    zero = PolyRep.constant(2, Fraction(0))
    x = PolyRep.coordinate(2, 0)
    gamma = [[[x, zero], [zero, zero]], [[zero, zero], [zero, zero]]]
    F = FedosovData(S, christoffel=gamma)
    f = FormalFunction.coordinate(2, 0, 2)
    O = flat_section(f, F, 8)
    # without a curvature correction the connection need not be flat;
    # the recursion must still reproduce the symbol
    assert symbol(O).truncate(f.N) == f
