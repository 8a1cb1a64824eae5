from fractions import Fraction

import pytest

from dqkit import (FormalFunction, PolyRep, SymplecticStructure, commutator,
                   invert_matrix, moyal, moyal_component, poisson)
from dqkit.coeffring import iterated_diff

from conftest import random_poly


def test_invert_matrix_roundtrip():
    m = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
    inv = invert_matrix(m)
    prod = [[sum(m[i][k] * inv[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)]
    assert prod == [[1, 0], [0, 1]]


def test_invert_matrix_singular():
    with pytest.raises(ValueError):
        invert_matrix([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])


def test_standard_structure_inverse():
    for n in (1, 2, 3):
        S = SymplecticStructure.standard(n)
        assert S.dim == 2 * n
        assert S.check_inverse()


def _poisson_oracle(f, g, S):
    """Independent contraction omega^{ij} d_i f d_j g from the inverse."""
    out = None
    for i in range(S.dim):
        for j in range(S.dim):
            w = S.omega_upper[i][j]
            if w == 0:
                continue
            term = (iterated_diff(f, _unit(S.dim, i))
                    * iterated_diff(g, _unit(S.dim, j))).scale(w)
            out = term if out is None else out + term
    return out if out is not None else f.scale(Fraction(0))


def _unit(dim, i):
    e = [0] * dim
    e[i] = 1
    return tuple(e)


def test_poisson_of_coordinates_matches_inverse():
    S = SymplecticStructure.standard(1)
    x1 = PolyRep.coordinate(2, 0)
    x2 = PolyRep.coordinate(2, 1)
    got = poisson(x1, x2, S)
    # the bracket of coordinates is the inverse-matrix entry, whatever
    # sign convention the inversion produces
    assert got == PolyRep.constant(2, S.omega_upper[0][1])


def test_poisson_matches_oracle(rng):
    S = SymplecticStructure.standard(2)
    for _ in range(20):
        f = random_poly(rng, 4, 3)
        g = random_poly(rng, 4, 3)
        assert poisson(f, g, S) == _poisson_oracle(f, g, S)


def test_moyal_component_zero_is_product(rng):
    S = SymplecticStructure.standard(1)
    for _ in range(10):
        f = random_poly(rng, 2, 3)
        g = random_poly(rng, 2, 3)
        assert moyal_component(f, g, 0, S) == f * g


def test_moyal_component_antisymmetrization_is_poisson(rng):
    S = SymplecticStructure.standard(1)
    for _ in range(10):
        f = random_poly(rng, 2, 3)
        g = random_poly(rng, 2, 3)
        lhs = moyal_component(f, g, 1, S) + moyal_component(g, f, 1, S).scale(-1)
        assert lhs == poisson(f, g, S)


def test_moyal_unit(rng):
    S = SymplecticStructure.standard(1)
    one = FormalFunction.constant(2, Fraction(1), 3)
    f = FormalFunction.of(random_poly(rng, 2, 3), 3)
    assert moyal(one, f, S) == f
    assert moyal(f, one, S) == f


def test_moyal_associative(rng):
    S = SymplecticStructure.standard(1)
    for _ in range(5):
        f = FormalFunction.of(random_poly(rng, 2, 3), 3)
        g = FormalFunction.of(random_poly(rng, 2, 3), 3)
        h = FormalFunction.of(random_poly(rng, 2, 3), 3)
        assert moyal(moyal(f, g, S), h, S) == moyal(f, moyal(g, h, S), S)


def test_commutator_leading_term_is_poisson(rng):
    S = SymplecticStructure.standard(1)
    for _ in range(10):
        f = FormalFunction.of(random_poly(rng, 2, 4), 2)
        g = FormalFunction.of(random_poly(rng, 2, 4), 2)
        c = commutator(f, g, S)
        assert c.coeffs[0].is_zero()
        assert c.coeffs[1] == poisson(f.coeffs[0], g.coeffs[0], S)


def test_dimension_mismatch_rejected():
    S = SymplecticStructure.standard(2)
    f = FormalFunction.coordinate(2, 0, 2)
    with pytest.raises(Exception):
        moyal(f, f, S)
