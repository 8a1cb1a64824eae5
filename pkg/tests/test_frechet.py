from fractions import Fraction

import pytest

from dqkit import (Atlas, Box, FormalFunction, PolyRep, SymplecticStructure,
                   TruncationError, compact_distance, continuity_ratio,
                   formal_seminorm, frechet_distance, smooth_seminorm)

from conftest import random_formal

TOL = Fraction(4)
A2 = Atlas.default_flat(2)


def test_seminorm_of_constant():
    f = PolyRep.constant(2, Fraction(3, 2))
    e = smooth_seminorm(f, 0, A2, TOL)
    assert e.lo <= Fraction(3, 2) <= e.hi


def test_seminorm_monotone_in_order(rng):
    for _ in range(5):
        f = random_formal(rng, 2, 3, 2)
        vals = [formal_seminorm(f, k, A2, TOL) for k in range(3)]
        for a, b in zip(vals, vals[1:]):
            assert a.lo <= b.hi


def test_additive_formula(rng):
    for _ in range(5):
        f = random_formal(rng, 2, 2, 2)
        k = 2
        total = formal_seminorm(f, k, A2, TOL)
        parts = sum(
            (smooth_seminorm(f.coeffs[i], k - i, A2, TOL).hi
             for i in range(k + 1) if not f.coeffs[i].is_zero()),
            Fraction(0))
        assert total.lo <= parts
        partslo = sum(
            (smooth_seminorm(f.coeffs[i], k - i, A2, TOL).lo
             for i in range(k + 1) if not f.coeffs[i].is_zero()),
            Fraction(0))
        assert partslo <= total.hi


def test_truncation_rejected_beyond_order():
    f = FormalFunction.coordinate(2, 0, 2)
    with pytest.raises(TruncationError):
        formal_seminorm(f, 3, A2, TOL)


def test_homogeneity(rng):
    c = Fraction(-7, 3)
    for _ in range(5):
        f = random_formal(rng, 2, 1, 2)
        a = formal_seminorm(f.scale(c), 1, A2, TOL)
        b = formal_seminorm(f, 1, A2, TOL)
        # both enclose the exact values, which satisfy ||c f|| = |c| ||f||
        assert a.lo <= abs(c) * b.hi
        assert abs(c) * b.lo <= a.hi


def test_triangle_inequality(rng):
    for _ in range(5):
        f = random_formal(rng, 2, 1, 2)
        g = random_formal(rng, 2, 1, 2)
        lhs = formal_seminorm(f + g, 1, A2, TOL)
        rhs = formal_seminorm(f, 1, A2, TOL) + formal_seminorm(g, 1, A2, TOL)
        assert lhs.lo <= rhs.hi


def test_distance_self_is_tail_only():
    f = FormalFunction.coordinate(2, 0, 3)
    d = frechet_distance(f, f, A2, 5, TOL)
    assert d.lo == 0
    assert d.hi == Fraction(1, 32)


def test_distance_symmetric(rng):
    f = random_formal(rng, 2, 2, 2)
    g = random_formal(rng, 2, 2, 2)
    d1 = frechet_distance(f, g, A2, 4, TOL)
    d2 = frechet_distance(g, f, A2, 4, TOL)
    assert d1 == d2


def test_distance_bounded_by_one_plus_tail():
    f = FormalFunction.of(PolyRep(2, {(4, 4): Fraction(100)}), 2)
    g = FormalFunction.constant(2, Fraction(0), 2)
    d = frechet_distance(f, g, A2, 6, TOL)
    # each metric term is below 2^-k, so d < 2 even for huge arguments
    assert d.hi < 2


def test_compact_distance_on_box():
    f = FormalFunction.coordinate(2, 0, 2)
    g = FormalFunction.constant(2, Fraction(0), 2)
    K = Box.cube(2, 0, 1)
    d = compact_distance(f, g, K, 4, TOL)
    assert d.lo > 0


def test_continuity_ratio_positive(rng):
    S = SymplecticStructure.standard(1)
    f = FormalFunction.of(PolyRep.coordinate(2, 0), 1)
    g = FormalFunction.of(PolyRep.coordinate(2, 1), 1)
    r = continuity_ratio(f, g, 1, A2, S, TOL)
    assert r.lo > 0


def test_torus_atlas_shape():
    A = Atlas.torus(2)
    assert A.manifold == "torus"
    assert all(w >= 7 for w in A.charts[0].widths)
