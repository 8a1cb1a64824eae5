from fractions import Fraction


from dqkit import (PolyRep, SymplecticStructure, WeylElement,
                   bracket_over_hbar, delta, delta_inv, fiberwise_moyal,
                   graded_commutator, symbol)
from dqkit.formal import FormalFunction


def _mono(dim, W, k, I, J, c=Fraction(1)):
    return WeylElement.monomial(PolyRep.constant(dim, c), W, k, I, J)


def test_wedge_antisymmetry():
    # pure form monomials (no y dependence) multiply by the wedge alone
    a = _mono(2, 6, 0, (0, 0), (0,))
    b = _mono(2, 6, 0, (0, 0), (1,))
    S = SymplecticStructure.standard(1)
    ab = fiberwise_moyal(a, b, S)
    ba = fiberwise_moyal(b, a, S)
    assert ab == ba.scale(Fraction(-1))
    assert fiberwise_moyal(a, a, S).is_zero()


def test_delta_squared_zero():
    for key in [(0, (2, 1), ()), (1, (1, 0), (1,)), (0, (3, 0), ())]:
        a = _mono(2, 8, *key)
        assert delta(delta(a)).is_zero()


def test_delta_inv_squared_zero():
    a = _mono(2, 8, 0, (1, 1), (0,))
    assert delta_inv(delta_inv(a)).is_zero()


def test_hodge_decomposition():
    # a = delta delta_inv a + delta_inv delta a for non-central terms
    cases = [(0, (2, 0), ()), (0, (1, 1), (1,)), (1, (1, 0), (0,)),
             (0, (0, 3), (0, 1)), (2, (1, 0), ())]
    for key in cases:
        a = _mono(2, 10, *key)
        recon = delta(delta_inv(a)) + delta_inv(delta(a))
        assert recon == a, key


def test_delta_is_bracket_with_gamma():
    S = SymplecticStructure.standard(1)
    dim, W = 2, 8
    gamma = WeylElement.zero(dim, W)
    for i in range(dim):
        for j in range(dim):
            w = S.omega_lower[i][j]
            if w == 0:
                continue
            I = [0] * dim
            I[j] = 1
            gamma = gamma + _mono(dim, W, 0, tuple(I), (i,), w)
    for key in [(0, (2, 1), ()), (1, (1, 0), (1,)), (0, (0, 2), (0,))]:
        a = _mono(dim, W, *key)
        assert bracket_over_hbar(gamma, a, S) == delta(a), key


def test_symbol_extracts_central_part():
    f = FormalFunction.of(PolyRep.coordinate(2, 0), 2)
    a = WeylElement.from_formal(f, 6)
    s = symbol(a)
    assert s.coeffs[0] == f.coeffs[0]


def test_weight_cap_truncates():
    a = _mono(2, 2, 0, (1, 1), ())
    b = _mono(2, 2, 0, (1, 1), ())
    S = SymplecticStructure.standard(1)
    prod = fiberwise_moyal(a, b, S)
    assert all(2 * k + sum(I) <= 2 for (k, I, J) in prod.terms)


def test_bracket_requires_divisibility():
    S = SymplecticStructure.standard(1)
    a = _mono(2, 6, 0, (1, 0), ())
    b = _mono(2, 6, 0, (0, 1), ())
    # [y1, y2]/hbar is a central constant: divisible, no error
    br = bracket_over_hbar(a, b, S)
    assert not br.is_zero()


def test_graded_commutator_of_even_forms_antisymmetric():
    S = SymplecticStructure.standard(1)
    a = _mono(2, 8, 0, (2, 0), ())
    b = _mono(2, 8, 0, (0, 2), ())
    assert graded_commutator(a, b, S) == graded_commutator(b, a, S).scale(Fraction(-1))
