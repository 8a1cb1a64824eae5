import random
from fractions import Fraction

import pytest

from dqkit import FormalFunction, PolyRep, QQi, TrigRep


def random_poly(rng: random.Random, dim: int, deg: int,
                max_terms: int = 5) -> PolyRep:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = [0] * dim
        for _ in range(rng.randint(0, deg)):
            exp[rng.randrange(dim)] += 1
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if c:
            terms[tuple(exp)] = terms.get(tuple(exp), Fraction(0)) + c
    return PolyRep(dim, {e: c for e, c in terms.items() if c})


def random_formal(rng: random.Random, dim: int, N: int, deg: int) -> FormalFunction:
    return FormalFunction([random_poly(rng, dim, deg) for _ in range(N + 1)], N)


def random_trig(rng: random.Random, dim: int, kmax: int,
                max_modes: int = 4) -> TrigRep:
    modes = {}
    for _ in range(rng.randint(1, max_modes)):
        k = tuple(rng.randint(-kmax, kmax) for _ in range(dim))
        modes[k] = QQi(Fraction(rng.randint(-5, 5), rng.randint(1, 4)),
                       Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    return TrigRep(dim, modes)


@pytest.fixture
def rng():
    return random.Random(20260826)
