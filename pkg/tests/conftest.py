import random

import pytest

from nekra.groupfile import load_fixture
from nekra.rovernek import VElement, make_velement
from nekra.ssgroup import SSPresentation, Word, reduce_syllables


@pytest.fixture(scope="session")
def odometer():
    return load_fixture("odometer")


@pytest.fixture(scope="session")
def grigorchuk():
    return load_fixture("grigorchuk")


@pytest.fixture(scope="session")
def dinf():
    return load_fixture("dinf")


@pytest.fixture(scope="session")
def trivial_d3():
    return SSPresentation(3, (), ())


def random_word(rng: random.Random, G: SSPresentation, max_len: int) -> Word:
    n = rng.randint(0, max_len)
    syl = [(rng.randrange(G.n_gens), rng.choice((1, -1))) for _ in range(n)]
    return reduce_syllables(syl)


def random_antichain(rng: random.Random, d: int, splits: int):
    cones = [()]
    for _ in range(splits):
        v = cones.pop(rng.randrange(len(cones)))
        cones.extend(v + (j,) for j in range(1, d + 1))
    return cones


def random_velement(rng: random.Random, G: SSPresentation, splits: int = 2,
                    word_len: int = 3) -> VElement:
    domain = random_antichain(rng, G.degree, rng.randint(0, splits))
    n = len(domain)
    range_ = random_antichain(rng, G.degree, 0)
    while len(range_) < n:
        # grow the range antichain to the same cone count
        v = range_.pop(rng.randrange(len(range_)))
        range_.extend(v + (j,) for j in range(1, G.degree + 1))
    while len(range_) != n:
        domain = random_antichain(rng, G.degree, rng.randint(0, splits))
        n = len(domain)
        range_ = [()]
        while len(range_) < n:
            v = range_.pop(rng.randrange(len(range_)))
            range_.extend(v + (j,) for j in range(1, G.degree + 1))
    rng.shuffle(range_)
    decs = [random_word(rng, G, word_len) if G.n_gens else Word()
            for _ in range(n)]
    return make_velement(G, domain, range_, decs)
