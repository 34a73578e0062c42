import random

import pytest

from varword.words import Word


def random_prefix_valid(rng: random.Random, k: int, length: int) -> Word:
    """Uniform-ish random prefix-valid word: letters or any introduced
    variable, with a fresh variable allowed at every step."""
    syms = []
    introduced = 0
    for _ in range(length):
        c = rng.randrange(k + introduced + 1)
        if c < k:
            syms.append(c)
        else:
            j = c - k
            if j == introduced:
                introduced += 1
            syms.append(k + j)
    return Word(k, tuple(syms))


def random_letters(rng: random.Random, k: int, length: int) -> Word:
    return Word(k, tuple(rng.randrange(k) for _ in range(length)))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
