import random
from fractions import Fraction

import pytest

from orbitspace import build_p_matrix, builtin_basis

BUILTIN_KEYS = (
    ("I2", 2), ("I2", 3), ("I2", 4), ("I2", 5), ("I2", 6), ("I2", 7), ("I2", 8),
    ("A2", None), ("A3", None), ("A4", None),
    ("B2", None), ("B3", None), ("B4", None), ("D4", None),
)


@pytest.fixture(scope="session")
def bases():
    return {key: builtin_basis(*key) for key in BUILTIN_KEYS}


@pytest.fixture(scope="session")
def pmats(bases):
    return {key: build_p_matrix(basis) for key, basis in bases.items()}


def rand_fraction(rng: random.Random, span: int = 9, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_ambient_point(basis, rng: random.Random):
    """A random rational point in the basis's domain (on the restriction
    hyperplane when one is present)."""
    if basis.restriction is not None:
        head = [rand_fraction(rng) for _ in range(basis.n - 1)]
        return tuple(head) + (-sum(head),)
    return tuple(rand_fraction(rng) for _ in range(basis.n))
