from fractions import Fraction

import pytest

from unilim.core import Entourage, MonotonePseudometricSequence, Pseudometric, Tower
from unilim.fixtures import (
    binary_group_tower,
    glued_map,
    halving_factors,
    identity_map,
    three_point_sequence,
    three_point_tower,
)


@pytest.fixture
def tower():
    return three_point_tower()


@pytest.fixture
def mono_seq():
    return three_point_sequence()


@pytest.fixture
def group():
    return binary_group_tower()


@pytest.fixture
def factors():
    return halving_factors()


@pytest.fixture
def glued():
    return glued_map()


@pytest.fixture
def identity_into_top():
    return identity_map()


@pytest.fixture
def e_u(tower):
    # top-level relation joining a and b both ways
    return Entourage(2, 3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)])


@pytest.fixture
def e_v(tower):
    # top-level relation joining b and c both ways
    return Entourage(2, 3, [(0, 0), (1, 1), (2, 2), (1, 2), (2, 1)])


def pairs(e):
    return set(e.sorted_pairs())


def diag(n):
    return {(i, i) for i in range(n)}


def frac_matrix(rows):
    return Pseudometric([[Fraction(v) for v in row] for row in rows])


def flat_tower(sizes, value=0):
    """Tower whose every level metric is constant ``value`` off-diagonal."""
    n = sizes[-1]
    labels = [f"p{i}" for i in range(n)]
    metrics = []
    for m in sizes:
        metrics.append(
            Pseudometric(
                [[Fraction(0 if i == j else value) for j in range(m)] for i in range(m)]
            )
        )
    return Tower(labels, sizes, metrics)


def make_seq(tower, rows_per_level):
    return MonotonePseudometricSequence(
        tower, [frac_matrix(rows) for rows in rows_per_level]
    )
