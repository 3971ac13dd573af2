import random
from fractions import Fraction

import pytest

from fragchain import FragTree, RateSpec, RootedTree


@pytest.fixture
def tree4():
    """4-edge worked example: root 0 with children 1, 2; vertex 1 with
    children 3, 4. Edge ids are the upper ends."""
    return RootedTree(0, [(0, 1), (0, 2), (1, 3), (1, 4)])


@pytest.fixture
def tree_ternary():
    """8-vertex example: 1 is the root, 2 and 3 its children, 2 has the
    children 4, 5, 6; 3 has child 7; 4 has child 8."""
    return RootedTree(1, [(1, 2), (1, 3), (2, 4), (2, 5), (2, 6), (3, 7), (4, 8)])


@pytest.fixture
def path2():
    """2-edge path root -> a -> b with edges 1 (lower) and 2 (upper)."""
    return RootedTree(0, [(0, 1), (1, 2)])


@pytest.fixture
def ref_aux_tree():
    """n=5, G={3,4}: root 3 with right child 4. The reference tree for the
    auxiliary slot process (10 structural atoms)."""
    return FragTree(5, 3, {}, {3: 4})


@pytest.fixture
def ref_frag_tree():
    """n=6, G={1,3,4}: root 3, left child 1, right child 4."""
    return FragTree(6, 3, {3: 1}, {3: 4})


def make_rng(salt=0):
    return random.Random(20260814 + salt)


@pytest.fixture
def rng():
    return make_rng()


@pytest.fixture
def rates5():
    return RateSpec("discrete",
                    {1: 0.1, 2: 0.05, 3: 0.2, 4: 0.1, 5: 0.15})


@pytest.fixture
def rates5_exact():
    return RateSpec("discrete",
                    {1: Fraction(1, 10), 2: Fraction(1, 20), 3: Fraction(1, 5),
                     4: Fraction(1, 10), 5: Fraction(3, 20)})


@pytest.fixture
def crates4():
    return RateSpec("continuous", {1: 0.7, 2: 1.3, 3: 0.4, 4: 1.0})
