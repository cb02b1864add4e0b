import random

import pytest

from jacobitrees.trees import Tree, leaf


def random_tree(rng: random.Random, labels: list[int]) -> Tree:
    """Uniform-ish random planar tree on the given labels."""
    if len(labels) == 1:
        return leaf(labels[0])
    k = rng.randint(1, len(labels) - 1)
    shuffled = labels[:]
    rng.shuffle(shuffled)
    return Tree(None, random_tree(rng, shuffled[:k]), random_tree(rng, shuffled[k:]))


@pytest.fixture
def rng():
    return random.Random(20240817)
