import random
from fractions import Fraction

import pytest

from geophylo.model import Geophylogeny
from geophylo.tree import PhyloTree


def t3_instance() -> Geophylogeny:
    """3-leaf reference instance used across the suite.

    Tree ((l1,l2),l3), identity-like layout X=(1,2,3) on a 4x4 map with
    ytop=4, sites p1=(3,1), p2=(1,2), p3=(2,3).
    """
    tree = PhyloTree((("l1", "l2"), "l3"))
    return Geophylogeny(
        tree, width=4, height=4,
        sites={"l1": (3, 1), "l2": (1, 2), "l3": (2, 3)},
        positions=[1, 2, 3], ytop=4,
    )


@pytest.fixture
def t3() -> Geophylogeny:
    return t3_instance()


def random_instance(rng: random.Random, n: int, width=100, height=100) -> Geophylogeny:
    """Random balanced-ish tree with rational grid sites, for property tests."""
    labels = [f"l{i}" for i in range(1, n + 1)]
    nodes = [lab for lab in labels]
    rng.shuffle(nodes)
    while len(nodes) > 1:
        i = rng.randrange(len(nodes) - 1)
        pair = (nodes[i], nodes[i + 1])
        nodes[i:i + 2] = [pair]
    tree = PhyloTree(nodes[0])
    sites = {
        lab: (Fraction(rng.randrange(0, 1000), 10), Fraction(rng.randrange(0, 1000), 10))
        for lab in labels
    }
    return Geophylogeny(tree, width=width, height=height, sites=sites)
