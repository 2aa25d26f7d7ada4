import random
from fractions import Fraction

import pytest

from geophylo.heuristics import (
    PipelineError,
    bottom_up,
    greedy,
    leaf_additive_heuristic,
    run_pipeline,
    top_down,
)
from geophylo.model import Geophylogeny, LeaderType, brute_force_min, count_crossings
from geophylo.tree import LeafOrder, PhyloTree

from conftest import random_instance


def flat_instance():
    # sites lined up below their leaves, trivially crossing-free
    tree = PhyloTree((("l1", "l2"), ("l3", "l4")))
    return Geophylogeny(
        tree, 3, 3,
        {"l1": (0, 1), "l2": (1, 1), "l3": (2, 1), "l4": (3, 1)},
        positions=[0, 1, 2, 3], ytop=3,
    )


def test_bottom_up_two_leaves_optimal():
    tree = PhyloTree(("a", "b"))
    g = Geophylogeny(tree, 2, 2, {"a": (2, 1), "b": (0, 1)},
                     positions=[0, 2], ytop=2)
    order, c = bottom_up(g, LeaderType.S)
    assert c == 0
    assert order.order == ("b", "a")


def test_bottom_up_not_always_optimal():
    # frozen from a seeded search: locally best subtrees combine badly
    tree = PhyloTree(((((("l4", "l5"), "l1"), ("l3", "l6")), "l2")))
    g = Geophylogeny(
        tree, 100, 100,
        {
            "l1": (37, Fraction(221, 5)),
            "l2": (Fraction(79, 5), Fraction(302, 5)),
            "l3": (Fraction(519, 10), Fraction(319, 10)),
            "l4": (Fraction(23, 10), Fraction(697, 10)),
            "l5": (Fraction(441, 5), 55),
            "l6": (Fraction(428, 5), Fraction(317, 5)),
        },
    )
    assert brute_force_min(g, LeaderType.PO)[1] == 1
    assert bottom_up(g, LeaderType.PO)[1] == 2


def test_top_down_flat_sites_keep_neutral():
    g = flat_instance()
    order, c = top_down(g, LeaderType.S)
    assert c == 0
    assert order == LeafOrder.neutral(g.tree)


def test_top_down_t3(t3):
    order, c = top_down(t3, LeaderType.S)
    assert c <= 2
    assert c == count_crossings(t3, order, LeaderType.S)


def test_leaf_additive_t3(t3):
    order, c = leaf_additive_heuristic(t3, LeaderType.S, "xhop")
    assert order.order == ("l2", "l1", "l3")
    assert c == 1


def test_leaf_additive_zero_on_identity_layout():
    g = flat_instance()
    for lt in (LeaderType.S, LeaderType.PO):
        assert leaf_additive_heuristic(g, lt, "xoffset")[1] == 0


def test_greedy_reaches_t3_optimum(t3):
    start, _ = top_down(t3, LeaderType.S)
    order, c = greedy(t3, LeaderType.S, start)
    assert c == 1


def test_greedy_fixed_point():
    rng = random.Random(41)
    g = random_instance(rng, 7)
    opt_order, opt = brute_force_min(g, LeaderType.S)
    order, c = greedy(g, LeaderType.S, opt_order)
    assert c == opt
    assert order == opt_order


def test_greedy_never_worse_than_start():
    rng = random.Random(42)
    for _ in range(15):
        g = random_instance(rng, rng.randrange(3, 9))
        for lt in (LeaderType.S, LeaderType.PO):
            start = LeafOrder.neutral(g.tree)
            base = count_crossings(g, start, lt)
            order, c = greedy(g, lt, start)
            assert c <= base
            assert c == count_crossings(g, order, lt)


def test_heuristics_bounded_below_by_optimum():
    rng = random.Random(43)
    for _ in range(20):
        g = random_instance(rng, rng.randrange(3, 9))
        for lt in (LeaderType.S, LeaderType.PO):
            opt = brute_force_min(g, lt)[1]
            for order, c in (
                bottom_up(g, lt),
                top_down(g, lt),
                leaf_additive_heuristic(g, lt, "xhop"),
                greedy(g, lt, LeafOrder.neutral(g.tree)),
            ):
                assert c >= opt
                assert c == count_crossings(g, order, lt)


def test_pipeline_at_most_each_component():
    rng = random.Random(44)
    for _ in range(10):
        g = random_instance(rng, rng.randrange(4, 9))
        for lt in (LeaderType.S, LeaderType.PO):
            best = run_pipeline(g, lt, "best(bu,td,la:xhop)+greedy")[1]
            assert best <= bottom_up(g, lt)[1]
            assert best <= top_down(g, lt)[1]
            assert best <= leaf_additive_heuristic(g, lt, "xhop")[1]


def test_pipeline_single_step(t3):
    assert run_pipeline(t3, LeaderType.S, "td") == top_down(t3, LeaderType.S)


def test_pipeline_rejects_garbage(t3):
    with pytest.raises(PipelineError):
        run_pipeline(t3, LeaderType.S, "best()")
    with pytest.raises(PipelineError):
        run_pipeline(t3, LeaderType.S, "simulated-annealing")
