import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geophylo.model import (
    CrossingCounter,
    Geophylogeny,
    LeaderType,
    ModelError,
    PairKind,
    brute_force_min,
    classify_pairs,
    count_crossings,
    crossing_pair,
    undecided_pairs,
)
from geophylo.tree import LeafOrder, PhyloTree, TreeError, all_leaf_orders

from conftest import random_instance, t3_instance


def test_crossing_pair_s_example(t3):
    # leaders p1 -> anchor at X(2) and p3 -> anchor at X(3) cross at (2.25, 3.25)
    a = t3.leader_segments("l1", 2, LeaderType.S)
    b = t3.leader_segments("l3", 3, LeaderType.S)
    assert crossing_pair(a, b)


def test_crossing_pair_parallel_verticals():
    tree = PhyloTree(("l1", "l2"))
    g = Geophylogeny(tree, 4, 4, {"l1": (1, 2), "l2": (3, 1)}, positions=[1, 3], ytop=4)
    a = g.leader_segments("l1", 1, LeaderType.S)
    b = g.leader_segments("l2", 2, LeaderType.S)
    assert not crossing_pair(a, b)


def test_crossing_pair_po_example(t3):
    # horizontal of p2 at y=2 spans x in [1,3]; vertical of p1 at x=2 spans y in [1,4]
    a = t3.leader_segments("l2", 3, LeaderType.PO)
    b = t3.leader_segments("l1", 2, LeaderType.PO)
    assert crossing_pair(a, b)


def test_count_crossings_t3_oracle(t3):
    # frozen exhaustive counts over all four embeddings
    expected = {
        ("l1", "l2", "l3"): 1,
        ("l2", "l1", "l3"): 1,
        ("l3", "l1", "l2"): 2,
        ("l3", "l2", "l1"): 1,
    }
    for order, want in expected.items():
        assert count_crossings(t3, order, LeaderType.S) == want


def test_count_crossings_rejects_non_realizable(t3):
    with pytest.raises(TreeError, match="not contiguous"):
        count_crossings(t3, ["l1", "l3", "l2"], LeaderType.S)


def test_count_crossings_single_leaf():
    g = Geophylogeny(PhyloTree("l1"), 2, 2, {"l1": (1, 1)})
    for lt in (LeaderType.S, LeaderType.PO):
        assert count_crossings(g, ["l1"], lt) == 0


def test_classify_s_area_examples():
    tree = PhyloTree(("a", "b"))
    g = Geophylogeny(
        tree, 4, 4,
        {"a": (2, 1), "b": (Fraction(1, 2), 2)},
        positions=[1, 3], ytop=4,
    )
    pairs = {pc.pair: pc.kind for pc in classify_pairs(g, LeaderType.S)}
    # b at (0.5, 2) is left of a's triangle: left edge sits at x = 5/3 at y = 2
    assert pairs[("a", "b")] is PairKind.GEOMETRY_FREE

    g2 = Geophylogeny(tree, 4, 4, {"a": (2, 1), "b": (2, 2)}, positions=[1, 3], ytop=4)
    pairs2 = {pc.pair: pc.kind for pc in classify_pairs(g2, LeaderType.S)}
    assert pairs2[("a", "b")] is PairKind.UNDECIDED
    assert pairs2[("b", "a")] is PairKind.GEOMETRY_FREE


def test_classify_t3(t3):
    # (l2, l3) is a boundary case: p3 lies exactly on the edge of p2's
    # triangle, and boundary containment is classified undecided
    assert undecided_pairs(t3, LeaderType.S) == [("l1", "l3"), ("l2", "l3")]
    # po-areas: everything above within the span is undecided
    po = set(undecided_pairs(t3, LeaderType.PO))
    assert po == {("l1", "l2"), ("l1", "l3"), ("l2", "l3")}


def test_classify_s_antisymmetric_random():
    rng = random.Random(7)
    for _ in range(20):
        g = random_instance(rng, rng.randrange(2, 9))
        und = set(undecided_pairs(g, LeaderType.S))
        for a, b in und:
            assert (b, a) not in und or g.sites[a] == g.sites[b]


def test_classify_po_mutual_only_equal_y():
    rng = random.Random(8)
    for _ in range(20):
        g = random_instance(rng, rng.randrange(2, 9))
        und = set(undecided_pairs(g, LeaderType.PO))
        for a, b in und:
            if (b, a) in und:
                assert g.sites[a][1] == g.sites[b][1]


def test_brute_force_t3(t3):
    lo, c = brute_force_min(t3, LeaderType.S)
    assert c == 1
    assert lo.order == ("l1", "l2", "l3")  # lexicographically smallest bits (0,0)
    lo_po, c_po = brute_force_min(t3, LeaderType.PO)
    assert c_po == 1
    assert lo_po.order == ("l2", "l1", "l3")


def test_brute_force_cap():
    rng = random.Random(1)
    g = random_instance(rng, 15)
    with pytest.raises(ModelError, match="cap"):
        brute_force_min(g, LeaderType.S)


def test_identity_layout_zero_crossings():
    # sites sorted by x match a realizable order and no s-area containment
    tree = PhyloTree((("l1", "l2"), "l3"))
    g = Geophylogeny(
        tree, 4, 4,
        {"l1": (1, 1), "l2": (2, 1), "l3": (3, 1)},
        positions=[1, 2, 3], ytop=4,
    )
    assert brute_force_min(g, LeaderType.S)[1] == 0
    assert brute_force_min(g, LeaderType.PO)[1] == 0


def test_translation_invariance():
    rng = random.Random(3)
    g = random_instance(rng, 7)
    shift = Fraction(13, 7)
    g2 = Geophylogeny(
        g.tree, g.width + shift, g.height,
        {lab: (x + shift, y) for lab, (x, y) in g.sites.items()},
        positions=[x + shift for x in g.positions], ytop=g.ytop,
    )
    for lo in all_leaf_orders(g.tree):
        for lt in (LeaderType.S, LeaderType.PO):
            assert count_crossings(g, lo, lt) == count_crossings(g2, lo, lt)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**9), n=st.integers(2, 8))
def test_fast_counter_matches_direct(seed, n):
    g = random_instance(random.Random(seed), n)
    for lt in (LeaderType.S, LeaderType.PO):
        counter = CrossingCounter(g, lt)
        for lo in all_leaf_orders(g.tree):
            assert counter.count(lo.order) == count_crossings(g, lo, lt)


def test_fast_counter_collinear_grid():
    # many equal coordinates: exercises boundary and collinear-overlap paths
    tree = PhyloTree(((("a", "b"), "c"), "d"))
    g = Geophylogeny(
        tree, 3, 3,
        {"a": (1, 1), "b": (1, 2), "c": (2, 1), "d": (2, 2)},
        positions=[0, 1, 2, 3], ytop=3,
    )
    for lt in (LeaderType.S, LeaderType.PO):
        counter = CrossingCounter(g, lt)
        for lo in all_leaf_orders(tree):
            assert counter.count(lo.order) == count_crossings(g, lo, lt)


def test_brute_force_is_lower_bound(t3):
    _, best = brute_force_min(t3, LeaderType.S)
    for lo in all_leaf_orders(t3.tree):
        assert best <= count_crossings(t3, lo, LeaderType.S)


def test_geometry_free_rule_matches_order_inversion():
    # for s-leaders, a geometry-free pair with p_i left of p_j crosses
    # iff their leaves are inverted
    rng = random.Random(11)
    for _ in range(10):
        g = random_instance(rng, 6)
        und = set(undecided_pairs(g, LeaderType.S))
        for lo in all_leaf_orders(g.tree):
            pos = lo.position
            for a, b in itertools.combinations(g.tree.leaf_labels, 2):
                if (a, b) in und or (b, a) in und:
                    continue
                if g.sites[a][0] == g.sites[b][0]:
                    continue
                if g.sites[a][0] > g.sites[b][0]:
                    a, b = b, a
                crossed = crossing_pair(
                    g.leader_segments(a, pos[a], LeaderType.S),
                    g.leader_segments(b, pos[b], LeaderType.S),
                )
                assert crossed == (pos[a] > pos[b])


def test_site_validation():
    tree = PhyloTree(("a", "b"))
    with pytest.raises(ModelError, match="outside the map"):
        Geophylogeny(tree, 2, 2, {"a": (1, 1), "b": (3, 1)})
    with pytest.raises(ModelError, match="missing site"):
        Geophylogeny(tree, 2, 2, {"a": (1, 1)})
    with pytest.raises(ModelError, match="unknown leaf"):
        Geophylogeny(tree, 2, 2, {"a": (1, 1), "b": (1, 2), "c": (0, 0)})
    with pytest.raises(ModelError, match="strictly increasing"):
        Geophylogeny(tree, 2, 2, {"a": (1, 1), "b": (1, 2)}, positions=[1, 1])
