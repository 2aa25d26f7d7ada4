from itertools import combinations

import pytest

from geophylo.maxcut import (
    MaxCutInput,
    build_maxcut_instance,
    designed_order,
    max_cut,
)
from geophylo.model import LeaderType, count_crossings

K3 = ((1, 2), (1, 3), (2, 3))
C4 = ((1, 2), (2, 3), (3, 4), (1, 4))
K4 = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def test_input_validation():
    with pytest.raises(ValueError, match="degree below 2"):
        MaxCutInput(((1, 2), (2, 3), (3, 4)), 1)
    with pytest.raises(ValueError, match="self-loops"):
        MaxCutInput(((1, 1), (1, 2), (2, 3)), 1)
    with pytest.raises(ValueError, match="parallel"):
        MaxCutInput(((1, 2), (2, 1), (1, 3), (2, 3)), 1)
    with pytest.raises(ValueError, match="at least 3"):
        MaxCutInput(((1, 2), (2, 3)), 1)
    assert MaxCutInput(((2, 3), (1, 3), (1, 2)), 1).edges == K3


def test_max_cut_oracle():
    assert max_cut(MaxCutInput(K3, 1)) == 2
    assert max_cut(MaxCutInput(C4, 1)) == 4
    assert max_cut(MaxCutInput(K4, 1)) == 4


def test_k_fix_and_threshold():
    g, kt, kf = build_maxcut_instance(MaxCutInput(K3, 2), "po")
    assert kf == 3 * 3 + 4 * 0 == 9
    assert kt == 9 + 2 * 3 - 2 == 13
    g, kt, kf = build_maxcut_instance(MaxCutInput(C4, 4), "po")
    assert kf == 3 * 4 + 4 * 2 == 20
    assert kt == 20 + 2 * 4 - 4


def test_gadget_size():
    inp = MaxCutInput(K3, 2)  # one fixing unit per gadget
    g, _, _ = build_maxcut_instance(inp, "po")
    assert g.n == 4 * 3 + (2 * 3 + 1) * 1 * 4 == 40


def test_designed_orders_match_cut_formula_k3():
    inp = MaxCutInput(K3, 2)
    g, kt, kf = build_maxcut_instance(inp, "po")
    for size in range(4):
        for part in combinations(inp.vertices, size):
            cut = sum(1 for a, b in inp.edges if (a in part) != (b in part))
            lo = designed_order(g, inp, "po", set(part))
            assert count_crossings(g, lo, LeaderType.PO) == kf + 2 * 3 - cut


def test_designed_order_reaches_threshold_c4_s_leaders():
    inp = MaxCutInput(C4, 4)
    g, kt, kf = build_maxcut_instance(inp, "s")
    lo = designed_order(g, inp, "s", {1, 3})  # a maximum cut of C4
    assert count_crossings(g, lo, LeaderType.S) == kt
