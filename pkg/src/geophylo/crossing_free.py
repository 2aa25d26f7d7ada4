"""Polynomial decision procedure for crossing-free drawings.

Dynamic program over (vertex, leftmost position) that stores up to n(v)
embeddings of each subtree.  An embedding of T(v) is kept only if its own
leaders are pairwise crossing-free and no outside site is trapped: every site
not in T(v) must still be able to reach some position outside T(v)'s block
without crossing a T(v) leader.  Stored embeddings are keyed by the position
of the leaf whose site is lowest; same key means the same escape partition,
so one representative suffices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Geophylogeny, LeaderType, count_crossings, leaders_cross
from .tree import LeafOrder, PhyloTree


@dataclass(frozen=True)
class _Embedding:
    bits: tuple  # (internal vertex, rotation) pairs within the subtree
    pos: tuple   # (leaf label, position) pairs
    key: int     # position of the leaf of the lowest site


def decide_crossing_free(g: Geophylogeny, ltype) -> LeafOrder | None:
    """A witness order with zero leader crossings, or None if none exists."""
    ltype = LeaderType.parse(ltype)
    tree = g.tree
    n = tree.n
    if n == 1:
        return LeafOrder.neutral(tree)

    # lowest site per subtree (ties by x then label keep it deterministic)
    def lowest(labels):
        return min(labels, key=lambda l: (g.sites[l][1], g.sites[l][0], l))

    leaves_of: dict[int, list[str]] = {}
    for v in reversed(range(len(tree._children))):
        if tree.is_leaf(v):
            leaves_of[v] = [tree.label(v)]
        else:
            x, y = tree.children(v)
            leaves_of[v] = leaves_of[x] + leaves_of[y]

    all_labels = set(tree.leaf_labels)

    def pair_crossing_free(pos_a: dict, pos_b: dict) -> bool:
        for a, pa in pos_a:
            for b, pb in pos_b:
                if leaders_cross(g, ltype, a, pa, b, pb):
                    return False
        return True

    def outside_escapes(v: int, i: int, pos: tuple) -> bool:
        """Every site outside T(v) can still reach some outside position."""
        size = tree.subtree_size(v)
        block = range(i, i + size)
        outside_positions = [j for j in range(1, n + 1) if j not in block]
        inside = {lab for lab, _ in pos}
        for o in all_labels - inside:
            ok = False
            for j in outside_positions:
                if all(
                    not leaders_cross(g, ltype, o, j, lab, p)
                    for lab, p in pos
                ):
                    ok = True
                    break
            if not ok:
                return False
        return True

    F: dict[tuple[int, int], list[_Embedding]] = {}
    for v in reversed(range(len(tree._children))):
        size = tree.subtree_size(v)
        for i in range(1, n - size + 2):
            if tree.is_leaf(v):
                lab = tree.label(v)
                F[(v, i)] = [_Embedding(bits=(), pos=((lab, i),), key=i)]
                continue
            x, y = tree.children(v)
            nx, ny = tree.subtree_size(x), tree.subtree_size(y)
            low = lowest(leaves_of[v])
            stored: dict[int, _Embedding] = {}
            for bit, (left, right, off) in enumerate(((x, y, nx), (y, x, ny))):
                for el in F.get((left, i), []):
                    for er in F.get((right, i + off), []):
                        if not pair_crossing_free(el.pos, er.pos):
                            continue
                        pos = el.pos + er.pos
                        key = dict(pos)[low]
                        if key in stored:
                            continue
                        if not outside_escapes(v, i, pos):
                            continue
                        stored[key] = _Embedding(
                            bits=el.bits + er.bits + ((v, bit),),
                            pos=pos,
                            key=key,
                        )
            F[(v, i)] = list(stored.values())

    for emb in F.get((tree.root, 1), []):
        posmap = dict(emb.pos)
        order = tuple(sorted(posmap, key=posmap.get))
        lo = LeafOrder.from_order(tree, order)
        if count_crossings(g, lo, ltype) == 0:
            return lo
    return None
