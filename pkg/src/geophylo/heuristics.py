"""Fast constructive and local-search heuristics for leader crossing minimization.

All heuristics return ``(LeafOrder, crossings)`` where the count is always a
fresh geometric recount of the returned order, never the internal proxy value
the heuristic optimized.
"""

from __future__ import annotations

from .internal import get_measure, optimize_internal
from .model import CrossingCounter, Geophylogeny, LeaderType
from .tree import LeafOrder


def bottom_up(g: Geophylogeny, ltype, counter: CrossingCounter | None = None
              ) -> tuple[LeafOrder, int]:
    """Post-order DP picking per-vertex rotations by subtree-local crossings.

    For each vertex and start position the two child arrangements are
    combined; the inter-sibling cost counts only crossings among the leaders
    of this subtree, so the result is a heuristic, not an optimum.
    """
    ltype = LeaderType.parse(ltype)
    counter = counter or CrossingCounter(g, ltype)
    tree = g.tree
    n = tree.n

    # best[(v, i)] = (cost, labels left to right) for T(v) starting at position i
    best: dict[tuple[int, int], tuple[int, tuple[str, ...]]] = {}
    for v in reversed(range(len(tree._children))):
        size = tree.subtree_size(v)
        for i in range(1, n - size + 2):
            if tree.is_leaf(v):
                best[(v, i)] = (0, (tree.label(v),))
                continue
            x, y = tree.children(v)
            nx = tree.subtree_size(x)
            ny = tree.subtree_size(y)
            picked = None
            for left, right, off in ((x, y, nx), (y, x, ny)):
                cl, al = best[(left, i)]
                cr, ar = best[(right, i + off)]
                between = 0
                for da, a in enumerate(al):
                    for db, b in enumerate(ar):
                        if counter.pair_crosses(a, i + da, b, i + off + db):
                            between += 1
                cand = (cl + cr + between, al + ar)
                if picked is None or cand[0] < picked[0]:
                    picked = cand
            best[(v, i)] = picked

    order = LeafOrder.from_order(tree, best[(tree.root, 1)][1])
    return order, counter.count(order.order)


def top_down(g: Geophylogeny, ltype, counter: CrossingCounter | None = None
             ) -> tuple[LeafOrder, int]:
    """Pre-order rotation choice by sites stranded across the split line.

    At each vertex the vertical line between the two child blocks is placed
    midway between the adjacent anchors; the rotation leaving fewer leaders
    across that line wins (a leader touching the line counts as crossing,
    ties keep the neutral rotation).
    """
    ltype = LeaderType.parse(ltype)
    tree = g.tree
    n = tree.n
    bits = [0] * len(tree.internal)
    slot = {v: k for k, v in enumerate(tree.internal)}

    def stranded(labels_left, labels_right, split_pos: int) -> int:
        # split abscissa between anchor columns split_pos and split_pos + 1
        s = (g.anchor(split_pos)[0] + g.anchor(split_pos + 1)[0]) / 2
        count = 0
        for lab in labels_left:
            if g.sites[lab][0] >= s:
                count += 1
        for lab in labels_right:
            if g.sites[lab][0] <= s:
                count += 1
        return count

    def walk(v: int, i: int):
        if tree.is_leaf(v):
            return
        x, y = tree.children(v)
        nx = tree.subtree_size(x)
        ny = tree.subtree_size(y)
        lx = [tree.label(l) for l in tree.leaves_under(x)]
        ly = [tree.label(l) for l in tree.leaves_under(y)]
        keep = stranded(lx, ly, i + nx - 1)
        flip = stranded(ly, lx, i + ny - 1)
        bit = 0 if keep <= flip else 1
        bits[slot[v]] = bit
        left, right = (x, y) if bit == 0 else (y, x)
        walk(left, i)
        walk(right, i + tree.subtree_size(left))

    walk(tree.root, 1)
    order = LeafOrder.from_rotations(tree, bits)
    counter = counter or CrossingCounter(g, ltype)
    return order, counter.count(order.order)


def leaf_additive_heuristic(g: Geophylogeny, ltype, measure,
                            counter: CrossingCounter | None = None
                            ) -> tuple[LeafOrder, int]:
    """Order optimizing an internal-labeling measure, crossings recounted."""
    ltype = LeaderType.parse(ltype)
    counter = counter or CrossingCounter(g, ltype)
    order, _ = optimize_internal(g, get_measure(measure))
    return order, counter.count(order.order)


def greedy(g: Geophylogeny, ltype, start: LeafOrder,
           counter: CrossingCounter | None = None) -> tuple[LeafOrder, int]:
    """Hill climbing over single rotations, first improvement per scan."""
    ltype = LeaderType.parse(ltype)
    counter = counter or CrossingCounter(g, ltype)
    tree = g.tree
    bits = list(start.rotations)
    cost = counter.count(start.order)
    improved = True
    while improved:
        improved = False
        for k in range(len(bits)):
            bits[k] ^= 1
            cand = LeafOrder.from_rotations(tree, bits)
            c = counter.count(cand.order)
            if c < cost:
                cost = c
                improved = True
            else:
                bits[k] ^= 1
    return LeafOrder.from_rotations(tree, bits), cost


class PipelineError(ValueError):
    pass


def _named(g: Geophylogeny, ltype, name: str, counter: CrossingCounter
           ) -> tuple[LeafOrder, int]:
    if name == "bu":
        return bottom_up(g, ltype, counter)
    if name == "td":
        return top_down(g, ltype, counter)
    if name.startswith("la:"):
        return leaf_additive_heuristic(g, ltype, name[3:], counter)
    raise PipelineError(f"unknown heuristic {name!r}")


def run_pipeline(g: Geophylogeny, ltype, spec: str) -> tuple[LeafOrder, int]:
    """Run a combinator string such as "best(bu,td,la:xhop)+greedy".

    Steps are separated by '+'.  A step is a heuristic name, "greedy"
    (refining the incumbent), or "best(a,b,...)" taking the minimum over
    several heuristics.
    """
    ltype = LeaderType.parse(ltype)
    counter = CrossingCounter(g, ltype)
    incumbent: tuple[LeafOrder, int] | None = None
    for step in spec.split("+"):
        step = step.strip()
        if not step:
            raise PipelineError("empty pipeline step")
        if step == "greedy":
            start = incumbent[0] if incumbent else LeafOrder.neutral(g.tree)
            result = greedy(g, ltype, start, counter)
        elif step.startswith("best(") and step.endswith(")"):
            names = [p.strip() for p in step[5:-1].split(",") if p.strip()]
            if not names:
                raise PipelineError("best() needs at least one heuristic")
            result = min(
                (_named(g, ltype, name, counter) for name in names),
                key=lambda r: r[1],
            )
        else:
            result = _named(g, ltype, step, counter)
        if incumbent is None or result[1] < incumbent[1]:
            incumbent = result
    return incumbent
