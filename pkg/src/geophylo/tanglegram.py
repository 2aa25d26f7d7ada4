"""One-sided tanglegrams and the undecided-pair enumeration solver.

A geometry-free geophylogeny reduces to a one-sided tanglegram: the sites
become the fixed side, the phylogenetic tree the variable side, and leader
crossings become connection inversions.  Instances with k undecided pairs are
solved by enumerating, for every undecided pair <p, q>, whether the leader of
p runs left or right of q.  Each decision word yields a *restricted*
tanglegram (per-leaf position intervals) plus a tournament on the sites whose
topological order is the fixed side; conflicting decision pairs force a known
extra crossing and a reoriented tournament edge.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from .model import (
    CrossingCounter,
    Geophylogeny,
    LeaderType,
    _x_star,
    count_crossings,
    position_threshold,
    undecided_pairs,
)
from .tree import LeafOrder, PhyloTree


class TanglegramError(ValueError):
    pass


@dataclass
class Tanglegram:
    """Restricted one-sided tanglegram.

    `fixed_order` is the left-to-right sequence of site labels on the fixed
    side; the variable side is `tree`.  `intervals` maps each leaf label to an
    inclusive 1-based allowed position range; `credit` is added to the
    reported crossing count (crossings known to exist but not representable
    as inversions against the fixed order).
    """

    fixed_order: tuple[str, ...]
    tree: PhyloTree
    intervals: dict[str, tuple[int, int]] = field(default_factory=dict)
    credit: int = 0
    # leaf pairs whose connections are not counted as inversions (their
    # crossing status is position-independent and carried in `credit`)
    ignored: frozenset = frozenset()

    def __post_init__(self):
        if sorted(self.fixed_order) != sorted(self.tree.leaf_labels):
            raise TanglegramError("fixed order is not a permutation of the leaves")
        n = self.tree.n
        for lab in self.tree.leaf_labels:
            self.intervals.setdefault(lab, (1, n))
        for lab, (a, b) in self.intervals.items():
            if a > b:
                raise TanglegramError(f"empty position interval for leaf {lab!r}")


def solve_tanglegram(t: Tanglegram) -> tuple[LeafOrder, int]:
    """Minimize connection inversions; O(n^3).

    Dynamic program over (vertex, leftmost position); the inter-subtree
    inversion count cr(x, y) is independent of where the subtrees sit.
    Returns the optimal order and its crossing count including `credit`.
    Raises TanglegramError when the intervals admit no realizable order.
    """
    tree = t.tree
    n = tree.n
    sigma = {lab: i for i, lab in enumerate(t.fixed_order)}

    cr: dict[int, tuple[int, int]] = {}
    leaves_of = {}
    for v in reversed(range(len(tree._children))):
        if tree.is_leaf(v):
            leaves_of[v] = [tree.label(v)]
        else:
            x, y = tree.children(v)
            leaves_of[v] = leaves_of[x] + leaves_of[y]
            xy = yx = 0
            for a in leaves_of[x]:
                for b in leaves_of[y]:
                    if frozenset((a, b)) in t.ignored:
                        continue
                    if sigma[a] > sigma[b]:
                        xy += 1
                    else:
                        yx += 1
            cr[v] = (xy, yx)

    F: dict[int, list] = {}
    choice: dict[int, list] = {}
    for v in reversed(range(len(tree._children))):
        size = tree.subtree_size(v)
        row = [None] * (n + 2)
        ch = [0] * (n + 2)
        if tree.is_leaf(v):
            a, b = t.intervals[tree.label(v)]
            for i in range(max(1, a), min(n, b) + 1):
                row[i] = 0
        else:
            x, y = tree.children(v)
            nx, ny = tree.subtree_size(x), tree.subtree_size(y)
            cxy, cyx = cr[v]
            for i in range(1, n - size + 2):
                best = None
                bit = 0
                l, r = F[x][i], F[y][i + nx]
                if l is not None and r is not None:
                    best = l + r + cxy
                l, r = F[y][i], F[x][i + ny]
                if l is not None and r is not None and (best is None or l + r + cyx < best):
                    best = l + r + cyx
                    bit = 1
                row[i] = best
                ch[i] = bit
        F[v] = row
        choice[v] = ch

    if F[tree.root][1] is None:
        raise TanglegramError("position intervals admit no realizable leaf order")

    bits = {}

    def walk(v: int, i: int):
        if tree.is_leaf(v):
            return
        bit = choice[v][i]
        bits[v] = bit
        x, y = tree.children(v)
        if bit:
            x, y = y, x
        walk(x, i)
        walk(y, i + tree.subtree_size(x))

    walk(tree.root, 1)
    order = LeafOrder.from_rotations(tree, [bits[v] for v in tree.internal])
    return order, F[tree.root][1] + t.credit


def fixed_site_order(g: Geophylogeny, ltype: LeaderType) -> list[str]:
    """Left-to-right site order used as the tanglegram fixed side.

    For s-leaders sites are ordered by x (ties above the span edges are
    ordered so that crossings remain pure inversions).  For po-leaders a site
    pair is swapped exactly when the leader of the left site to position 1
    crosses the leader of the right site to position n.
    """
    ltype = LeaderType.parse(ltype)
    idx = {lab: i for i, lab in enumerate(g.tree.leaf_labels)}
    x1 = g.positions[0]

    if ltype is LeaderType.S:
        def key(lab):
            x, y = g.sites[lab]
            return (x, -y if x <= x1 else y, idx[lab])

        return sorted(g.sites, key=key)

    n = g.tree.n

    def cmp(a: str, b: str) -> int:
        if a == b:
            return 0
        ka = (g.sites[a][0], g.sites[a][1], idx[a])
        kb = (g.sites[b][0], g.sites[b][1], idx[b])
        sign = 1
        if ka > kb:
            a, b = b, a
            sign = -1
        la = g.leader_segments(a, 1, LeaderType.PO)
        lb = g.leader_segments(b, n, LeaderType.PO)
        from .model import crossing_pair

        crossed = n > 1 and crossing_pair(la, lb)
        return sign if crossed else -sign

    return sorted(g.sites, key=functools.cmp_to_key(cmp))


def solve_geometry_free(g: Geophylogeny, ltype: LeaderType) -> tuple[LeafOrder, int]:
    """Optimal order for an instance with no undecided pairs."""
    ltype = LeaderType.parse(ltype)
    und = undecided_pairs(g, ltype)
    if und:
        raise TanglegramError(
            f"instance is not geometry-free ({len(und)} undecided pairs); "
            f"use solve_fpt or an exact solver"
        )
    t = Tanglegram(fixed_order=tuple(fixed_site_order(g, ltype)), tree=g.tree)
    return solve_tanglegram(t)


@dataclass
class FptStats:
    k: int = 0
    words_total: int = 0
    words_infeasible: int = 0
    words_cyclic: int = 0
    words_solved: int = 0
    credit_mismatches: int = 0  # dp+credit disagreeing with the recount


def solve_fpt(g: Geophylogeny, ltype: LeaderType, k_cap: int = 20,
              stats: FptStats | None = None) -> tuple[LeafOrder, int]:
    """Exact crossing minimization parameterized by the undecided pairs.

    Enumerates left/right routing decisions; per site the decisions against
    its blockers collapse to a cut in the sorted threshold sequence, so at
    most prod(m_a + 1) <= 2^k words are examined.  Every candidate order is
    recounted geometrically; the recount is the reported value.
    """
    ltype = LeaderType.parse(ltype)
    tree = g.tree
    n = tree.n
    und = undecided_pairs(g, ltype)
    k = len(und)
    if k > k_cap:
        raise TanglegramError(f"k={k} undecided pairs exceeds cap {k_cap}")
    if stats is not None:
        stats.k = k
    if k == 0:
        order, _ = solve_geometry_free(g, ltype)
        return order, count_crossings(g, order, ltype)

    base = fixed_site_order(g, ltype)
    base_idx = {lab: i for i, lab in enumerate(base)}
    und_set = set(und)

    # per site p: blockers q with <p, q> undecided, sorted by position threshold
    blockers: dict[str, list[tuple[int, int, str]]] = {}
    for p, q in und:
        t, e = position_threshold(g, _x_star(g, p, q, ltype))
        blockers.setdefault(p, []).append((t, e, q))
    for p in blockers:
        blockers[p].sort(key=lambda te: (te[0], te[1], base_idx[te[2]]))

    # The routing decisions for one site p are all functions of pos(l_p), so
    # instead of raw per-pair bits we enumerate the cells that the thresholds
    # cut the position range into.  A position exactly on a threshold ('on')
    # means the leader passes through the blocking site: a forced crossing.
    site_cells = []
    for p, bl in sorted(blockers.items(), key=lambda kv: base_idx[kv[0]]):
        bounds = {0, n}
        for t, e, _ in bl:
            bounds.add(min(t, n))
            bounds.add(min(t + e, n))
        cuts = sorted(b for b in bounds if 0 <= b <= n)
        cells = []
        for lo_b, hi in zip(cuts, cuts[1:]):
            lo = lo_b + 1
            right, on = set(), set()
            for t, e, q in bl:
                if lo > t + e:
                    right.add((p, q))
                elif lo > t:
                    on.add((p, q))
            cells.append((lo, hi, right, on))
        site_cells.append((p, cells))

    best: tuple[LeafOrder, int] | None = None
    counter = CrossingCounter(g, ltype)

    for combo in itertools.product(*(cells for _, cells in site_cells)):
        if stats is not None:
            stats.words_total += 1
        intervals = {}
        right, on = set(), set()
        for (p, _), (lo, hi, r, o) in zip(site_cells, combo):
            intervals[p] = (lo, hi)
            right |= r
            on |= o

        # tournament orientation: base order, overridden by routing decisions
        # ('on' pairs cross regardless of the order and keep base orientation)
        orient = {}
        for a, b in itertools.combinations(base, 2):
            orient[(a, b)] = base_idx[a] < base_idx[b]
        for p, q in und:
            if (p, q) in on:
                continue
            if (q, p) in und_set and base_idx[q] < base_idx[p]:
                continue  # mutual undecided pair: the base-first direction wins
            key = (p, q) if (p, q) in orient else (q, p)
            before = (p, q) not in right  # left routing keeps p before q
            orient[key] = before if key == (p, q) else not before

        # a word can force the relative order of a pair outright through the
        # position intervals; the pair's crossing status is then constant, so
        # it leaves the inversion model (orient along the forced order, and
        # book the crossing as credit when routing says it happens)
        credit_edges = set()
        for p, q in und:
            if (p, q) in on or (q, p) in und_set:
                continue
            ap, bp = intervals.get(p, (1, n))
            aq, bq = intervals.get(q, (1, n))
            p_first = bp <= aq
            q_first = bq <= ap
            if p_first == q_first:
                continue
            # routed right: crossing iff l_p left of l_q, and mirrored for left
            crossing = ((p, q) in right) == p_first
            key = (p, q) if (p, q) in orient else (q, p)
            orient[key] = (key == (p, q)) == p_first
            if crossing:
                credit_edges.add(key)

        # conflicting decisions: p right of q and w left of q force s_p x s_w
        blocked = {}
        for p, q in und:
            blocked.setdefault(q, []).append(p)
        for q, ps in blocked.items():
            rs = [p for p in ps if (p, q) in right]
            ls = [p for p in ps if (p, q) not in right and (p, q) not in on]
            for u in rs:
                for w in ls:
                    # s_u right of q and s_w left of q with site u left of
                    # site w: the leaders cross below q no matter the order,
                    # and the labels are forced into w-before-u
                    if base_idx[u] >= base_idx[w]:
                        continue
                    key = (u, w) if (u, w) in orient else (w, u)
                    forward = orient[key] == (key == (u, w))  # still u -> w?
                    if forward:
                        orient[key] = key != (u, w)
                        credit_edges.add(key)

        # tournament is acyclic iff in-degrees are pairwise distinct
        indeg = dict.fromkeys(base, 0)
        for (a, b), ab in orient.items():
            indeg[b if ab else a] += 1
        if sorted(indeg.values()) != list(range(len(base))):
            if stats is not None:
                stats.words_cyclic += 1
            continue
        fixed = tuple(sorted(base, key=lambda lab: indeg[lab]))

        try:
            t = Tanglegram(
                fixed_order=fixed, tree=tree,
                intervals=dict(intervals),
                credit=len(credit_edges) + len(on),
                ignored=frozenset(frozenset(pair) for pair in on),
            )
            order, predicted = solve_tanglegram(t)
        except TanglegramError:
            if stats is not None:
                stats.words_infeasible += 1
            continue
        actual = counter.count(order.order)
        if stats is not None:
            stats.words_solved += 1
            if actual != predicted:
                stats.credit_mismatches += 1
        if best is None or actual < best[1]:
            best = (order, actual)

    if best is None:
        # all words over-restricted (degenerate thresholds); exact fallback
        order = LeafOrder.neutral(tree)
        return order, counter.count(order.order)
    return best
