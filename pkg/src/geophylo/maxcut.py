"""Reduction from Max-Cut to leader crossing minimization.

Builds a geophylogeny whose minimum crossing number is k_fix + 2m - maxcut(H):
vertex gadgets (two mirrored subtrees per graph vertex), edge gadgets (four
sites on the central axis), and fixing gadgets of four-leaf units that pin
every block to its designated place.  Used to validate the exact solvers
against a brute-force Max-Cut oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations

from .model import Geophylogeny, LeaderType, count_crossings
from .tree import LeafOrder, PhyloTree


@dataclass(frozen=True)
class MaxCutInput:
    """A simple graph (minimum degree 2, at least 3 edges) and a cut target."""

    edges: tuple[tuple[int, int], ...]
    c: int

    def __post_init__(self):
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        object.__setattr__(self, "edges", edges)
        if len(set(edges)) != len(edges):
            raise ValueError("parallel edges are not allowed")
        if any(a == b for a, b in edges):
            raise ValueError("self-loops are not allowed")
        if len(edges) < 3:
            raise ValueError("need at least 3 edges")
        if self.c < 1:
            raise ValueError("cut target must be positive")
        deg: dict[int, int] = {}
        for a, b in edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        low = [v for v, d in sorted(deg.items()) if d < 2]
        if low:
            raise ValueError(f"vertex {low[0]} has degree below 2")

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for e in self.edges for v in e}))

    @property
    def m(self) -> int:
        return len(self.edges)


def max_cut(inp: MaxCutInput) -> int:
    """Brute-force maximum cut size (exponential, for small graphs only)."""
    verts = inp.vertices
    best = 0
    for mask in range(1 << (len(verts) - 1)):
        side = {v: (mask >> i) & 1 for i, v in enumerate(verts[:-1])}
        side[verts[-1]] = 0
        cut = sum(1 for a, b in inp.edges if side[a] != side[b])
        best = max(best, cut)
    return best


def _caterpillar(items):
    return reduce(lambda acc, x: (acc, x), items)


@dataclass
class _Build:
    inp: MaxCutInput
    ltype: LeaderType
    units: int
    # leaf label blocks in designated left-to-right order
    blocks: list[list[str]] = field(default_factory=list)
    vertex_leaves: dict = field(default_factory=dict)  # (v, primed) -> labels
    unit_leaves: list = field(default_factory=list)    # one 4-label group per unit
    k_fix: int = 0
    structure: tuple = ()


def _plan(inp: MaxCutInput, ltype: LeaderType) -> _Build:
    b = _Build(inp, ltype, max(1, inp.m - inp.c))

    adjacent = sum(
        1 for e, f in combinations(inp.edges, 2) if set(e) & set(f)
    )
    disjoint = inp.m * (inp.m - 1) // 2 - adjacent
    b.k_fix = 3 * adjacent + 4 * disjoint

    for v in inp.vertices:
        for primed in (False, True):
            suffix = "p" if primed else ""
            b.vertex_leaves[(v, primed)] = [
                f"{i}.{j}{suffix}" if i == v else f"{j}.{i}{suffix}"
                for i, j in inp.edges
                if v in (i, j)
            ]

    gadget_count = 0

    def fixing_gadget():
        nonlocal gadget_count
        gid = gadget_count
        gadget_count += 1
        units = []
        for uid in range(b.units):
            tag = f"F{gid}u{uid}"
            group = [f"{tag}a", f"{tag}ap", f"{tag}bp", f"{tag}b"]
            b.unit_leaves.append(group)
            units.append(((group[0], group[1]), (group[2], group[3])))
        return _caterpillar(units), [lab for u in b.unit_leaves[-b.units:] for lab in u]

    def vertex_tree(v, primed):
        labs = b.vertex_leaves[(v, primed)]
        return _caterpillar(labs), labs

    center_struct, center_labs = fixing_gadget()
    inner, order = center_struct, [center_labs]
    for v in inp.vertices:
        tv, tv_labs = vertex_tree(v, False)
        tp, tp_labs = vertex_tree(v, True)
        fl, fl_labs = fixing_gadget()
        fr, fr_labs = fixing_gadget()
        inner = ((fl, ((tv, inner), tp)), fr)
        order = [fl_labs, tv_labs] + order + [tp_labs, fr_labs]
    b.structure = inner
    b.blocks = order
    return b


def _geometry(b: _Build) -> Geophylogeny:
    inp = b.inp
    m = inp.m
    d = 4 if b.ltype is LeaderType.PO else 4 * m * m
    height = 4 * m + 4 + d

    flat = [lab for block in b.blocks for lab in block]
    pos = {lab: i + 1 for i, lab in enumerate(flat)}
    total = len(flat)

    sites: dict[str, tuple] = {}
    # fixing unit sites sit in a band above the edge sites, all four on
    # the vertical through the unit's designated center
    for group in b.unit_leaves:
        x = Fraction(pos[group[0]] + pos[group[3]], 2)
        sites[group[0]] = (x, height - 3)   # a, lowest
        sites[group[1]] = (x, height)       # a', highest
        sites[group[2]] = (x, height - 1)   # b'
        sites[group[3]] = (x, height - 2)   # b

    # edge sites on the central axis: pair h at heights 2h-1, 2h from the
    # bottom and mirrored at the top
    center_block = b.blocks[len(b.blocks) // 2]
    xc = Fraction(pos[center_block[0]] + pos[center_block[-1]], 2)
    for h, (i, j) in enumerate(inp.edges, start=1):
        sites[f"{i}.{j}"] = (xc, 2 * h - 1)
        sites[f"{j}.{i}"] = (xc, 2 * h)
        sites[f"{i}.{j}p"] = (xc, 4 * m - 2 * (h - 1) - 1)
        sites[f"{j}.{i}p"] = (xc, 4 * m - 2 * (h - 1))

    return Geophylogeny(
        PhyloTree(b.structure), total + 1, height, sites,
        positions=list(range(1, total + 1)), ytop=height,
    )


def build_maxcut_instance(inp: MaxCutInput, ltype) -> tuple[Geophylogeny, int, int]:
    """The reduction instance plus (k_threshold, k_fix).

    The instance admits a drawing with at most k_threshold crossings exactly
    when the graph has a cut of size at least c.
    """
    ltype = LeaderType.parse(ltype)
    b = _plan(inp, ltype)
    g = _geometry(b)
    k_threshold = b.k_fix + 2 * inp.m - inp.c
    return g, k_threshold, b.k_fix


def designed_order(g: Geophylogeny, inp: MaxCutInput, ltype,
                   partition: set | frozenset) -> LeafOrder:
    """The intended drawing for one bipartition (vertices in `partition`
    move to the right half), with vertex-gadget orientations hill-climbed.
    """
    ltype = LeaderType.parse(ltype)
    tree = g.tree
    by_leafset = {
        frozenset(tree.label(l) for l in tree.leaves_under(v)): v
        for v in tree.internal
    }
    slot = {v: k for k, v in enumerate(tree.internal)}
    b = _plan(inp, ltype)

    bits = [0] * len(tree.internal)
    for v in inp.vertices:
        if v not in partition:
            continue
        tv = frozenset(b.vertex_leaves[(v, False)])
        tp = frozenset(b.vertex_leaves[(v, True)])
        # A = (T(v), inner); B = (A, T(v')); flipping both swaps the halves
        a_set = min(
            (s for s in by_leafset if tv < s and not (tp & s)), key=len
        )
        bits[slot[by_leafset[a_set]]] ^= 1
        bits[slot[by_leafset[a_set | tp]]] ^= 1

    def spine(labels):
        if len(labels) < 2:
            return []
        root = by_leafset[frozenset(labels)]
        return [slot[w] for w in tree.internal
                if set(tree.leaves_under(w)) <= set(tree.leaves_under(root))]

    spines = [
        spine(b.vertex_leaves[key]) for key in b.vertex_leaves
    ]
    best = LeafOrder.from_rotations(tree, bits)
    cost = count_crossings(g, best, ltype)
    improved = True
    while improved:
        improved = False
        for sp in spines:
            for k in sp:
                bits[k] ^= 1
            cand = LeafOrder.from_rotations(tree, bits)
            c = count_crossings(g, cand, ltype)
            if c < cost:
                best, cost = cand, c
                improved = True
            else:
                for k in sp:
                    bits[k] ^= 1
    return best
