"""Geophylogenies: tree + map + sites + layout, leader crossings, pair classes."""

from __future__ import annotations

import bisect
import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Point, point_in_triangle, segments_intersect
from .tree import LeafOrder, PhyloTree, TreeError


class LeaderType(enum.Enum):
    S = "s"
    PO = "po"

    @staticmethod
    def parse(value) -> "LeaderType":
        if isinstance(value, LeaderType):
            return value
        try:
            return LeaderType(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown leader type {value!r}") from None


class ModelError(ValueError):
    pass


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ModelError(f"coordinates must be exact (int, Fraction or decimal string), got {type(v).__name__}")


class Geophylogeny:
    """A phylogenetic tree drawn above a rectangular map with one site per leaf.

    The layout fixes leaf-position x-coordinates X(1..n) (strictly increasing)
    and the y-coordinate `ytop` of the leaf row; the only remaining freedom is
    the embedding of the tree.
    """

    def __init__(self, tree: PhyloTree, width, height, sites: dict,
                 positions: Sequence | None = None, ytop=None):
        self.tree = tree
        self.width = _frac(width)
        self.height = _frac(height)
        if self.width <= 0 or self.height <= 0:
            raise ModelError("map dimensions must be positive")
        self.sites: dict[str, Point] = {}
        labels = set(tree.leaf_labels)
        for lab, (x, y) in sites.items():
            if lab not in labels:
                raise ModelError(f"site for unknown leaf {lab!r}")
            x, y = _frac(x), _frac(y)
            if not (0 <= x <= self.width and 0 <= y <= self.height):
                raise ModelError(f"site {lab!r} at ({x}, {y}) lies outside the map")
            self.sites[lab] = (x, y)
        missing = labels - set(self.sites)
        if missing:
            raise ModelError(f"missing site for leaf {sorted(missing)[0]!r}")

        n = tree.n
        if positions is None:
            if n == 1:
                positions = [self.width / 2]
            else:
                positions = [Fraction(i) * self.width / (n - 1) for i in range(n)]
        self.positions: tuple[Fraction, ...] = tuple(_frac(x) for x in positions)
        if len(self.positions) != n:
            raise ModelError(f"layout has {len(self.positions)} positions for {n} leaves")
        if any(a >= b for a, b in zip(self.positions, self.positions[1:])):
            raise ModelError("leaf positions must be strictly increasing")
        self.ytop = self.height if ytop is None else _frac(ytop)
        if self.ytop < self.height:
            raise ModelError("ytop must lie on or above the upper map boundary")

    @property
    def n(self) -> int:
        return self.tree.n

    def anchor(self, position: int) -> Point:
        """Leaf anchor point for a 1-based position."""
        return (self.positions[position - 1], self.ytop)

    def leader_segments(self, label: str, position: int, ltype: LeaderType):
        """Segments making up the leader of `label` anchored at `position`."""
        site = self.sites[label]
        ax, ay = self.anchor(position)
        if ltype is LeaderType.S:
            return [(site, (ax, ay))]
        bend = (ax, site[1])
        return [(site, bend), (bend, (ax, ay))]

    def site_x_rank(self) -> dict[str, int]:
        """1-based rank of each site sorted by x (ties: y, then leaf order)."""
        cached = getattr(self, "_x_rank", None)
        if cached is None:
            idx = {lab: i for i, lab in enumerate(self.tree.leaf_labels)}
            labs = sorted(
                self.sites,
                key=lambda l: (self.sites[l][0], self.sites[l][1], idx[l]),
            )
            cached = self._x_rank = {lab: i + 1 for i, lab in enumerate(labs)}
        return cached

    def __repr__(self):
        return f"Geophylogeny(n={self.n}, map={self.width}x{self.height})"


def crossing_pair(seg_a, seg_b) -> bool:
    """Whether two leaders (given as segment lists) share any point."""
    for s1 in seg_a:
        for s2 in seg_b:
            if segments_intersect(s1[0], s1[1], s2[0], s2[1]):
                return True
    return False


def leaders_cross(g: Geophylogeny, ltype: LeaderType,
                  label_a: str, pos_a: int, label_b: str, pos_b: int) -> bool:
    if pos_a == pos_b:
        raise ModelError("leaders must anchor at distinct positions")
    return crossing_pair(
        g.leader_segments(label_a, pos_a, ltype),
        g.leader_segments(label_b, pos_b, ltype),
    )


def count_crossings(g: Geophylogeny, order, ltype: LeaderType) -> int:
    """Number of crossing leader pairs; exact, O(n^2) pair predicates."""
    ltype = LeaderType.parse(ltype)
    order = _as_order(g.tree, order)
    labs = order.order
    segs = [g.leader_segments(lab, i + 1, ltype) for i, lab in enumerate(labs)]
    total = 0
    for i in range(len(labs)):
        for j in range(i + 1, len(labs)):
            if crossing_pair(segs[i], segs[j]):
                total += 1
    return total


def _as_order(tree: PhyloTree, order) -> LeafOrder:
    if isinstance(order, LeafOrder):
        return order
    return LeafOrder.from_order(tree, order)


# -- pair classification ----------------------------------------------------


class PairKind(enum.Enum):
    GEOMETRY_FREE = "geometry_free"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class PairClass:
    """Classification of the ordered site pair <p_i, p_j> for one leader type."""

    pair: tuple[str, str]
    kind: PairKind
    ltype: LeaderType


def in_s_area(g: Geophylogeny, a: str, b: str) -> bool:
    """Is site b inside the closed triangle spanned by site a and the leaf row?"""
    pa = g.sites[a]
    left = (g.positions[0], g.ytop)
    right = (g.positions[-1], g.ytop)
    return point_in_triangle(g.sites[b], pa, left, right)


def in_po_area(g: Geophylogeny, a: str, b: str) -> bool:
    """Is site b inside the closed rectangle above site a spanning the leaf row?"""
    xb, yb = g.sites[b]
    return g.positions[0] <= xb <= g.positions[-1] and yb >= g.sites[a][1]


def classify_pairs(g: Geophylogeny, ltype: LeaderType) -> list[PairClass]:
    """Classify all n(n-1) ordered site pairs as geometry-free or undecided."""
    ltype = LeaderType.parse(ltype)
    contains = in_s_area if ltype is LeaderType.S else in_po_area
    out = []
    labs = g.tree.leaf_labels
    for a in labs:
        for b in labs:
            if a == b:
                continue
            kind = PairKind.UNDECIDED if contains(g, a, b) else PairKind.GEOMETRY_FREE
            out.append(PairClass(pair=(a, b), kind=kind, ltype=ltype))
    return out


def undecided_pairs(g: Geophylogeny, ltype: LeaderType) -> list[tuple[str, str]]:
    return [pc.pair for pc in classify_pairs(g, ltype) if pc.kind is PairKind.UNDECIDED]


# -- fast exact crossing counter ---------------------------------------------


def _x_star(g: Geophylogeny, a: str, b: str, ltype: LeaderType) -> Fraction:
    """x-coordinate where the leader of a, extended through b, meets the leaf row.

    Only defined for undecided pairs <a, b>; for those y(b) > y(a) holds for
    s-leaders (po-leaders use the vertical line through b).
    """
    xa, ya = g.sites[a]
    xb, yb = g.sites[b]
    if ltype is LeaderType.PO:
        return xb
    if yb <= ya:
        raise ModelError("x* of an s-pair requires the blocking site strictly above")
    return xa + (xb - xa) * (g.ytop - ya) / (yb - ya)


def position_threshold(g: Geophylogeny, xstar: Fraction) -> tuple[int, int]:
    """(t, e): t positions have X < xstar, e positions have X == xstar."""
    # positions are strictly increasing, so two bisections suffice
    t = bisect.bisect_left(g.positions, xstar)
    e = bisect.bisect_right(g.positions, xstar) - t
    return t, e


class CrossingCounter:
    """Precomputed per-pair crossing rules, evaluated with integer positions.

    The rules are derived from the geometry-free / undecided classification;
    `count_crossings` (pure segment predicates) is the reference they are
    tested against.
    """

    def __init__(self, g: Geophylogeny, ltype: LeaderType):
        self.g = g
        self.ltype = LeaderType.parse(ltype)
        tree = g.tree
        labs = tree.leaf_labels
        contains = in_s_area if self.ltype is LeaderType.S else in_po_area
        neutral = LeafOrder.neutral(tree)
        npos = neutral.position

        # rules: list of tuples, one per unordered pair
        #   ("free", ia, ib, cross_when_same_relative_order_as_neutral)
        #   ("und", ip, iq, t, e)  -- p's leader decided against threshold
        #   ("table", ia, ib, memo) -- rare fallback (e.g. equal-height po pairs)
        self.index = {lab: i for i, lab in enumerate(labs)}
        rules = []
        self.k = 0
        for a, b in itertools.combinations(labs, 2):
            und_ab = contains(g, a, b)
            und_ba = contains(g, b, a)
            self.k += int(und_ab) + int(und_ba)
            ia, ib = self.index[a], self.index[b]
            if und_ab and und_ba:
                rules.append(("table", ia, ib, a, b, {}))
            elif und_ab or und_ba:
                p, q = (a, b) if und_ab else (b, a)
                t, e = position_threshold(g, _x_star(g, p, q, self.ltype))
                rules.append(("und", self.index[p], self.index[q], t, e))
            else:
                cross_neutral = leaders_cross(g, self.ltype, a, npos[a], b, npos[b])
                neutral_rel = npos[a] < npos[b]
                rules.append(("free", ia, ib, cross_neutral, neutral_rel))
        self.rules = rules
        self._by_pair = {}
        for rule in rules:
            ia, ib = rule[1], rule[2]
            self._by_pair[(min(ia, ib), max(ia, ib))] = rule

    def count(self, order: Sequence[str]) -> int:
        pos = [0] * len(order)
        idx = self.index
        for i, lab in enumerate(order):
            pos[idx[lab]] = i + 1
        total = 0
        for rule in self.rules:
            tag = rule[0]
            if tag == "free":
                _, ia, ib, cross_neutral, neutral_rel = rule
                if ((pos[ia] < pos[ib]) == neutral_rel) == cross_neutral:
                    total += 1
            elif tag == "und":
                _, ip, iq, t, e = rule
                pp = pos[ip]
                if pp <= t:
                    total += pp > pos[iq]
                elif pp <= t + e:
                    total += 1  # anchor exactly on the extended leader
                else:
                    total += pp < pos[iq]
            else:
                _, ia, ib, a, b, memo = rule
                key = (pos[ia], pos[ib])
                hit = memo.get(key)
                if hit is None:
                    hit = leaders_cross(self.g, self.ltype, a, pos[ia], b, pos[ib])
                    memo[key] = hit
                total += hit
        return total

    def pair_crosses(self, a: str, pa: int, b: str, pb: int) -> bool:
        """Single-pair crossing test at the given anchor positions."""
        ia, ib = self.index[a], self.index[b]
        rule = self._by_pair[(min(ia, ib), max(ia, ib))]
        tag = rule[0]
        if tag == "free":
            _, ra, rb, cross_neutral, neutral_rel = rule
            rel = pa < pb if ra == ia else pb < pa
            return (rel == neutral_rel) == cross_neutral
        if tag == "und":
            _, ip, iq, t, e = rule
            pp, pq = (pa, pb) if ip == ia else (pb, pa)
            if pp <= t:
                return pp > pq
            if pp <= t + e:
                return True
            return pp < pq
        _, ra, rb, la, lb, memo = rule
        key = (pa, pb) if ra == ia else (pb, pa)
        hit = memo.get(key)
        if hit is None:
            hit = leaders_cross(self.g, self.ltype, la, key[0], lb, key[1])
            memo[key] = hit
        return hit


def brute_force_min(g: Geophylogeny, ltype: LeaderType, cap: int = 14
                    ) -> tuple[LeafOrder, int]:
    """Exhaustive optimum over all 2^(n-1) embeddings.

    Ties are broken toward the lexicographically smallest rotation-bit vector.
    """
    ltype = LeaderType.parse(ltype)
    tree = g.tree
    if tree.n > cap:
        raise ModelError(
            f"brute force refused: n={tree.n} exceeds cap {cap} "
            f"({2 ** (tree.n - 1)} embeddings)"
        )
    counter = CrossingCounter(g, ltype)
    best: tuple[LeafOrder, int] | None = None
    for bits in itertools.product((0, 1), repeat=len(tree.internal)):
        lo = LeafOrder.from_rotations(tree, bits)
        c = counter.count(lo.order)
        if best is None or c < best[1]:
            best = (lo, c)
    assert best is not None
    return best


def constrained_brute_force_min(
    g: Geophylogeny, ltype: LeaderType,
    pins: dict[str, int] | None = None,
    ranges: dict[str, tuple[int, int]] | None = None,
    fixed_rotations: dict[str, int] | None = None,
    cap: int = 14,
) -> tuple[LeafOrder, int] | None:
    """Brute force restricted to orders satisfying pins/ranges/rotation locks.

    Returns None when no realizable order satisfies the constraints.
    """
    ltype = LeaderType.parse(ltype)
    tree = g.tree
    if tree.n > cap:
        raise ModelError(f"brute force refused: n={tree.n} exceeds cap {cap}")
    pins = pins or {}
    ranges = ranges or {}
    fixed = {}
    for name, bit in (fixed_rotations or {}).items():
        fixed[tree.internal.index(tree.internal_by_name(name))] = int(bit)
    counter = CrossingCounter(g, ltype)
    best = None
    for bits in itertools.product((0, 1), repeat=len(tree.internal)):
        if any(bits[k] != v for k, v in fixed.items()):
            continue
        lo = LeafOrder.from_rotations(tree, bits)
        pos = lo.position
        if any(pos[lab] != p for lab, p in pins.items()):
            continue
        if any(not (r[0] <= pos[lab] <= r[1]) for lab, r in ranges.items()):
            continue
        c = counter.count(lo.order)
        if best is None or c < best[1]:
            best = (lo, c)
    return best
