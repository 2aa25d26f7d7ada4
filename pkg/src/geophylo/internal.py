"""Internal labeling: leaf-additive quality measures and the exact leaf-order DP.

A measure assigns each (leaf, position) pair a cost that depends only on the
leaf's own site and the position's coordinates.  The optimizer runs a dynamic
program over (vertex, leftmost position) cells:

    F(v, i) = min{ F(x, i) + F(y, i + n(x)),  F(y, i) + F(x, i + n(y)) }

with per-leaf position constraints and per-vertex fixed rotations expressed
as infinite table entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .geometry import rational_sqrt
from .model import Geophylogeny
from .tree import LeafOrder, PhyloTree, TreeError


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class Measure:
    """Leaf-additive quality measure.

    `evaluator(g, label, position)` returns an exact Fraction cost.
    """

    name: str
    evaluator: Callable[[Geophylogeny, str, int], Fraction]
    direction: str = "min"  # or "max"

    def cost(self, g: Geophylogeny, label: str, position: int) -> Fraction:
        v = self.evaluator(g, label, position)
        return -v if self.direction == "max" else v


def _sumdist(g: Geophylogeny, label: str, position: int) -> Fraction:
    px, py = g.sites[label]
    ax, ay = g.anchor(position)
    return rational_sqrt((px - ax) ** 2 + (py - ay) ** 2)


def _xoffset(g: Geophylogeny, label: str, position: int) -> Fraction:
    return abs(g.sites[label][0] - g.positions[position - 1])


def _xhop(g: Geophylogeny, label: str, position: int) -> Fraction:
    return Fraction(abs(g.site_x_rank()[label] - position))


BUILTIN_MEASURES = {
    "sumdist": Measure("sumdist", _sumdist),
    "xoffset": Measure("xoffset", _xoffset),
    "xhop": Measure("xhop", _xhop),
}


def get_measure(name) -> Measure:
    if isinstance(name, Measure):
        return name
    try:
        return BUILTIN_MEASURES[str(name)]
    except KeyError:
        raise ValueError(
            f"unknown measure {name!r} (built-ins: {sorted(BUILTIN_MEASURES)})"
        ) from None


@dataclass
class Constraints:
    """Per-leaf allowed position sets and per-vertex fixed rotations.

    `pins` maps a leaf label to one position; `ranges` to an inclusive
    (lo, hi) interval; `fixed_rotations` maps internal vertex names (v0, v1,
    ...) to a rotation bit.
    """

    pins: dict[str, int] = field(default_factory=dict)
    ranges: dict[str, tuple[int, int]] = field(default_factory=dict)
    fixed_rotations: dict[str, int] = field(default_factory=dict)

    def validate(self, tree: PhyloTree) -> None:
        n = tree.n
        labels = set(tree.leaf_labels)
        for lab, p in self.pins.items():
            if lab not in labels:
                raise ConstraintError(f"pin for unknown leaf {lab!r}")
            if not 1 <= p <= n:
                raise ConstraintError(f"pin {lab!r}@{p} outside positions 1..{n}")
        for lab, (lo, hi) in self.ranges.items():
            if lab not in labels:
                raise ConstraintError(f"range for unknown leaf {lab!r}")
            if lo > hi or hi < 1 or lo > n:
                raise ConstraintError(f"empty allowed range for leaf {lab!r}")
        for name, bit in self.fixed_rotations.items():
            tree.internal_by_name(name)  # raises on unknown name
            if bit not in (0, 1):
                raise ConstraintError(f"rotation for {name} must be 0 or 1")

    def allows(self, label: str, position: int) -> bool:
        if label in self.pins and self.pins[label] != position:
            return False
        if label in self.ranges:
            lo, hi = self.ranges[label]
            if not lo <= position <= hi:
                return False
        return True

    def satisfied_by(self, order: LeafOrder, tree: PhyloTree | None = None) -> bool:
        pos = order.position
        if not all(self.allows(lab, pos[lab]) for lab in pos):
            return False
        if self.fixed_rotations:
            if tree is None:
                raise ConstraintError(
                    "a tree is required to check fixed rotations"
                )
            for name, bit in self.fixed_rotations.items():
                k = tree.internal.index(tree.internal_by_name(name))
                if order.rotations[k] != bit:
                    return False
        return True


def measure_value(g: Geophylogeny, measure, order) -> Fraction:
    measure = get_measure(measure)
    if not isinstance(order, LeafOrder):
        order = LeafOrder.from_order(g.tree, order)
    total = Fraction(0)
    for i, lab in enumerate(order.order):
        total += measure.evaluator(g, lab, i + 1)
    return total


def dp_table(g: Geophylogeny, measure, constraints: Constraints | None = None
             ) -> tuple[dict, dict]:
    """The (F, choice) tables of the subtree placement DP.

    F[v][i] is the best total cost of T(v) occupying positions i..i+n(v)-1
    (None = infeasible); choice[v][i] is the rotation bit attaining it.
    """
    measure = get_measure(measure)
    constraints = constraints or Constraints()
    constraints.validate(g.tree)
    tree = g.tree
    n = tree.n

    # F[v][i] = best cost placing T(v) on positions i..i+n(v)-1, None = infeasible
    F: dict[int, list] = {}
    choice: dict[int, list] = {}  # rotation bit chosen per (v, i)

    post = sorted(range(len(tree._children)), key=lambda v: -v)
    for v in post:
        size = tree.subtree_size(v)
        row = [None] * (n + 2)
        ch = [0] * (n + 2)
        if tree.is_leaf(v):
            lab = tree.label(v)
            for i in range(1, n + 1):
                if constraints.allows(lab, i):
                    row[i] = measure.cost(g, lab, i)
        else:
            x, y = tree.children(v)
            nx, ny = tree.subtree_size(x), tree.subtree_size(y)
            fixed = constraints.fixed_rotations.get(tree.vertex_name(v))
            for i in range(1, n - size + 2):
                best = None
                bit = 0
                if fixed != 1:
                    a, b = F[x][i], F[y][i + nx]
                    if a is not None and b is not None:
                        best = a + b
                if fixed != 0:
                    a, b = F[y][i], F[x][i + ny]
                    if a is not None and b is not None and (best is None or a + b < best):
                        best = a + b
                        bit = 1
                row[i] = best
                ch[i] = bit
        if all(c is None for c in row[1:n - size + 2]):
            raise ConstraintError(
                f"constraints infeasible: no placement for subtree of "
                f"{tree.vertex_name(v) if not tree.is_leaf(v) else tree.label(v)!r}"
            )
        F[v] = row
        choice[v] = ch
    return F, choice


def optimize_internal(g: Geophylogeny, measure, constraints: Constraints | None = None
                      ) -> tuple[LeafOrder, Fraction]:
    """Optimal realizable leaf order for a leaf-additive measure.

    O(n^2) table cells; ties prefer the neutral rotation at the
    lowest-numbered vertex.  Raises ConstraintError naming the first vertex
    whose whole table row is infeasible.
    """
    measure = get_measure(measure)
    constraints = constraints or Constraints()
    tree = g.tree
    n = tree.n
    F, choice = dp_table(g, measure, constraints)

    best_i = min(
        (i for i in range(1, n + 1) if F[tree.root][i] is not None),
        key=lambda i: F[tree.root][i],
        default=None,
    )
    if best_i is None:
        raise ConstraintError("constraints infeasible at the root")
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

    walk(tree.root, best_i)
    order = LeafOrder.from_rotations(tree, [bits[v] for v in tree.internal])
    value = F[tree.root][best_i]
    if measure.direction == "max":
        value = -value
    return order, value
