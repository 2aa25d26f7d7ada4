"""Rooted binary trees over labelled leaves and their realizable leaf orders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class TreeError(ValueError):
    pass


class PhyloTree:
    """A rooted binary tree whose leaves carry unique labels.

    The child order given at construction is the *neutral embedding*;
    every other embedding is described by one rotation bit per internal
    vertex.  Internal vertices are numbered v0, v1, ... in preorder of the
    neutral embedding, which keeps their ids stable across rotations.
    """

    def __init__(self, structure):
        # structure: nested 2-tuples of labels, e.g. (("l1", "l2"), "l3")
        self._children: list[tuple[int, int] | None] = []
        self._labels: list[str | None] = []
        self._parent: list[int] = []

        def build(node) -> int:
            idx = len(self._children)
            self._children.append(None)
            self._labels.append(None)
            self._parent.append(-1)
            if isinstance(node, str):
                self._labels[idx] = node
            else:
                if not isinstance(node, tuple) or len(node) != 2:
                    raise TreeError(f"internal node must have exactly 2 children: {node!r}")
                left = build(node[0])
                right = build(node[1])
                self._children[idx] = (left, right)
                self._parent[left] = idx
                self._parent[right] = idx
            return idx

        self.root = build(structure)
        self.leaves = [i for i, c in enumerate(self._children) if c is None]
        self.internal = [i for i, c in enumerate(self._children) if c is not None]
        labels = [self._labels[i] for i in self.leaves]
        if len(set(labels)) != len(labels):
            raise TreeError("duplicate leaf labels")
        self.n = len(self.leaves)
        if self.n >= 2 and len(self.internal) != self.n - 1:
            raise TreeError("tree is not binary")
        # preorder index of each internal vertex -> stable external name
        self._internal_name = {v: f"v{k}" for k, v in enumerate(self.internal)}
        self._name_to_internal = {name: v for v, name in self._internal_name.items()}
        self._size = [0] * len(self._children)
        for i in reversed(range(len(self._children))):
            if self._children[i] is None:
                self._size[i] = 1
            else:
                l, r = self._children[i]
                self._size[i] = self._size[l] + self._size[r]

    # -- basic accessors ---------------------------------------------------

    def children(self, v: int) -> tuple[int, int]:
        c = self._children[v]
        if c is None:
            raise TreeError(f"vertex {v} is a leaf")
        return c

    def is_leaf(self, v: int) -> bool:
        return self._children[v] is None

    def label(self, v: int) -> str:
        lab = self._labels[v]
        if lab is None:
            raise TreeError(f"vertex {v} is internal")
        return lab

    def parent(self, v: int) -> int:
        return self._parent[v]

    def subtree_size(self, v: int) -> int:
        return self._size[v]

    def vertex_name(self, v: int) -> str:
        return self._internal_name[v]

    def internal_by_name(self, name: str) -> int:
        try:
            return self._name_to_internal[name]
        except KeyError:
            raise TreeError(f"unknown internal vertex {name!r}") from None

    @property
    def leaf_labels(self) -> list[str]:
        """Leaf labels in neutral left-to-right order."""
        return [self._labels[i] for i in self.leaves_under(self.root)]

    def leaves_under(self, v: int) -> list[int]:
        out = []
        stack = [v]
        while stack:
            u = stack.pop()
            c = self._children[u]
            if c is None:
                out.append(u)
            else:
                stack.append(c[1])
                stack.append(c[0])
        return out

    def leaf_by_label(self, label: str) -> int:
        for i in self.leaves:
            if self._labels[i] == label:
                return i
        raise TreeError(f"unknown leaf label {label!r}")

    def lca(self, a: int, b: int) -> int:
        seen = set()
        while a != -1:
            seen.add(a)
            a = self._parent[a]
        while b not in seen:
            b = self._parent[b]
        return b

    def ancestors(self, v: int) -> Iterator[int]:
        v = self._parent[v]
        while v != -1:
            yield v
            v = self._parent[v]

    def to_newick(self) -> str:
        def fmt(v: int) -> str:
            c = self._children[v]
            if c is None:
                return self._labels[v]
            return f"({fmt(c[0])},{fmt(c[1])})"

        return fmt(self.root) + ";"

    @staticmethod
    def from_newick(text: str) -> "PhyloTree":
        return PhyloTree(parse_newick(text))

    def __repr__(self):
        return f"PhyloTree({self.to_newick()!r})"


def parse_newick(text: str):
    """Parse a Newick string into the nested-tuple structure PhyloTree accepts.

    Branch lengths (":1.23") are accepted and discarded; trees must be binary.
    """
    s = text.strip()
    if s.endswith(";"):
        s = s[:-1]
    pos = 0

    def error(msg: str):
        raise TreeError(f"malformed tree string at char {pos}: {msg}")

    def skip_length():
        nonlocal pos
        if pos < len(s) and s[pos] == ":":
            pos += 1
            start = pos
            while pos < len(s) and (s[pos].isdigit() or s[pos] in ".eE+-"):
                pos += 1
            if pos == start:
                error("expected branch length after ':'")

    def parse_node():
        nonlocal pos
        if pos >= len(s):
            error("unexpected end of input")
        if s[pos] == "(":
            pos += 1
            left = parse_node()
            if pos >= len(s) or s[pos] != ",":
                error("expected ','")
            pos += 1
            right = parse_node()
            if pos >= len(s) or s[pos] != ")":
                error("expected ')'")
            pos += 1
            # optional internal label, ignored
            while pos < len(s) and (s[pos].isalnum() or s[pos] in "_.-"):
                pos += 1
            skip_length()
            return (left, right)
        start = pos
        while pos < len(s) and (s[pos].isalnum() or s[pos] in "_.-"):
            pos += 1
        if pos == start:
            error("expected leaf label")
        label = s[start:pos]
        skip_length()
        return label

    node = parse_node()
    if pos != len(s):
        error("trailing characters")
    if isinstance(node, str):
        return node
    return node


@dataclass(frozen=True)
class LeafOrder:
    """A realizable left-to-right leaf order, with its rotation-bit encoding.

    `rotations[k]` says whether internal vertex number k (preorder) is flipped
    relative to the neutral embedding.  `order` is the induced label sequence
    and `position[label]` its 1-based position.
    """

    order: tuple[str, ...]
    rotations: tuple[int, ...]

    @property
    def position(self) -> dict[str, int]:
        return {lab: i + 1 for i, lab in enumerate(self.order)}

    @staticmethod
    def from_rotations(tree: PhyloTree, bits) -> "LeafOrder":
        bits = tuple(int(b) for b in bits)
        if len(bits) != len(tree.internal):
            raise TreeError(
                f"expected {len(tree.internal)} rotation bits, got {len(bits)}"
            )
        flip = {v: bits[k] for k, v in enumerate(tree.internal)}
        out = []
        stack = [tree.root]
        while stack:
            v = stack.pop()
            if tree.is_leaf(v):
                out.append(tree.label(v))
            else:
                l, r = tree.children(v)
                if flip[v]:
                    l, r = r, l
                stack.append(r)
                stack.append(l)
        return LeafOrder(order=tuple(out), rotations=bits)

    @staticmethod
    def neutral(tree: PhyloTree) -> "LeafOrder":
        return LeafOrder.from_rotations(tree, (0,) * len(tree.internal))

    @staticmethod
    def from_order(tree: PhyloTree, order) -> "LeafOrder":
        """Validate contiguity of every clade and recover the rotation bits.

        Raises TreeError naming the violating vertex if the order is not
        realizable by any embedding of `tree`.
        """
        order = tuple(order)
        if sorted(order) != sorted(tree.leaf_labels):
            raise TreeError("order is not a permutation of the leaf labels")
        pos = {lab: i + 1 for i, lab in enumerate(order)}
        span: dict[int, tuple[int, int]] = {}
        bits = []
        for v in reversed(range(len(tree._children))):
            if tree.is_leaf(v):
                p = pos[tree.label(v)]
                span[v] = (p, p)
            else:
                l, r = tree.children(v)
                lo = min(span[l][0], span[r][0])
                hi = max(span[l][1], span[r][1])
                if hi - lo + 1 != tree.subtree_size(v):
                    raise TreeError(
                        f"order not realizable: clade of {tree.vertex_name(v)} "
                        f"is not contiguous"
                    )
                span[v] = (lo, hi)
        for v in tree.internal:
            l, r = tree.children(v)
            bits.append(0 if span[l][0] < span[r][0] else 1)
        lo = LeafOrder(order=order, rotations=tuple(bits))
        return lo


def all_leaf_orders(tree: PhyloTree, cap: int = 16) -> Iterator[LeafOrder]:
    """Yield every realizable leaf order exactly once (2^(n-1) embeddings)."""
    if tree.n > cap:
        raise TreeError(
            f"refusing to enumerate {2 ** (tree.n - 1)} embeddings for "
            f"n={tree.n} leaves (cap is n<={cap})"
        )
    import itertools

    seen = set()
    for bits in itertools.product((0, 1), repeat=len(tree.internal)):
        lo = LeafOrder.from_rotations(tree, bits)
        if lo.order not in seen:
            seen.add(lo.order)
            yield lo
