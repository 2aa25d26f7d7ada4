"""Seeded synthetic instance generators: uniform, coastline, clustered.

All coordinates are exact rationals on a 1/100 grid and all randomness goes
through one `random.Random(seed)` using integer draws only, so the same spec
reproduces the same instance on any platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from statistics import median

from .geometry import rational_sqrt
from .model import Geophylogeny
from .tree import PhyloTree

GRID = 100  # coordinate resolution: 1/GRID map units

KINDS = ("uniform", "coastline", "clustered")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int
    width: Fraction = Fraction(100)
    height: Fraction = Fraction(100)
    # coastline: x jitter as a fraction of the site spacing
    jitter: Fraction = Fraction(1, 4)
    # clustered: cluster sizes drawn uniformly from this range
    cluster_min: int = 3
    cluster_max: int = 10
    # clustered: disk radius = disk_factor * cluster size * min(width, height)
    disk_factor: Fraction = Fraction(1, 100)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("need at least 2 sites")


def _rand_frac(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    """Uniform draw from the 1/GRID grid points of [lo, hi]."""
    a = int(lo * GRID)
    b = int(hi * GRID)
    return Fraction(rng.randint(a, b), GRID)


def _weighted_pick(rng: random.Random, weights: list[Fraction]) -> int:
    total = sum(weights)
    r = Fraction(rng.randrange(10**9), 10**9) * total
    acc = Fraction(0)
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    return len(weights) - 1


def _median_point(points):
    return (median(p[0] for p in points), median(p[1] for p in points))


def _dist(a, b) -> Fraction:
    return rational_sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2)


def _merge_tree(rng: random.Random, items: list, eps: Fraction):
    """Inverse-distance merging of (structure, site list) items.

    Repeatedly picks one item uniformly and a second with probability
    proportional to 1 / (eps + distance of the median reference points).
    """
    items = [(struct, list(pts)) for struct, pts in items]
    while len(items) > 1:
        first = items.pop(rng.randrange(len(items)))
        ref = _median_point(first[1])
        weights = [
            1 / (eps + _dist(ref, _median_point(pts))) for _, pts in items
        ]
        j = _weighted_pick(rng, weights)
        second = items.pop(j)
        if rng.randrange(2):
            struct = (second[0], first[0])
        else:
            struct = (first[0], second[0])
        items.append((struct, first[1] + second[1]))
    return items[0][0]


def _build(spec: GeneratorSpec, rng: random.Random, points) -> Geophylogeny:
    labels = [f"l{i + 1}" for i in range(len(points))]
    eps = Fraction(1, 10**6) * _dist((0, 0), (spec.width, spec.height))
    items = [(lab, [pt]) for lab, pt in zip(labels, points)]
    struct = _merge_tree(rng, items, eps)
    return Geophylogeny(
        PhyloTree(struct), spec.width, spec.height,
        dict(zip(labels, points)),
    )


def _unique_points(rng: random.Random, spec: GeneratorSpec, count: int):
    pts = []
    seen = set()
    while len(pts) < count:
        p = (
            _rand_frac(rng, Fraction(0), spec.width),
            _rand_frac(rng, Fraction(0), spec.height),
        )
        if p not in seen:
            seen.add(p)
            pts.append(p)
    return pts


def _gen_uniform(spec: GeneratorSpec, rng: random.Random) -> Geophylogeny:
    return _build(spec, rng, _unique_points(rng, spec, spec.n))


def _gen_coastline(spec: GeneratorSpec, rng: random.Random) -> Geophylogeny:
    n = spec.n
    spacing = spec.width / (n + 1)
    amp = spec.jitter * spacing
    xs = []
    for i in range(n):
        base = spacing * (i + 1)
        xs.append(_rand_frac(rng, base - amp, base + amp))

    # random y walk outwards from the central site, steps bounded by
    # 1.5 times the horizontal distance to the previous site
    ys: dict[int, Fraction] = {}
    mid = n // 2
    ys[mid] = spec.height / 2
    for i in list(range(mid + 1, n)) + list(range(mid - 1, -1, -1)):
        prev = i - 1 if i > mid else i + 1
        step = Fraction(3, 2) * abs(xs[i] - xs[prev])
        y = ys[prev] + _rand_frac(rng, -step, step)
        ys[i] = min(max(y, Fraction(0)), spec.height)

    points = [(xs[i], ys[i]) for i in range(n)]
    if len(set(points)) != n:  # grid collision, retry with fresh draws
        return _gen_coastline(spec, rng)
    return _build(spec, rng, points)


def _gen_clustered(spec: GeneratorSpec, rng: random.Random) -> Geophylogeny:
    sizes = []
    left = spec.n
    while left > 0:
        s = min(rng.randint(spec.cluster_min, spec.cluster_max), left)
        sizes.append(s)
        left -= s

    points: list = []
    seen: set = set()
    clusters: list[list] = []
    for size in sizes:
        cx = _rand_frac(rng, Fraction(0), spec.width)
        cy = _rand_frac(rng, Fraction(0), spec.height)
        r = spec.disk_factor * size * min(spec.width, spec.height)
        members = []
        while len(members) < size:
            dx = _rand_frac(rng, -r, r)
            dy = _rand_frac(rng, -r, r)
            if dx * dx + dy * dy > r * r:
                continue
            p = (
                min(max(cx + dx, Fraction(0)), spec.width),
                min(max(cy + dy, Fraction(0)), spec.height),
            )
            if p in seen:
                continue
            seen.add(p)
            members.append(p)
        clusters.append(members)
        points.extend(members)

    labels = [f"l{i + 1}" for i in range(spec.n)]
    eps = Fraction(1, 10**6) * _dist((0, 0), (spec.width, spec.height))
    items = []
    k = 0
    for members in clusters:
        sub = [(labels[k + j], [p]) for j, p in enumerate(members)]
        items.append((_merge_tree(rng, sub, eps), members))
        k += len(members)
    struct = _merge_tree(rng, items, eps)
    g = Geophylogeny(
        PhyloTree(struct), spec.width, spec.height,
        dict(zip(labels, points)),
    )
    # cluster membership, mainly for tests and rendering
    g.clusters = []
    k = 0
    for members in clusters:
        g.clusters.append(labels[k:k + len(members)])
        k += len(members)
    return g


def generate(spec: GeneratorSpec) -> Geophylogeny:
    rng = random.Random(spec.seed)
    if spec.kind == "uniform":
        return _gen_uniform(spec, rng)
    if spec.kind == "coastline":
        return _gen_coastline(spec, rng)
    return _gen_clustered(spec, rng)
