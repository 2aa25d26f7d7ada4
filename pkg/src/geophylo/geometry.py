"""Exact rational geometry predicates.

All coordinates are `fractions.Fraction`; every predicate is exact, so
crossing counts never depend on floating point behaviour.
"""

from __future__ import annotations

from fractions import Fraction

Point = tuple[Fraction, Fraction]


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b-a) x (c-a): 1 left turn, -1 right, 0 collinear."""
    # float filter: the rounding error of the double computation (including
    # the Fraction -> float conversions) is far below 1e-9 relative to the
    # term magnitudes, so a determinant clear of that margin is trustworthy
    try:
        t1 = (float(b[0]) - float(a[0])) * (float(c[1]) - float(a[1]))
        t2 = (float(b[1]) - float(a[1])) * (float(c[0]) - float(a[0]))
    except OverflowError:
        pass
    else:
        det = t1 - t2
        if abs(det) > 1e-9 * (abs(t1) + abs(t2) + 1.0):
            return 1 if det > 0 else -1
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def _within(lo, hi, v) -> bool:
    if lo > hi:
        lo, hi = hi, lo
    return lo <= v <= hi


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment ab."""
    return (
        orientation(a, b, p) == 0
        and _within(a[0], b[0], p[0])
        and _within(a[1], b[1], p[1])
    )


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share at least one point.

    Collinear overlapping segments count as intersecting.
    """
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(c, a, b):
        return True
    if o2 == 0 and on_segment(d, a, b):
        return True
    if o3 == 0 and on_segment(a, c, d):
        return True
    if o4 == 0 and on_segment(b, c, d):
        return True
    return False


def point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    """True iff p lies in the closed triangle abc (degenerate triangles allowed)."""
    o1 = orientation(a, b, p)
    o2 = orientation(b, c, p)
    o3 = orientation(c, a, p)
    if o1 == 0 and o2 == 0 and o3 == 0:
        # degenerate: all collinear, fall back to segment membership
        return on_segment(p, a, b) or on_segment(p, b, c) or on_segment(p, c, a)
    neg = o1 < 0 or o2 < 0 or o3 < 0
    pos = o1 > 0 or o2 > 0 or o3 > 0
    return not (neg and pos)


_SQRT_SCALE_DIGITS = 24


def rational_sqrt(x: Fraction, digits: int = _SQRT_SCALE_DIGITS) -> Fraction:
    """Deterministic rational approximation of sqrt(x), floor-rounded to
    `digits` decimal digits.

    Used for Euclidean-distance measures: both the dynamic program and the
    brute-force oracle evaluate the same rational, so optima compare exactly.
    """
    if x < 0:
        raise ValueError("rational_sqrt of a negative value")
    scale = 10**digits
    # floor(sqrt(x) * scale) = isqrt(num * scale^2 // den) when floored carefully
    n = x.numerator * scale * scale
    d = x.denominator
    return Fraction(_isqrt(n // d), scale)


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)
