"""Plain-text instance files and result tables.

An instance document holds one Newick tree line, a map block, and a site
table, all numbers as exact decimal (or p/q rational) strings:

    tree ((l1,l2),l3);
    map 4 4
    layout explicit 1 2 3
    ytop 4
    site l1 3 1
    site l2 1 2
    site l3 2 3
"""

from __future__ import annotations

import csv
import io
import os
from fractions import Fraction

from .model import Geophylogeny, ModelError
from .tree import PhyloTree, TreeError


class InstanceFormatError(ValueError):
    pass


def format_number(x: Fraction) -> str:
    """Exact decimal string when the denominator allows it, else p/q."""
    x = Fraction(x)
    den = x.denominator
    shift = 0
    while den % 2 == 0:
        den //= 2
        shift += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(shift, fives)
    if digits == 0:
        return str(x.numerator)
    scaled = x.numerator * 10**digits // x.denominator
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def parse_number(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InstanceFormatError(f"bad number {text!r}")


def _even_positions(g: Geophylogeny) -> bool:
    n = g.n
    if n == 1:
        return g.positions[0] == g.width / 2
    return all(
        g.positions[i] == Fraction(i) * g.width / (n - 1) for i in range(n)
    )


def write_instance(g: Geophylogeny, sink=None) -> str:
    out = io.StringIO()
    out.write(f"tree {g.tree.to_newick()}\n")
    out.write(f"map {format_number(g.width)} {format_number(g.height)}\n")
    if _even_positions(g):
        out.write("layout even\n")
    else:
        xs = " ".join(format_number(x) for x in g.positions)
        out.write(f"layout explicit {xs}\n")
    if g.ytop != g.height:
        out.write(f"ytop {format_number(g.ytop)}\n")
    for lab in sorted(g.sites):
        x, y = g.sites[lab]
        out.write(f"site {lab} {format_number(x)} {format_number(y)}\n")
    text = out.getvalue()
    if sink is not None:
        if isinstance(sink, (str, os.PathLike)):
            with open(sink, "w") as fh:
                fh.write(text)
        else:
            sink.write(text)
    return text


def read_instance(source) -> Geophylogeny:
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source) as fh:
            text = fh.read()
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)

    tree = None
    width = height = ytop = None
    layout = "even"
    explicit = None
    sites: dict[str, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "tree":
            try:
                tree = PhyloTree.from_newick(rest)
            except TreeError as e:
                raise InstanceFormatError(f"line {lineno}: {e}")
        elif head == "map":
            parts = rest.split()
            if len(parts) != 2:
                raise InstanceFormatError(f"line {lineno}: map needs width and height")
            width, height = (parse_number(p) for p in parts)
        elif head == "layout":
            parts = rest.split()
            if parts and parts[0] == "even":
                layout = "even"
            elif parts and parts[0] == "explicit":
                layout = "explicit"
                explicit = [parse_number(p) for p in parts[1:]]
            else:
                raise InstanceFormatError(f"line {lineno}: layout must be even or explicit")
        elif head == "ytop":
            ytop = parse_number(rest)
        elif head == "site":
            parts = rest.split()
            if len(parts) != 3:
                raise InstanceFormatError(f"line {lineno}: site needs label x y")
            lab = parts[0]
            if lab in sites:
                raise InstanceFormatError(f"line {lineno}: duplicate site for {lab!r}")
            sites[lab] = (parse_number(parts[1]), parse_number(parts[2]))
        else:
            raise InstanceFormatError(f"line {lineno}: unknown directive {head!r}")

    if tree is None:
        raise InstanceFormatError("missing tree line")
    if width is None:
        raise InstanceFormatError("missing map line")
    try:
        return Geophylogeny(
            tree, width, height, sites,
            positions=explicit if layout == "explicit" else None,
            ytop=ytop,
        )
    except ModelError as e:
        raise InstanceFormatError(str(e))


RESULT_FIELDS = (
    "instance", "solver", "leader_type", "crossings", "runtime_ms", "k", "optimal"
)


def write_result(rows, sink=None) -> str:
    """Result rows as CSV text; rows are dicts with the RESULT_FIELDS keys."""
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=RESULT_FIELDS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = out.getvalue()
    if sink is not None:
        if isinstance(sink, (str, os.PathLike)):
            with open(sink, "w", newline="") as fh:
                fh.write(text)
        else:
            sink.write(text)
    return text
