"""Command line front end.

optimize and render accept --server to go through a running service over
HTTP; without it they call the same code in process.  Exit codes: 0 ok,
1 invalid input, 2 infeasible constraints, 3 time limit hit (incumbent
still printed).
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click

from .generators import KINDS, GeneratorSpec, generate
from .instance_io import (
    InstanceFormatError,
    read_instance,
    write_instance,
    write_result,
)
from .internal import Constraints
from .maxcut import MaxCutInput, build_maxcut_instance
from .model import LeaderType, ModelError, undecided_pairs
from .render import render_svg
from .solvers import EXACT_SOLVERS, InfeasibleConstraints, SolverUsageError, solve
from .tree import LeafOrder, TreeError

INVALID, INFEASIBLE, TIMEOUT = 1, 2, 3


def _fail(message: str, code: int = INVALID):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_instance(path: str):
    try:
        return read_instance(path)
    except (InstanceFormatError, ModelError, TreeError) as e:
        _fail(str(e))


def _load_constraints(path: str | None) -> Constraints:
    if path is None:
        return Constraints()
    with open(path) as fh:
        data = json.load(fh)
    return Constraints(
        pins={k: int(v) for k, v in data.get("pins", {}).items()},
        ranges={k: (int(v[0]), int(v[1])) for k, v in data.get("ranges", {}).items()},
        fixed_rotations={k: int(v) for k, v in data.get("fixed_rotations", {}).items()},
    )


@click.group()
def main():
    """Geophylogeny drawing toolkit."""


@main.command("generate")
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.option("--n", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--width", type=int, default=100, show_default=True)
@click.option("--height", type=int, default=100, show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
def cmd_generate(kind, n, seed, width, height, output):
    """Write a synthetic instance file."""
    try:
        g = generate(GeneratorSpec(kind, n, seed, Fraction(width), Fraction(height)))
    except ValueError as e:
        _fail(str(e))
    text = write_instance(g)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command("optimize")
@click.argument("instance", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["internal", "s", "po"]), default="s")
@click.option("--solver", default="ilp", show_default=True)
@click.option("--measure", default="xhop", show_default=True)
@click.option("--constraints", "constraints_path", type=click.Path(exists=True))
@click.option("--time-limit", type=float, default=30.0, show_default=True)
@click.option("--server", default=None, help="service URL, e.g. http://localhost:8000")
def cmd_optimize(instance, mode, solver, measure, constraints_path, time_limit, server):
    """Optimize a leaf order and print the result as JSON."""
    if server:
        import httpx

        with open(instance) as fh:
            doc = fh.read()
        cons = _load_constraints(constraints_path)
        body = {
            "instance": doc, "mode": mode, "solver": solver, "measure": measure,
            "constraints": {
                "pins": cons.pins,
                "ranges": {k: list(v) for k, v in cons.ranges.items()},
                "fixed_rotations": cons.fixed_rotations,
            },
            "time_limit_ms": int(time_limit * 1000),
        }
        resp = httpx.post(f"{server.rstrip('/')}/optimize", json=body, timeout=None)
        if resp.status_code == 422:
            _fail(resp.json()["detail"], INFEASIBLE)
        if resp.status_code != 200:
            _fail(resp.json().get("detail", resp.text))
        result = resp.json()
        click.echo(json.dumps(result))
        sys.exit(0 if result["optimal"] or solver not in EXACT_SOLVERS else TIMEOUT)

    g = _load_instance(instance)
    cons = _load_constraints(constraints_path)
    try:
        out = solve(g, mode, solver=solver, measure=measure,
                    constraints=cons, time_limit=time_limit)
    except InfeasibleConstraints as e:
        _fail(str(e), INFEASIBLE)
    except (SolverUsageError, ValueError) as e:
        _fail(str(e))
    objective = out.objective
    if isinstance(objective, Fraction):
        objective = float(objective)
    click.echo(json.dumps({
        "order": list(out.order.order),
        "objective": objective,
        "crossings": out.crossings,
        "runtime_ms": out.runtime_ms,
        "optimal": out.optimal,
        "k": out.k,
    }))
    if solver in EXACT_SOLVERS and not out.optimal:
        sys.exit(TIMEOUT)


@main.command("render")
@click.argument("instance", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["internal", "s", "po"]), default="s")
@click.option("--order", default=None, help="comma-separated leaf order")
@click.option("-o", "--output", type=click.Path(), default=None)
def cmd_render(instance, mode, order, output):
    """Render an instance to SVG."""
    g = _load_instance(instance)
    try:
        lo = (LeafOrder.neutral(g.tree) if order is None
              else LeafOrder.from_order(g.tree, order.split(",")))
        svg = render_svg(g, lo, mode=mode)
    except (TreeError, ValueError) as e:
        _fail(str(e))
    if output:
        with open(output, "w") as fh:
            fh.write(svg)
    else:
        click.echo(svg)


@main.command("bench")
@click.option("--kind", type=click.Choice(KINDS), default="coastline")
@click.option("--sizes", default="10,20,30", show_default=True)
@click.option("--seeds", type=int, default=3, show_default=True)
@click.option("--solvers", default="ilp,pipeline:best(bu,td,la:xhop)+greedy",
              show_default=True)
@click.option("--mode", type=click.Choice(["s", "po"]), default="s")
@click.option("--time-limit", type=float, default=60.0, show_default=True)
def cmd_bench(kind, sizes, seeds, solvers, mode, time_limit):
    """Sweep generator sizes x seeds x solvers and print a CSV table."""
    rows = []
    for n in (int(s) for s in sizes.split(",")):
        for seed in range(seeds):
            g = generate(GeneratorSpec(kind, n, seed))
            k = len(undecided_pairs(g, LeaderType.parse(mode)))
            for solver in solvers.split(","):
                out = solve(g, mode, solver=solver, time_limit=time_limit)
                rows.append(dict(
                    instance=f"{kind}-n{n}-s{seed}", solver=solver,
                    leader_type=mode, crossings=out.crossings,
                    runtime_ms=out.runtime_ms, k=k, optimal=out.optimal,
                ))
    click.echo(write_result(rows), nl=False)


@main.command("reduce-maxcut")
@click.argument("graph", type=click.Path(exists=True))
@click.option("--cut", "-c", type=int, required=True)
@click.option("--mode", type=click.Choice(["s", "po"]), default="po")
@click.option("-o", "--output", type=click.Path(), default=None)
def cmd_reduce_maxcut(graph, cut, mode, output):
    """Build the crossing-minimization instance for a Max-Cut input.

    GRAPH is a text file with one "u v" edge per line.
    """
    edges = []
    with open(graph) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                _fail(f"bad edge line {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
    try:
        inp = MaxCutInput(tuple(edges), cut)
        g, k_threshold, k_fix = build_maxcut_instance(inp, mode)
    except ValueError as e:
        _fail(str(e))
    if output:
        write_instance(g, output)
    click.echo(json.dumps({
        "leaves": g.n, "k_threshold": k_threshold, "k_fix": k_fix,
        "instance_file": output,
    }))


@main.command("serve")
@click.option("--port", type=int, default=None,
              help="defaults to GEOPHYLO_PORT or 8000")
@click.option("--host", default="127.0.0.1", show_default=True)
def cmd_serve(port, host):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    if port is None:
        port = int(os.environ.get("GEOPHYLO_PORT", "8000"))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
