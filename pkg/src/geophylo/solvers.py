"""One entry point over every solver and heuristic, with a shared outcome type.

Solver names: ilp | fpt | bruteforce | bu | td | la:<measure> | greedy |
pipeline:<spec>.  Heuristics ignore `optimal`; exact solvers set it unless
they hit the time limit.  Crossing counts are always geometric recounts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .heuristics import bottom_up, greedy, leaf_additive_heuristic, run_pipeline, top_down
from .ilp import build_ilp, solve_exact
from .internal import Constraints, get_measure, measure_value, optimize_internal
from .model import (
    Geophylogeny,
    LeaderType,
    constrained_brute_force_min,
    count_crossings,
    undecided_pairs,
)
from .tanglegram import solve_fpt
from .tree import LeafOrder

EXACT_SOLVERS = ("ilp", "fpt", "bruteforce")


class SolverUsageError(ValueError):
    pass


class InfeasibleConstraints(ValueError):
    pass


@dataclass
class SolveOutcome:
    order: LeafOrder
    objective: Fraction | int
    crossings: int | None
    optimal: bool
    runtime_ms: int
    k: int | None = None


def _heuristic(g, ltype, solver) -> tuple[LeafOrder, int]:
    if solver == "bu":
        return bottom_up(g, ltype)
    if solver == "td":
        return top_down(g, ltype)
    if solver.startswith("la:"):
        return leaf_additive_heuristic(g, ltype, solver[3:])
    if solver == "greedy":
        return greedy(g, ltype, LeafOrder.neutral(g.tree))
    if solver.startswith("pipeline:"):
        return run_pipeline(g, ltype, solver[len("pipeline:"):])
    raise SolverUsageError(f"unknown solver {solver!r}")


def solve(g: Geophylogeny, mode: str, solver: str = "ilp",
          measure: str = "xhop", constraints: Constraints | None = None,
          time_limit: float | None = 30.0) -> SolveOutcome:
    """mode is "internal", "s" or "po"."""
    from .internal import ConstraintError

    constraints = constraints or Constraints()
    t0 = time.perf_counter()

    def ms() -> int:
        return int((time.perf_counter() - t0) * 1000)

    if mode == "internal":
        try:
            order, value = optimize_internal(g, measure, constraints)
        except ConstraintError as e:
            raise InfeasibleConstraints(str(e))
        return SolveOutcome(order, value, None, True, ms())

    ltype = LeaderType.parse(mode)
    has_constraints = bool(
        constraints.pins or constraints.ranges or constraints.fixed_rotations
    )
    k = len(undecided_pairs(g, ltype))

    if solver == "ilp":
        from .ilp import InfeasibleError

        try:
            res = solve_exact(
                build_ilp(g, ltype), time_limit=time_limit,
                constraints=constraints if has_constraints else None,
            )
        except InfeasibleError as e:
            raise InfeasibleConstraints(str(e))
        return SolveOutcome(res.order, res.crossings, res.crossings,
                            res.optimal, ms(), k)
    if solver == "bruteforce":
        got = constrained_brute_force_min(
            g, ltype, pins=constraints.pins, ranges=constraints.ranges,
            fixed_rotations=constraints.fixed_rotations,
        )
        if got is None:
            raise InfeasibleConstraints("no realizable order satisfies the constraints")
        order, c = got
        return SolveOutcome(order, c, c, True, ms(), k)
    if solver == "fpt":
        from .tanglegram import TanglegramError

        if has_constraints:
            raise SolverUsageError("the fpt solver does not support constraints")
        try:
            order, c = solve_fpt(g, ltype)
        except TanglegramError as e:
            raise SolverUsageError(str(e))
        return SolveOutcome(order, c, c, True, ms(), k)

    if has_constraints:
        raise SolverUsageError(f"solver {solver!r} does not support constraints")
    order, c = _heuristic(g, ltype, solver)
    assert c == count_crossings(g, order, ltype)
    return SolveOutcome(order, c, c, False, ms(), k)
