"""Geophylogeny drawing toolkit: leaf ordering, leader crossings, rendering."""

from .crossing_free import decide_crossing_free
from .generators import GeneratorSpec, generate
from .heuristics import bottom_up, greedy, run_pipeline, top_down
from .ilp import build_ilp, export_lp, solve_exact
from .instance_io import read_instance, write_instance
from .internal import Constraints, measure_value, optimize_internal
from .model import (
    CrossingCounter,
    Geophylogeny,
    LeaderType,
    brute_force_min,
    count_crossings,
)
from .render import render_svg
from .tanglegram import solve_fpt, solve_geometry_free, solve_tanglegram
from .tree import LeafOrder, PhyloTree

__all__ = [
    "Constraints",
    "CrossingCounter",
    "GeneratorSpec",
    "Geophylogeny",
    "LeaderType",
    "LeafOrder",
    "PhyloTree",
    "bottom_up",
    "brute_force_min",
    "build_ilp",
    "count_crossings",
    "decide_crossing_free",
    "export_lp",
    "generate",
    "greedy",
    "measure_value",
    "optimize_internal",
    "read_instance",
    "render_svg",
    "run_pipeline",
    "solve_exact",
    "solve_fpt",
    "solve_geometry_free",
    "solve_tanglegram",
    "top_down",
    "write_instance",
]
