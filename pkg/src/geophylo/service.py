"""Stateless HTTP service: optimize, render, classify.

Every request carries the full instance document, so responses depend only
on the request body (plus the solver time limit).  Crossing counts in
responses are geometric recounts of the returned order.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .instance_io import InstanceFormatError, read_instance
from .internal import Constraints
from .model import LeaderType, ModelError, count_crossings, undecided_pairs
from .render import render_svg
from .solvers import InfeasibleConstraints, SolverUsageError, solve
from .tree import LeafOrder, TreeError

DEFAULT_TIME_LIMIT_MS = 30_000


class ConstraintsBody(BaseModel):
    pins: dict[str, int] = Field(default_factory=dict)
    ranges: dict[str, tuple[int, int]] = Field(default_factory=dict)
    fixed_rotations: dict[str, int] = Field(default_factory=dict)


class OptimizeBody(BaseModel):
    instance: str
    mode: str = "s"  # internal | s | po
    solver: str = "ilp"
    measure: str = "xhop"
    constraints: ConstraintsBody = Field(default_factory=ConstraintsBody)
    time_limit_ms: int = DEFAULT_TIME_LIMIT_MS


class RenderBody(BaseModel):
    instance: str
    order: list[str] | None = None
    mode: str = "s"


class ClassifyBody(BaseModel):
    instance: str
    leader_type: str = "s"


def _bad(detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": detail})


def create_app() -> FastAPI:
    app = FastAPI(title="geophylo service")

    @app.exception_handler(RequestValidationError)
    async def _schema_error(request: Request, exc):
        return _bad(str(exc))

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/optimize")
    def optimize(body: OptimizeBody):
        try:
            g = read_instance(body.instance)
            if body.mode not in ("internal", "s", "po"):
                raise ValueError(f"unknown mode {body.mode!r}")
            cons = Constraints(
                pins=dict(body.constraints.pins),
                ranges={k: tuple(v) for k, v in body.constraints.ranges.items()},
                fixed_rotations=dict(body.constraints.fixed_rotations),
            )
            cons.validate(g.tree)
        except (InstanceFormatError, ModelError, TreeError, ValueError) as e:
            return _bad(str(e))

        try:
            out = solve(
                g, body.mode, solver=body.solver, measure=body.measure,
                constraints=cons, time_limit=body.time_limit_ms / 1000,
            )
        except InfeasibleConstraints as e:
            return JSONResponse(status_code=422, content={"detail": str(e)})
        except SolverUsageError as e:
            return _bad(str(e))

        objective = out.objective
        if isinstance(objective, Fraction):
            objective = float(objective)
        crossings = out.crossings
        if crossings is None and body.mode != "internal":
            crossings = count_crossings(
                g, out.order, LeaderType.parse(body.mode)
            )
        return {
            "order": list(out.order.order),
            "objective": objective,
            "crossings": crossings,
            "runtime_ms": out.runtime_ms,
            "optimal": out.optimal,
            "k": out.k,
        }

    @app.post("/render")
    def render(body: RenderBody):
        try:
            g = read_instance(body.instance)
            order = (
                LeafOrder.neutral(g.tree) if body.order is None
                else LeafOrder.from_order(g.tree, body.order)
            )
            svg = render_svg(g, order, mode=body.mode)
        except (InstanceFormatError, ModelError, TreeError, ValueError) as e:
            return _bad(str(e))
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/classify")
    def classify(body: ClassifyBody):
        try:
            g = read_instance(body.instance)
            ltype = LeaderType.parse(body.leader_type)
        except (InstanceFormatError, ModelError, TreeError, ValueError) as e:
            return _bad(str(e))
        pairs = undecided_pairs(g, ltype)
        return {"k": len(pairs), "undecided_pairs": [list(p) for p in pairs]}

    return app


app = create_app()
