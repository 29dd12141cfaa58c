"""HTTP service wrapping the solver-comparison toolkit.

Endpoints mirror the CLI verbs: mesh inspection, the benchmark sweep,
convergence orders, and pointwise error maps.  Non-finite error norms
travel as JSON null alongside a reason string, since NaN is not valid
JSON.
"""

import math

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from . import benchmark as bench
from . import mesh as meshes
from . import solvers

app = FastAPI(
    title="wcpde",
    version=__version__,
    description="Worst-case error comparison of linear PDE solvers on the unit disk.",
)


def _san(value: float):
    v = float(value)
    return v if math.isfinite(v) else None


class MeshRequest(BaseModel):
    level: int = Field(default=0, ge=0, le=12)
    include_points: bool = False
    probe_density: int = Field(default=400, ge=8, le=4000)


class MeshResponse(BaseModel):
    level: int
    n_vertices: int
    n_triangles: int
    n_boundary: int
    dof: int
    m_bary: int
    m_node: int
    fill_distance: float
    h: float
    vertices_text: str | None = None
    triangles_text: str | None = None


class SweepRequest(BaseModel):
    cases: list[str] = list(bench.DEFAULT_CASES)
    methods: list[str] = list(solvers.METHOD_NAMES)
    eval_orders: list[int] = list(bench.EVAL_ORDERS)
    construction_order: int = 7
    scale: float = 1.0
    eval_point: tuple[float, float] = (0.0, 0.0)
    bandwidth: int = 15
    pinv_tol: float = 1e-10
    probe_density: int = 400
    workers: int = Field(default=4, ge=1, le=16)

    def to_config(self) -> bench.BenchmarkConfig:
        return bench.BenchmarkConfig(
            cases=tuple(self.cases),
            methods=tuple(self.methods),
            eval_orders=tuple(self.eval_orders),
            construction_order=self.construction_order,
            scale=self.scale,
            eval_point=self.eval_point,
            bandwidth=self.bandwidth,
            pinv_tol=self.pinv_tol,
            probe_density=self.probe_density,
            workers=self.workers,
        )


class CellReport(BaseModel):
    method: str
    case: str
    eval_order: int
    norm: float | None
    condition: float | None
    jitter: float
    reason: str = ""


class SweepResponse(BaseModel):
    tables: dict[int, str]
    reports: list[CellReport]
    reports_csv: str
    h: dict[str, float]


class OrderRow(BaseModel):
    method: str
    eval_order: int
    step: str
    ratio: float | None
    estimated_order: float | None


class OrdersResponse(BaseModel):
    csv: str
    rows: list[OrderRow]


class MapRequest(BaseModel):
    method: str
    case: str
    eval_order: int
    radial: int = Field(default=24, ge=1, le=256)
    angular: int = Field(default=48, ge=1, le=1024)
    construction_order: int = 7
    scale: float = 1.0
    bandwidth: int = 15
    pinv_tol: float = 1e-10


class MapPoint(BaseModel):
    x: float
    y: float
    norm: float | None


class MapResponse(BaseModel):
    csv: str
    points: list[MapPoint]


def _cell_models(reports) -> list:
    return [
        CellReport(
            method=r.method,
            case=r.case,
            eval_order=r.eval_order,
            norm=_san(r.norm),
            condition=_san(r.condition_estimate),
            jitter=float(r.jitter),
            reason=r.reason,
        )
        for r in reports
    ]


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/mesh", response_model=MeshResponse)
def mesh_info(req: MeshRequest) -> MeshResponse:
    mesh = meshes.disk_case(req.level)
    fill = meshes.fill_distance(mesh, req.probe_density)
    return MeshResponse(
        level=req.level,
        n_vertices=mesh.n_vertices,
        n_triangles=mesh.n_triangles,
        n_boundary=mesh.n_boundary,
        dof=mesh.dof,
        m_bary=mesh.n_triangles,
        m_node=mesh.n_vertices,
        fill_distance=fill,
        h=0.5 * fill,
        vertices_text=meshes.export_vertices(mesh) if req.include_points else None,
        triangles_text=meshes.export_triangles(mesh) if req.include_points else None,
    )


@app.post("/benchmark", response_model=SweepResponse)
def run_sweep(req: SweepRequest) -> SweepResponse:
    try:
        result = bench.run_benchmark(req.to_config())
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return SweepResponse(
        tables=result.tables,
        reports=_cell_models(result.reports),
        reports_csv=result.reports_csv,
        h={case: float(v) for case, v in result.h.items()},
    )


@app.post("/orders", response_model=OrdersResponse)
def run_orders(req: SweepRequest) -> OrdersResponse:
    try:
        result = bench.run_benchmark(req.to_config())
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    csv_text, rows = bench.convergence_orders(result.reports)
    return OrdersResponse(
        csv=csv_text,
        rows=[
            OrderRow(
                method=row["method"],
                eval_order=row["eval_order"],
                step=row["step"],
                ratio=_san(row["ratio"]),
                estimated_order=_san(row["estimated_order"]),
            )
            for row in rows
        ],
    )


@app.post("/map", response_model=MapResponse)
def run_map(req: MapRequest) -> MapResponse:
    config = bench.BenchmarkConfig(
        construction_order=req.construction_order,
        scale=req.scale,
        bandwidth=req.bandwidth,
        pinv_tol=req.pinv_tol,
        map_radial=req.radial,
        map_angular=req.angular,
    )
    if req.method not in solvers.METHOD_NAMES:
        raise HTTPException(status_code=422, detail=f"unknown method {req.method!r}")
    if req.case not in bench.CASE_NAMES:
        raise HTTPException(status_code=422, detail=f"unknown case {req.case!r}")
    try:
        csv_text, rows = bench.error_map(
            config, req.method, req.case, req.eval_order,
            grid=(req.radial, req.angular),
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return MapResponse(
        csv=csv_text,
        points=[MapPoint(x=x, y=y, norm=_san(n)) for x, y, n in rows],
    )
