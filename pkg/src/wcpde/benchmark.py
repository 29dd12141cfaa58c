"""Benchmark sweep: all methods on the disk cases, judged in a range of
Sobolev spaces, emitted as CSV tables.

One table per evaluation order with methods as rows and cases as
columns, plus an `h` row of mesh-size metadata; a flat report CSV with
one line per (method, case, order) cell.  Cells whose evaluation space
cannot judge the row (an operator pair too rough for the order) or whose
system collapses are recorded as NaN with a reason, never aborting the
sweep.  Reruns with the same configuration are bit-identical: the cell
jobs are pure and the output assembly is order-stable.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import mesh as meshes
from . import recovery, solvers
from .kernel import KernelSpec
from .recovery import ErrorReport
from .special import OrderTooLowError

CASE_NAMES = ("C0", "C1", "C2", "C3", "C4")
DEFAULT_CASES = ("C0", "C1", "C2", "C3")
EVAL_ORDERS = (3, 4, 5, 6, 7)


def _fmt(value) -> str:
    return "%.5e" % value  # 6 significant digits, scientific


@dataclass(frozen=True)
class BenchmarkConfig:
    cases: tuple = DEFAULT_CASES
    methods: tuple = solvers.METHOD_NAMES
    eval_orders: tuple = EVAL_ORDERS
    construction_order: int = 7
    scale: float = 1.0
    eval_point: tuple = (0.0, 0.0)
    bandwidth: int = 15
    pinv_tol: float = 1e-10
    output_dir: str | None = None
    map_radial: int = 24
    map_angular: int = 48
    probe_density: int = 400
    workers: int = 4

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(self.cases))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "eval_orders", tuple(int(o) for o in self.eval_orders))
        object.__setattr__(
            self, "eval_point", (float(self.eval_point[0]), float(self.eval_point[1]))
        )
        for case in self.cases:
            if case not in CASE_NAMES:
                raise ValueError(f"unknown case {case!r}")
        for method in self.methods:
            if method not in solvers.METHOD_NAMES:
                raise ValueError(f"unknown method {method!r}")
        for order in self.eval_orders:
            if order not in EVAL_ORDERS:
                raise ValueError(f"evaluation order {order} outside {EVAL_ORDERS}")
        if self.construction_order < 2:
            raise ValueError("construction order too low")
        if not self.scale > 0.0:
            raise ValueError("scale must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class BenchmarkResult:
    config: BenchmarkConfig
    reports: list
    tables: dict          # eval order -> CSV text
    reports_csv: str
    h: dict               # case -> mesh-size metadata (fill distance / 2)


def _case_mesh(case: str) -> meshes.DiskMesh:
    return meshes.disk_case(int(case[1:]))


def _cell(config: BenchmarkConfig, method: str, case: str):
    """All evaluation-order reports for one (method, case) cell."""
    mesh = _case_mesh(case)
    x = config.eval_point
    out = []

    if method in ("OptBary", "OptNode"):
        # the optimal method depends on the judging space itself
        for order in config.eval_orders:
            try:
                spec = KernelSpec(order, scale=config.scale)
                op = solvers.method_operator(method, mesh, eval_spec=spec)
                row = op.row_at(x)
                norm = recovery.error_norm(spec, row)
                out.append(
                    ErrorReport(
                        method, case, order, norm,
                        condition_estimate=op.report.condition_estimate,
                        jitter=op.report.jitter_used,
                    )
                )
            except OrderTooLowError:
                out.append(
                    ErrorReport(method, case, order, float("nan"), reason="order-too-low")
                )
            except np.linalg.LinAlgError:
                out.append(
                    ErrorReport(method, case, order, float("nan"), reason="singular-system")
                )
        return out

    try:
        construction = KernelSpec(config.construction_order, scale=config.scale)
        op = solvers.method_operator(
            method, mesh,
            construction=construction,
            bandwidth=config.bandwidth,
            pinv_tol=config.pinv_tol,
        )
        row = op.row_at(x)
    except (OrderTooLowError, np.linalg.LinAlgError) as exc:
        reason = (
            "order-too-low" if isinstance(exc, OrderTooLowError) else "singular-system"
        )
        return [
            ErrorReport(method, case, order, float("nan"), reason=reason)
            for order in config.eval_orders
        ]

    for order in config.eval_orders:
        try:
            spec = KernelSpec(order, scale=config.scale)
            norm = recovery.error_norm(spec, row)
            out.append(
                ErrorReport(
                    method, case, order, norm,
                    condition_estimate=op.report.condition_estimate,
                    jitter=op.report.jitter_used,
                )
            )
        except OrderTooLowError:
            out.append(
                ErrorReport(method, case, order, float("nan"), reason="order-too-low")
            )
    return out


def _render_table(config: BenchmarkConfig, order: int, lookup, h) -> str:
    lines = ["method," + ",".join(config.cases)]
    lines.append("h," + ",".join(_fmt(h[case]) for case in config.cases))
    for method in config.methods:
        cells = (_fmt(lookup[(method, case, order)].norm) for case in config.cases)
        lines.append(method + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def _render_reports(reports) -> str:
    lines = ["method,case,eval_order,norm,condition,jitter,reason"]
    for r in reports:
        lines.append(
            "%s,%s,%d,%s,%s,%s,%s"
            % (
                r.method, r.case, r.eval_order,
                _fmt(r.norm), _fmt(r.condition_estimate), _fmt(r.jitter), r.reason,
            )
        )
    return "\n".join(lines) + "\n"


def run_benchmark(config: BenchmarkConfig) -> BenchmarkResult:
    """Run the sweep; optionally write the CSV artifacts to output_dir."""
    cells = [(method, case) for method in config.methods for case in config.cases]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = {pair: pool.submit(_cell, config, *pair) for pair in cells}
        by_cell = {pair: fut.result() for pair, fut in futures.items()}

    lookup = {}
    for cell_reports in by_cell.values():
        for r in cell_reports:
            lookup[(r.method, r.case, r.eval_order)] = r

    reports = [
        lookup[(method, case, order)]
        for order in config.eval_orders
        for method in config.methods
        for case in config.cases
    ]
    h = {
        case: 0.5 * meshes.fill_distance(_case_mesh(case), config.probe_density)
        for case in config.cases
    }
    tables = {
        order: _render_table(config, order, lookup, h) for order in config.eval_orders
    }
    result = BenchmarkResult(
        config=config,
        reports=reports,
        tables=tables,
        reports_csv=_render_reports(reports),
        h=h,
    )
    if config.output_dir:
        write_outputs(result, config.output_dir)
    return result


def write_outputs(result: BenchmarkResult, directory) -> list:
    os.makedirs(directory, exist_ok=True)
    paths = []
    for order, table in sorted(result.tables.items()):
        path = os.path.join(directory, f"sobolev_order_{order}.csv")
        with open(path, "w") as fh:
            fh.write(table)
        paths.append(path)
    path = os.path.join(directory, "reports.csv")
    with open(path, "w") as fh:
        fh.write(result.reports_csv)
    paths.append(path)
    return paths


def convergence_orders(reports):
    """Error ratios across consecutive refinement levels.

    Returns (csv_text, rows); each row holds the ratio
    norm(C_L) / norm(C_{L+1}) and its log2, the estimated convergence
    order for that refinement step.  NaN cells are skipped.
    """
    groups: dict = {}
    for r in reports:
        if np.isfinite(r.norm):
            groups.setdefault((r.method, r.eval_order), {})[int(r.case[1:])] = r.norm

    rows = []
    for (method, order), by_level in sorted(
        groups.items(), key=lambda kv: (kv[0][1], kv[0][0])
    ):
        for level in sorted(by_level):
            if level + 1 not in by_level or by_level[level + 1] == 0.0:
                continue
            ratio = by_level[level] / by_level[level + 1]
            rows.append(
                {
                    "method": method,
                    "eval_order": order,
                    "step": f"C{level}->C{level + 1}",
                    "ratio": ratio,
                    "estimated_order": float(np.log2(ratio)) if ratio > 0 else float("nan"),
                }
            )
    lines = ["method,eval_order,step,ratio,estimated_order"]
    for row in rows:
        lines.append(
            "%s,%d,%s,%s,%s"
            % (
                row["method"], row["eval_order"], row["step"],
                _fmt(row["ratio"]), _fmt(row["estimated_order"]),
            )
        )
    return "\n".join(lines) + "\n", rows


def error_map(config: BenchmarkConfig, method: str, case: str, eval_order: int,
              grid=None):
    """Pointwise worst-case error over a polar grid of the disk.

    Returns (csv_text, rows) with rows of (x, y, norm).  The value at a
    data point that the method reproduces exactly approaches zero, and
    the value at the configured eval point equals the benchmark cell.
    """
    radial = grid[0] if grid else config.map_radial
    angular = grid[1] if grid else config.map_angular
    mesh = _case_mesh(case)
    spec = KernelSpec(eval_order, scale=config.scale)
    try:
        if method in ("OptBary", "OptNode"):
            op = solvers.method_operator(method, mesh, eval_spec=spec)
        else:
            construction = KernelSpec(config.construction_order, scale=config.scale)
            op = solvers.method_operator(
                method, mesh,
                construction=construction,
                bandwidth=config.bandwidth,
                pinv_tol=config.pinv_tol,
            )
    except OrderTooLowError:
        op = None  # space too rough to build the method: map is all NaN

    points = [(0.0, 0.0)]
    for i in range(1, radial + 1):
        r = i / radial
        for j in range(angular):
            t = 2.0 * np.pi * j / angular
            points.append((r * np.cos(t), r * np.sin(t)))

    rows = []
    for p in points:
        if op is None:
            rows.append((p[0], p[1], float("nan")))
            continue
        try:
            norm = recovery.error_norm(spec, op.row_at(p))
        except OrderTooLowError:
            norm = float("nan")
        rows.append((p[0], p[1], norm))
    lines = ["x,y,norm"]
    lines += ["%s,%s,%s" % (_fmt(x), _fmt(y), _fmt(n)) for x, y, n in rows]
    return "\n".join(lines) + "\n", rows


_LIST_KEYS = {"cases", "methods", "eval_orders"}
_INT_KEYS = {"construction_order", "bandwidth", "map_radial", "map_angular",
             "probe_density", "workers"}
_FLOAT_KEYS = {"scale", "pinv_tol"}


def load_config(path) -> BenchmarkConfig:
    """Read a declarative key = value configuration file.

    Unset keys keep the defaults, which reproduce the full benchmark.
    Lists are comma-separated (`orders` works as an alias for
    `eval_orders`); `eval_point` takes "x,y".
    """
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key == "orders":
                key = "eval_orders"
            if key in _LIST_KEYS:
                items = [v.strip() for v in val.split(",") if v.strip()]
                values[key] = tuple(int(v) for v in items) if key == "eval_orders" else tuple(items)
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key == "eval_point":
                x, y = val.split(",")
                values[key] = (float(x), float(y))
            elif key == "output_dir":
                values[key] = val
            else:
                known = sorted({f.name for f in fields(BenchmarkConfig)} | {"orders"})
                raise ValueError(f"{path}:{lineno}: unknown key {key!r} (known: {known})")
    return BenchmarkConfig(**values)
