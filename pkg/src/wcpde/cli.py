"""Command line client for the solver-comparison service.

Every verb except `serve` talks HTTP to the service: against a remote
instance when --server is given, otherwise against an in-process ASGI
transport so no port or daemon is needed.  Results print as CSV on
stdout and can be written to files with --out.
"""

import argparse
import asyncio
import os
import sys

import httpx


def _split(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _client(server: str | None) -> httpx.AsyncClient:
    if server:
        return httpx.AsyncClient(base_url=server.rstrip("/"), timeout=1200.0)
    from .api import app

    return httpx.AsyncClient(
        transport=httpx.ASGITransport(app=app),
        base_url="http://wcpde.internal",
        timeout=None,
    )


async def _post(client, path, payload):
    resp = await client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise SystemExit(f"error: {path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _sweep_payload(args) -> dict:
    from . import benchmark as bench

    base = bench.load_config(args.config) if args.config else bench.BenchmarkConfig()
    payload = {
        "cases": list(base.cases),
        "methods": list(base.methods),
        "eval_orders": list(base.eval_orders),
        "construction_order": base.construction_order,
        "scale": base.scale,
        "eval_point": list(base.eval_point),
        "bandwidth": base.bandwidth,
        "pinv_tol": base.pinv_tol,
        "probe_density": base.probe_density,
        "workers": base.workers,
    }
    if args.cases:
        payload["cases"] = _split(args.cases)
    if args.methods:
        payload["methods"] = _split(args.methods)
    if args.orders:
        payload["eval_orders"] = [int(v) for v in _split(args.orders)]
    if args.construction_order is not None:
        payload["construction_order"] = args.construction_order
    if args.scale is not None:
        payload["scale"] = args.scale
    if args.bandwidth is not None:
        payload["bandwidth"] = args.bandwidth
    if args.pinv_tol is not None:
        payload["pinv_tol"] = args.pinv_tol
    if args.workers is not None:
        payload["workers"] = args.workers
    return payload


async def _cmd_mesh(client, args) -> int:
    levels = [int(v) for v in _split(args.levels)]
    print("case,n,m_bary,m_node,dof,fill_distance,h")
    for level in levels:
        data = await _post(
            client, "/mesh", {"level": level, "include_points": bool(args.out)}
        )
        print(
            "C%d,%d,%d,%d,%d,%.5e,%.5e"
            % (
                level,
                data["n_boundary"],
                data["m_bary"],
                data["m_node"],
                data["dof"],
                data["fill_distance"],
                data["h"],
            )
        )
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            with open(os.path.join(args.out, f"C{level}_vertices.txt"), "w") as fh:
                fh.write(data["vertices_text"])
            with open(os.path.join(args.out, f"C{level}_triangles.txt"), "w") as fh:
                fh.write(data["triangles_text"])
    return 0


async def _cmd_run(client, args) -> int:
    data = await _post(client, "/benchmark", _sweep_payload(args))
    tables = sorted(data["tables"].items(), key=lambda kv: int(kv[0]))
    for order, table in tables:
        print(f"# Sobolev order {order}")
        print(table)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for order, table in tables:
            with open(os.path.join(args.out, f"sobolev_order_{order}.csv"), "w") as fh:
                fh.write(table)
        with open(os.path.join(args.out, "reports.csv"), "w") as fh:
            fh.write(data["reports_csv"])
    return 0


async def _cmd_orders(client, args) -> int:
    data = await _post(client, "/orders", _sweep_payload(args))
    print(data["csv"], end="")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "orders.csv"), "w") as fh:
            fh.write(data["csv"])
    return 0


async def _cmd_map(client, args) -> int:
    payload = {
        "method": args.method,
        "case": args.case,
        "eval_order": args.order,
        "radial": args.radial,
        "angular": args.angular,
    }
    if args.construction_order is not None:
        payload["construction_order"] = args.construction_order
    if args.scale is not None:
        payload["scale"] = args.scale
    data = await _post(client, "/map", payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(data["csv"])
    else:
        print(data["csv"], end="")
    return 0


async def _dispatch(args) -> int:
    async with _client(args.server) as client:
        if args.command == "mesh":
            return await _cmd_mesh(client, args)
        if args.command == "run":
            return await _cmd_run(client, args)
        if args.command == "orders":
            return await _cmd_orders(client, args)
        if args.command == "map":
            return await _cmd_map(client, args)
    raise SystemExit(f"unknown command {args.command!r}")


def _add_sweep_flags(p):
    p.add_argument("--cases", help="comma list, e.g. C0,C1,C2")
    p.add_argument("--methods", help="comma list of method names")
    p.add_argument("--orders", help="comma list of evaluation orders, e.g. 4,5,6,7")
    p.add_argument("--construction-order", type=int, dest="construction_order")
    p.add_argument("--scale", type=float)
    p.add_argument("--bandwidth", type=int)
    p.add_argument("--pinv-tol", type=float, dest="pinv_tol")
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--out", help="directory for the CSV outputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcpde",
        description="Compare linear PDE solvers by exact worst-case error on the unit disk.",
    )
    parser.add_argument(
        "--server",
        help="base URL of a running service; default runs in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mesh", help="triangulation family summary and exports")
    p.add_argument("--levels", default="0,1,2,3,4", help="comma list of refinement levels")
    p.add_argument("--out", help="directory for vertex/triangle exports")

    p = sub.add_parser("run", help="benchmark sweep, one table per Sobolev order")
    _add_sweep_flags(p)

    p = sub.add_parser("orders", help="convergence orders from the sweep")
    _add_sweep_flags(p)

    p = sub.add_parser("map", help="pointwise error map over the disk")
    p.add_argument("--method", required=True)
    p.add_argument("--case", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--radial", type=int, default=24)
    p.add_argument("--angular", type=int, default=48)
    p.add_argument("--construction-order", type=int, dest="construction_order")
    p.add_argument("--scale", type=float)
    p.add_argument("--out", help="output CSV file")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("wcpde.api:app", host=args.host, port=args.port)
        return 0
    try:
        return asyncio.run(_dispatch(args))
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())
