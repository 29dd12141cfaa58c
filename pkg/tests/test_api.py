"""HTTP surface: the service endpoints wrap the library faithfully."""

import pytest
from fastapi.testclient import TestClient

from wcpde.api import app

client = TestClient(app)


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["version"] == "0.1.0"


def test_mesh_counts_level_one():
    resp = client.post("/mesh", json={"level": 1})
    assert resp.status_code == 200
    body = resp.json()
    assert body["n_boundary"] == 16
    assert body["n_triangles"] == 32
    assert body["n_vertices"] == 25
    assert body["dof"] == 9
    assert body["m_bary"] == 32
    assert body["m_node"] == 25
    assert body["vertices_text"] is None
    assert 0.0 < body["h"] < body["fill_distance"]


def test_mesh_point_export():
    resp = client.post("/mesh", json={"level": 0, "include_points": True})
    body = resp.json()
    first = body["vertices_text"].splitlines()[0].split()
    assert [float(first[0]), float(first[1])] == [0.0, 0.0]
    assert first[2] == "0"
    assert len(body["triangles_text"].splitlines()) == 8


def test_mesh_rejects_negative_level():
    assert client.post("/mesh", json={"level": -1}).status_code == 422


def test_benchmark_small_sweep():
    resp = client.post(
        "/benchmark",
        json={"cases": ["C0"], "eval_orders": [3, 4], "methods": ["OptBary", "FEMBary"]},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert "OptBary,2.16250e-02" in body["tables"]["4"]
    low = [r for r in body["reports"] if r["eval_order"] == 3]
    assert low and all(r["norm"] is None for r in low)
    assert all(r["reason"] == "order-too-low" for r in low)
    assert body["h"]["C0"] == pytest.approx(0.2701, rel=1e-3)


def test_benchmark_rejects_unknown_case():
    resp = client.post("/benchmark", json={"cases": ["C9"]})
    assert resp.status_code == 422


def test_orders_endpoint():
    resp = client.post(
        "/orders",
        json={"cases": ["C0", "C1"], "eval_orders": [4], "methods": ["OptBary"]},
    )
    assert resp.status_code == 200
    body = resp.json()
    row = body["rows"][0]
    assert row["step"] == "C0->C1"
    assert row["ratio"] == pytest.approx(5.02, rel=0.05)
    assert body["csv"].startswith("method,eval_order,step,ratio,estimated_order")


def test_map_endpoint_counts_and_nulls():
    resp = client.post(
        "/map",
        json={"method": "OptBary", "case": "C0", "eval_order": 3, "radial": 2, "angular": 4},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["points"]) == 1 + 2 * 4
    assert all(p["norm"] is None for p in body["points"])


def test_map_finite_values():
    resp = client.post(
        "/map",
        json={"method": "OptBary", "case": "C0", "eval_order": 4, "radial": 2, "angular": 4},
    )
    points = resp.json()["points"]
    assert all(p["norm"] is not None and p["norm"] >= 0.0 for p in points)


def test_map_rejects_unknown_names():
    bad_method = {"method": "Spectral", "case": "C0", "eval_order": 4}
    bad_case = {"method": "OptBary", "case": "C9", "eval_order": 4}
    bad_order = {"method": "OptBary", "case": "C0", "eval_order": 1}
    for payload in (bad_method, bad_case, bad_order):
        assert client.post("/map", json=payload).status_code == 422
