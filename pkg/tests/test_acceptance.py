"""End-to-end acceptance checks for the comparison pipeline.

Each test pins one externally checkable property of the whole package:
mesh fidelity, agreement with the published error tables, optimality of
the kernel collocation construction, convergence rates, and the honesty
of the conditioning diagnostics on the finest case.
"""

import time

import numpy as np
import pytest

from wcpde import (
    BenchmarkConfig,
    KernelSpec,
    RecoveryRow,
    clear_gram_cache,
    data_functionals,
    disk_case,
    error_norm,
    matern_g,
    matern_laplacian_profile,
    optimal_norm_direct,
    optimal_recovery,
    point_evaluation,
    run_benchmark,
)
from wcpde import mesh as meshes
from wcpde import solvers

CASES = ("C0", "C1", "C2", "C3")

MESH_TABLE = {
    # case: (boundary points, barycenter count, vertex count, interior dof)
    "C0": (8, 8, 9, 1),
    "C1": (16, 32, 25, 9),
    "C2": (32, 128, 81, 49),
    "C3": (64, 512, 289, 225),
    "C4": (128, 2048, 1089, 961),
}

# published worst-case error constants of the optimal method at the
# disk center, by (method, case, evaluation order)
PUBLISHED_OPTIMAL = {
    ("OptBary", "C0", 4): 2.163e-2,
    ("OptBary", "C0", 5): 5.031e-3,
    ("OptBary", "C0", 6): 1.600e-3,
    ("OptBary", "C1", 4): 4.308e-3,
    ("OptBary", "C1", 5): 3.304e-4,
    ("OptBary", "C1", 6): 2.949e-5,
    ("OptBary", "C2", 4): 9.355e-4,
    ("OptBary", "C2", 5): 3.106e-5,
    ("OptBary", "C2", 6): 1.222e-6,
    ("OptNode", "C0", 4): 2.029e-2,
    ("OptNode", "C0", 5): 3.278e-3,
    ("OptNode", "C0", 6): 6.730e-4,
    ("OptNode", "C1", 4): 5.770e-3,
    ("OptNode", "C1", 5): 3.977e-4,
    ("OptNode", "C1", 6): 3.811e-5,
    ("OptNode", "C2", 4): 1.463e-3,
    ("OptNode", "C2", 5): 4.798e-5,
    ("OptNode", "C2", 6): 1.901e-6,
}


def test_triangulation_family_matches_published_counts():
    start = time.monotonic()
    chain = [meshes.base_disk()]
    for _ in range(4):
        chain.append(meshes.refine(chain[-1]))
    elapsed = time.monotonic() - start
    for level, mesh in enumerate(chain):
        n, m_bary, m_node, dof = MESH_TABLE[f"C{level}"]
        assert mesh.n_boundary == n
        assert mesh.n_triangles == m_bary
        assert mesh.n_vertices == m_node
        assert mesh.dof == dof
    assert elapsed < 1.0


def test_optimal_error_constants_match_published_tables():
    clear_gram_cache()
    solvers._collocation_operator.cache_clear()
    config = BenchmarkConfig(
        cases=("C0", "C1", "C2"),
        methods=("OptBary", "OptNode"),
        eval_orders=(4, 5, 6),
    )
    start = time.monotonic()
    result = run_benchmark(config)
    elapsed = time.monotonic() - start
    lookup = {(r.method, r.case, r.eval_order): r.norm for r in result.reports}
    for key, published in PUBLISHED_OPTIMAL.items():
        assert lookup[key] == pytest.approx(published, rel=0.15), key
    assert elapsed < 30.0


def test_top_order_collocation_attains_the_optimum(cell_lookup):
    for case in CASES:
        for method, optimum in (("HOBary", "OptBary"), ("HONode", "OptNode")):
            a = cell_lookup[(method, case, 7)].norm
            b = cell_lookup[(optimum, case, 7)].norm
            assert np.isfinite(a) and np.isfinite(b)
            assert abs(a - b) <= 1e-6 * b, (method, case)


def test_no_method_beats_the_optimal_recovery(full_benchmark, cell_lookup):
    result, _ = full_benchmark
    pairing = {
        "FEMBary": "OptBary", "KansaBary": "OptBary", "HOBary": "OptBary",
        "FEMNode": "OptNode", "KansaNode": "OptNode", "HONode": "OptNode",
        "LocNode": "OptNode",
    }
    checked = 0
    for r in result.reports:
        if r.method not in pairing or not np.isfinite(r.norm):
            continue
        optimum = cell_lookup[(pairing[r.method], r.case, r.eval_order)].norm
        assert r.norm >= optimum - 1e-12, (r.method, r.case, r.eval_order)
        checked += 1
    assert checked == 7 * len(CASES) * 4  # orders 4..7 produce values


def test_fem_error_converges_at_second_order(full_benchmark, cell_lookup):
    result, _ = full_benchmark
    log_h = np.log([result.h[case] for case in CASES])
    for order in (4, 5, 6):
        norms = [cell_lookup[("FEMBary", case, order)].norm for case in CASES]
        slope = np.polyfit(log_h, np.log(norms), 1)[0]
        assert 1.6 <= slope <= 2.4, order
    assert cell_lookup[("FEMBary", "C1", 4)].norm == pytest.approx(5.296e-3, rel=0.40)


def _radial_laplacian_fd(f, r, h, dim=2):
    # fourth-order central differences for f'' + (d-1)/r f'
    d2 = (-f(r + 2 * h) + 16 * f(r + h) - 30 * f(r) + 16 * f(r - h) - f(r - 2 * h)) / (
        12 * h**2
    )
    d1 = (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h)
    return d2 + (dim - 1) / r * d1


def test_kernel_laplacian_profiles_match_finite_differences():
    rng = np.random.default_rng(11)
    start = time.monotonic()
    for nu in (4, 5, 6):
        for total in (1, 2):
            if total == 1:
                base = lambda rr: matern_g(nu, rr)
            else:
                base = lambda rr: matern_laplacian_profile(nu, 2, 1, rr)
            for r in rng.uniform(0.05, 4.0, 100):
                h = 1e-3 * max(1.0, r)
                fd = _radial_laplacian_fd(base, r, h)
                exact = matern_laplacian_profile(nu, 2, total, r)
                assert abs(fd - exact) / max(abs(exact), 1e-12) < 1e-5, (nu, total, r)
    assert time.monotonic() - start < 5.0


def test_direct_and_quadratic_optimal_norms_agree():
    x = (0.0, 0.0)
    for case in CASES:
        mesh = disk_case(int(case[1]))
        for variant in ("Bary", "Node"):
            fs = data_functionals(mesh, variant)
            for order in (4, 5, 6, 7):
                spec = KernelSpec(order)
                row = optimal_recovery(spec, x, fs)
                qform = error_norm(spec, row)
                direct = optimal_norm_direct(spec, x, fs, row.weights)
                c = np.asarray(row.weights)
                # a ridge of size eps shifts the squared norms apart by
                # exactly eps * |c|^2, so allow that on top of roundoff
                ridge = row.report.jitter_used * float(c @ c)
                tol = 1e-8 * spec.diagonal() + 1.5 * ridge / max(direct + qform, 1e-30)
                assert abs(direct - qform) <= tol, (case, variant, order)


def test_ignoring_all_data_leaves_the_kernel_diagonal():
    spec = KernelSpec(3)
    mesh = disk_case(0)
    fs = tuple(point_evaluation(p) for p in mesh.vertices[mesh.boundary_mask])
    row = RecoveryRow(x=(0.0, 0.0), functionals=fs, weights=np.zeros(len(fs)))
    assert error_norm(spec, row) == 0.5


def test_optimal_rows_are_cardinal_at_data_sites():
    spec = KernelSpec(5)
    for level in (0, 1):
        mesh = disk_case(level)
        for variant in ("Bary", "Node"):
            fs = data_functionals(mesh, variant)
            worst = 0.0
            for i, f in enumerate(fs):
                if f.kind != "eval":
                    continue
                row = optimal_recovery(spec, f.point, fs)
                e = np.zeros(len(fs))
                e[i] = 1.0
                worst = max(worst, float(np.max(np.abs(row.weights - e))))
            assert worst <= 1e-7, (level, variant, worst)


def test_finest_case_records_conditioning_honestly():
    config = BenchmarkConfig(
        cases=("C4",),
        methods=("OptBary", "OptNode", "HOBary", "HONode"),
        eval_orders=(6, 7),
    )
    result = run_benchmark(config)
    assert len(result.reports) == 4 * 2
    for r in result.reports:
        assert np.isfinite(r.condition_estimate) and r.condition_estimate > 0.0
        assert r.jitter >= 0.0
    # the finest case is genuinely ill conditioned; the reports say so
    assert max(r.condition_estimate for r in result.reports) > 1e10


def test_full_default_benchmark_is_fast_enough(full_benchmark):
    result, elapsed = full_benchmark
    assert len(result.reports) == 9 * 4 * 5
    assert "C4" not in result.config.cases  # finest case is opt-in
    assert elapsed < 600.0
