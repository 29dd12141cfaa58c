"""The benchmark solvers, each reduced to an explicit recovery row.

Every method here answers the same question: given PDE data f at the
points X (minus-Laplacian values) and Dirichlet data g at the boundary
vertices Y, what linear combination of those numbers does the solver
report as the solution value at x?  Extracting that weight vector turns
each solver into a RecoveryRow whose worst-case error constant any
Sobolev space can then judge.

Data ordering is fixed everywhere: PDE functionals first (triangle
barycenters for the Bary variant, all vertices for the Node variant),
boundary point evaluations after.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix

from . import kernel, linalg
from . import mesh as meshes
from . import recovery
from .kernel import KernelSpec, minus_laplacian_at, point_evaluation

METHOD_NAMES = (
    "FEMBary",
    "FEMNode",
    "KansaBary",
    "KansaNode",
    "HOBary",
    "HONode",
    "OptBary",
    "OptNode",
    "LocNode",
)

_VERTEX_TOL = 1e-12


@dataclass(frozen=True)
class MethodConfig:
    method_kind: str
    data_variant: str = "Node"
    construction: KernelSpec | None = None
    bandwidth: int = 15
    pinv_tol: float = 1e-10

    def __post_init__(self):
        if self.method_kind not in METHOD_NAMES:
            raise ValueError(f"unknown method {self.method_kind!r}")
        if self.data_variant not in ("Bary", "Node"):
            raise ValueError(f"unknown data variant {self.data_variant!r}")
        if self.bandwidth < 1:
            raise ValueError("bandwidth must be positive")


@dataclass
class LinearRecoverySystem:
    A: np.ndarray          # system matrix ("stiffness" role)
    Bmat: np.ndarray       # data-to-rhs map for f
    Cmat: np.ndarray       # data-to-rhs map for g
    unknown_points: np.ndarray

    def dump(self, directory, prefix):
        import os

        os.makedirs(directory, exist_ok=True)
        for name, mat in (("A", self.A), ("B", self.Bmat), ("C", self.Cmat)):
            np.savetxt(
                os.path.join(directory, f"{prefix}_{name}.csv"),
                np.atleast_2d(mat),
                delimiter=",",
                fmt="%.17g",
            )
        np.savetxt(
            os.path.join(directory, f"{prefix}_unknown_points.csv"),
            np.atleast_2d(self.unknown_points),
            delimiter=",",
            fmt="%.17g",
        )


def dump_row(row: recovery.RecoveryRow, path):
    with open(path, "w") as fh:
        fh.write("x,y,kind,weight\n")
        for f, w in zip(row.functionals, row.weights):
            fh.write("%.17g,%.17g,%s,%.17g\n" % (f.point[0], f.point[1], f.kind, w))


def data_functionals(mesh: meshes.DiskMesh, variant: str):
    """PDE functionals at X then boundary evaluations at Y, as one tuple."""
    X, Y, _ = meshes.point_sets(mesh, variant)
    pde = tuple(minus_laplacian_at(p) for p in X)
    bnd = tuple(point_evaluation(p) for p in Y)
    return pde + bnd


def _vertex_index(mesh, x):
    d = np.hypot(mesh.vertices[:, 0] - x[0], mesh.vertices[:, 1] - x[1])
    j = int(np.argmin(d))
    return j if d[j] <= _VERTEX_TOL else None


def _barycentric_locate(mesh, x):
    # first triangle containing x (tolerance covers edge hits); a point in
    # the sliver between a boundary chord and the unit circle extrapolates
    # linearly from the least-violated triangle
    p = mesh.vertices[mesh.triangles]
    v0 = p[:, 1] - p[:, 0]
    v1 = p[:, 2] - p[:, 0]
    w = np.asarray(x, dtype=float) - p[:, 0]
    det = v0[:, 0] * v1[:, 1] - v0[:, 1] * v1[:, 0]
    l1 = (w[:, 0] * v1[:, 1] - w[:, 1] * v1[:, 0]) / det
    l2 = (v0[:, 0] * w[:, 1] - v0[:, 1] * w[:, 0]) / det
    l0 = 1.0 - l1 - l2
    inside = (l0 >= -1e-12) & (l1 >= -1e-12) & (l2 >= -1e-12)
    hits = np.where(inside)[0]
    if hits.size:
        t = int(hits[0])
        return t, np.array([l0[t], l1[t], l2[t]])
    short = np.minimum(np.minimum(l0, l1), l2)
    t = int(np.argmax(short))
    if short[t] < -0.35:
        raise ValueError(f"point {tuple(x)} lies outside the mesh")
    return t, np.array([l0[t], l1[t], l2[t]])


class _NodalRowOperator:
    """Shared machinery for solvers whose native unknowns are vertex values.

    Subclasses provide f/g weight blocks per interior vertex; rows at
    boundary vertices are the Dirichlet datum itself, and rows at
    arbitrary points are barycentric combinations of the three vertex
    rows of the containing triangle.
    """

    mesh: meshes.DiskMesh
    functionals: tuple
    report: linalg.FactorizationReport

    def _interior_row(self, slot: int) -> np.ndarray:
        raise NotImplementedError

    def vertex_row(self, j: int) -> np.ndarray:
        mask = self.mesh.boundary_mask
        n_pde = sum(1 for f in self.functionals if f.kind == "op")
        if mask[j]:
            w = np.zeros(len(self.functionals))
            w[n_pde + int(mask[:j].sum())] = 1.0
            return w
        slot = int((~mask)[:j].sum())
        return self._interior_row(slot)

    def row_at(self, x) -> recovery.RecoveryRow:
        j = _vertex_index(self.mesh, x)
        if j is not None:
            w = self.vertex_row(j)
        else:
            t, lam = _barycentric_locate(self.mesh, x)
            tri = self.mesh.triangles[t]
            w = sum(lam[i] * self.vertex_row(int(tri[i])) for i in range(3))
        return recovery.RecoveryRow(
            x=tuple(x), functionals=self.functionals, weights=w, report=self.report
        )


class _FemOperator(_NodalRowOperator):
    """Piecewise-linear finite elements on the disk triangulation.

    The Bary variant loads f with one-point barycenter quadrature,
    (f, v_j) ~ sum_T area/3 per vertex of T.  The Node variant
    interpolates f at the vertices and applies the same one-point rule
    to the interpolant, which spreads area/9 over all vertex pairs of T.
    """

    def __init__(self, mesh, variant):
        self.mesh = mesh
        self.variant = variant
        self.functionals = data_functionals(mesh, variant)
        V, T = mesh.vertices, mesh.triangles
        n = len(V)
        A = np.zeros((n, n))
        areas = np.empty(len(T))
        for t, (a, b, c) in enumerate(T):
            (x1, y1), (x2, y2), (x3, y3) = V[a], V[b], V[c]
            bb = np.array([y2 - y3, y3 - y1, y1 - y2])
            cc = np.array([x3 - x2, x1 - x3, x2 - x1])
            area = (bb[0] * cc[1] - bb[1] * cc[0]) / 2.0
            areas[t] = area
            idx = (a, b, c)
            A[np.ix_(idx, idx)] += (np.outer(bb, bb) + np.outer(cc, cc)) / (4.0 * area)

        if variant == "Bary":
            B = np.zeros((n, len(T)))
            for t, tri in enumerate(T):
                B[tri, t] += areas[t] / 3.0
        else:
            B = np.zeros((n, n))
            for t, tri in enumerate(T):
                B[np.ix_(tri, tri)] += areas[t] / 9.0

        I = np.where(~mesh.boundary_mask)[0]
        D = np.where(mesh.boundary_mask)[0]
        self._A_II = A[np.ix_(I, I)]
        self._A_ID = A[np.ix_(I, D)]
        self._B_I = B[I, :]
        self._factor, self.report = linalg.spd_factor(self._A_II)
        self._rows: dict = {}
        self.system = LinearRecoverySystem(
            A=self._A_II, Bmat=self._B_I, Cmat=-self._A_ID, unknown_points=V[I]
        )

    def _interior_row(self, slot):
        w = self._rows.get(slot)
        if w is None:
            e = np.zeros(self._A_II.shape[0])
            e[slot] = 1.0
            y = linalg.spd_solve(self._factor, e)
            w = np.concatenate([y @ self._B_I, -(y @ self._A_ID)])
            self._rows[slot] = w
        return w


class _CollocationOperator:
    """Symmetric kernel collocation; also the error-optimal method.

    The Gram matrix of the data functionals in the construction space is
    exactly the block collocation matrix [[LLK(X,X), LK(X,Y)],
    [LK(Y,X), K(Y,Y)]] under the minus-Laplacian sign convention, and the
    evaluation vector is the cross vector, so the recovery row solves
    Gram . c = k(x).  With construction kernel equal to the evaluation
    kernel this is, identically, the optimal recovery.
    """

    def __init__(self, mesh, variant, spec: KernelSpec):
        self.mesh = mesh
        self.spec = spec
        self.functionals = data_functionals(mesh, variant)
        G = kernel.gram_matrix(self.spec, self.functionals)
        self._factor, self.report = linalg.spd_factor(G)
        n_pde = sum(1 for f in self.functionals if f.kind == "op")
        N = len(self.functionals)
        self.system = LinearRecoverySystem(
            A=np.asarray(G),
            Bmat=np.eye(N)[:, :n_pde],
            Cmat=np.eye(N)[:, n_pde:],
            unknown_points=np.array([f.point for f in self.functionals]),
        )

    def row_at(self, x) -> recovery.RecoveryRow:
        k = kernel.cross_vector(self.spec, x, self.functionals)
        c = linalg.spd_solve(self._factor, k)
        return recovery.RecoveryRow(
            x=tuple(x), functionals=self.functionals, weights=c, report=self.report
        )


class _KansaOperator:
    """Unsymmetric collocation on a trial basis of kernel translates.

    Trial functions K(., z) for z in the center set Z are collocated at
    the PDE points and boundary points; the rectangular system is
    inverted by a truncated-SVD pseudoinverse and premultiplied by the
    evaluation vector K(x, Z).
    """

    def __init__(self, functionals, construction: KernelSpec, centers, pinv_tol):
        self.functionals = tuple(functionals)
        self.spec = construction
        self.centers = tuple(point_evaluation(z) for z in centers)
        if len(self.centers) > len(self.functionals):
            raise ValueError("center set larger than the data set")
        A = kernel.pair_matrix(construction, self.functionals, self.centers)
        self._pinv, self.report = linalg.pinv_matrix(A, pinv_tol)
        n_pde = sum(1 for f in self.functionals if f.kind == "op")
        N = len(self.functionals)
        self.system = LinearRecoverySystem(
            A=A,
            Bmat=np.eye(N)[:, :n_pde],
            Cmat=np.eye(N)[:, n_pde:],
            unknown_points=np.array([f.point for f in self.centers]),
        )

    def row_at(self, x) -> recovery.RecoveryRow:
        kz = kernel.pair_matrix(self.spec, [point_evaluation(x)], self.centers)[0]
        return recovery.RecoveryRow(
            x=tuple(x),
            functionals=self.functionals,
            weights=kz @ self._pinv,
            report=self.report,
        )


class _GfdOperator(_NodalRowOperator):
    """Generalized finite differences from kernel stencils (Node data).

    For every vertex, the minus-Laplacian at that vertex is recovered
    optimally in the construction RKHS from the `bandwidth` nearest
    vertices; the stencil weights play the role of a sparse stiffness
    matrix.  Dirichlet columns move to the right-hand side and the
    overdetermined global system (one equation per vertex, one unknown
    per interior vertex) is solved least-squares.
    """

    def __init__(self, mesh, construction: KernelSpec, bandwidth, pinv_tol):
        bandwidth = min(int(bandwidth), mesh.n_vertices)
        self.mesh = mesh
        self.functionals = data_functionals(mesh, "Node")
        V = mesh.vertices
        n = len(V)
        evals = [point_evaluation(v) for v in V]
        rows, cols, vals = [], [], []
        worst = None
        for j in range(n):
            d2 = (V[:, 0] - V[j, 0]) ** 2 + (V[:, 1] - V[j, 1]) ** 2
            nb = np.argsort(d2, kind="stable")[:bandwidth]
            local = [evals[i] for i in nb]
            G = kernel.gram_matrix(construction, local, cached=False)
            rhs = kernel.pair_matrix(construction, [minus_laplacian_at(V[j])], local)[0]
            alpha, rep = linalg.solve_spd(G, rhs)
            if worst is None or rep.condition_estimate > worst.condition_estimate:
                worst = rep
            rows += [j] * len(nb)
            cols += list(nb)
            vals += list(alpha)
        W = csr_matrix((vals, (rows, cols)), shape=(n, n))
        self.stencils = W
        I = np.where(~mesh.boundary_mask)[0]
        D = np.where(mesh.boundary_mask)[0]
        W_I = W[:, I].toarray()
        self._W_D = W[:, D].toarray()
        self._pinv, report = linalg.pinv_matrix(W_I, pinv_tol)
        # report the worse of the two stages: local stencil Grams vs global solve
        self.report = (
            worst if worst.condition_estimate > report.condition_estimate else report
        )
        self.report.truncated_rank = report.truncated_rank
        self._rows: dict = {}
        self.system = LinearRecoverySystem(
            A=W_I, Bmat=np.eye(n), Cmat=-self._W_D, unknown_points=V[I]
        )

    def _interior_row(self, slot):
        w = self._rows.get(slot)
        if w is None:
            r = self._pinv[slot]
            w = np.concatenate([r, -(r @ self._W_D)])
            self._rows[slot] = w
        return w


@lru_cache(maxsize=64)
def _fem_operator(mesh, variant):
    return _FemOperator(mesh, variant)


@lru_cache(maxsize=64)
def _collocation_operator(mesh, variant, spec):
    return _CollocationOperator(mesh, variant, spec)


@lru_cache(maxsize=64)
def _kansa_operator(mesh, variant, spec, pinv_tol):
    fs = data_functionals(mesh, variant)
    return _KansaOperator(fs, spec, mesh.vertices, pinv_tol)


@lru_cache(maxsize=64)
def _gfd_operator(mesh, spec, bandwidth, pinv_tol):
    return _GfdOperator(mesh, spec, bandwidth, pinv_tol)


def fem_recovery(mesh, variant, x) -> recovery.RecoveryRow:
    """P1 finite-element recovery row at x (vertex or interior point)."""
    return _fem_operator(mesh, variant).row_at(tuple(x))


def symmetric_collocation_recovery(mesh, variant, construction, x) -> recovery.RecoveryRow:
    """Symmetric collocation row; optimal in the construction space."""
    return _collocation_operator(mesh, variant, construction).row_at(tuple(x))


def kansa_recovery(mesh, variant, construction, x, centers=None, pinv_tol=1e-10):
    """Unsymmetric collocation row; centers default to all mesh vertices."""
    if centers is None:
        return _kansa_operator(mesh, variant, construction, pinv_tol).row_at(tuple(x))
    fs = data_functionals(mesh, variant)
    return _KansaOperator(fs, construction, centers, pinv_tol).row_at(tuple(x))


def gfd_local_recovery(mesh, construction, bandwidth, x, pinv_tol=1e-12):
    """Bandwidth-limited kernel finite-difference row (Node data)."""
    return _gfd_operator(mesh, construction, bandwidth, pinv_tol).row_at(tuple(x))


def method_operator(name, mesh, construction=None, eval_spec=None,
                    bandwidth=15, pinv_tol=1e-10):
    """Uniform access to every benchmark method's row operator.

    Opt* methods recover optimally in the evaluation space itself, so
    they take eval_spec; the fixed-kernel methods take `construction`
    (Sobolev order 7 at scale 1 in the benchmark).
    """
    if name in ("FEMBary", "FEMNode"):
        return _fem_operator(mesh, name[3:])
    if name in ("HOBary", "HONode"):
        return _collocation_operator(mesh, name[2:], construction)
    if name in ("OptBary", "OptNode"):
        return _collocation_operator(mesh, name[3:], eval_spec)
    if name in ("KansaBary", "KansaNode"):
        return _kansa_operator(mesh, name[5:], construction, pinv_tol)
    if name == "LocNode":
        return _gfd_operator(mesh, construction, bandwidth, pinv_tol)
    raise ValueError(f"unknown method {name!r}")
