"""Unit-disk triangulation family: eight congruent sector triangles
around the origin, refined uniformly with curved-boundary tracking.

Refinement splits every triangle into four by edge midpoints; midpoints
of boundary edges are projected radially back onto the unit circle so
the discrete domain keeps following the disk instead of freezing at the
initial polygon.  Vertex ordering is deterministic: parents first, then
midpoints sorted by their (parent) edge index pair.
"""

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree


def _frozen(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class DiskMesh:
    vertices: np.ndarray       # (V, 2) float
    triangles: np.ndarray      # (T, 3) int, counterclockwise
    boundary_mask: np.ndarray  # (V,) bool
    level: int

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_boundary(self) -> int:
        return int(self.boundary_mask.sum())

    @property
    def dof(self) -> int:
        # interior vertices = unknowns of the Dirichlet problem
        return self.n_vertices - self.n_boundary

    def barycenters(self) -> np.ndarray:
        return self.vertices[self.triangles].mean(axis=1)

    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        u = p[:, 1] - p[:, 0]
        v = p[:, 2] - p[:, 0]
        return 0.5 * (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])


def base_disk() -> DiskMesh:
    """Level-0 mesh: origin plus 8 unit-circle vertices, 8 triangles."""
    angles = np.arange(8) * (np.pi / 4.0)
    vertices = np.vstack([[0.0, 0.0], np.column_stack([np.cos(angles), np.sin(angles)])])
    triangles = np.array([[0, 1 + k, 1 + (k + 1) % 8] for k in range(8)], dtype=int)
    mask = np.zeros(9, dtype=bool)
    mask[1:] = True
    return DiskMesh(_frozen(vertices), _frozen(triangles), _frozen(mask), 0)


def refine(mesh: DiskMesh) -> DiskMesh:
    """Regular 1-to-4 refinement with radial projection of boundary midpoints."""
    tris = mesh.triangles
    edge_use = Counter()
    for a, b, c in tris:
        for i, j in ((a, b), (b, c), (c, a)):
            edge_use[(min(i, j), max(i, j))] += 1

    old = mesh.vertices
    n_old = len(old)
    mid_index = {}
    mid_points = []
    mid_boundary = []
    for k, edge in enumerate(sorted(edge_use)):
        i, j = edge
        p = 0.5 * (old[i] + old[j])
        if edge_use[edge] == 1:  # boundary edge: exactly one incident triangle
            p = p / np.hypot(p[0], p[1])
            mid_boundary.append(True)
        else:
            mid_boundary.append(False)
        mid_index[edge] = n_old + k
        mid_points.append(p)

    vertices = np.vstack([old, np.array(mid_points)])
    mask = np.concatenate([mesh.boundary_mask, np.array(mid_boundary, dtype=bool)])

    children = []
    for a, b, c in tris:
        ab = mid_index[(min(a, b), max(a, b))]
        bc = mid_index[(min(b, c), max(b, c))]
        ca = mid_index[(min(c, a), max(c, a))]
        children += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    triangles = np.array(children, dtype=int)

    return DiskMesh(_frozen(vertices), _frozen(triangles), _frozen(mask), mesh.level + 1)


@lru_cache(maxsize=None)
def disk_case(level: int) -> DiskMesh:
    """The benchmark case C<level>; cached, meshes are immutable."""
    if level < 0:
        raise ValueError("level must be >= 0")
    mesh = base_disk()
    for _ in range(level):
        mesh = refine(mesh)
    return mesh


def fill_distance(mesh: DiskMesh, probe_density: int = 400) -> float:
    """Largest distance from any point of the disk to the vertex set.

    Computed over a polar probe grid of about 2*probe_density^2 points;
    accuracy around 1% at the default density, which is all the mesh
    metadata needs.  The benchmark tables report h = fill_distance / 2
    (the mesh-size convention of their reference data); this function
    returns the literal fill distance.
    """
    if probe_density < 2:
        raise ValueError("probe_density too small")
    radii = np.linspace(0.0, 1.0, probe_density + 1)[1:]
    thetas = np.linspace(0.0, 2.0 * np.pi, 2 * probe_density, endpoint=False)
    r, t = np.meshgrid(radii, thetas)
    probes = np.column_stack([(r * np.cos(t)).ravel(), (r * np.sin(t)).ravel()])
    probes = np.vstack([[0.0, 0.0], probes])
    dist, _ = cKDTree(mesh.vertices).query(probes, k=1)
    return float(dist.max())


def point_sets(mesh: DiskMesh, data_variant: str):
    """Data layout (X, Y, Z) for a variant.

    X carries the PDE data: all triangle barycenters for "Bary", all
    vertices (boundary included) for "Node".  Y is the boundary vertex
    ring, Z the interior vertices where the discrete solution lives.
    """
    if data_variant == "Bary":
        X = mesh.barycenters()
    elif data_variant == "Node":
        X = mesh.vertices
    else:
        raise ValueError(f"unknown data variant {data_variant!r}")
    Y = mesh.vertices[mesh.boundary_mask]
    Z = mesh.vertices[~mesh.boundary_mask]
    return X, Y, Z


def export_vertices(mesh: DiskMesh) -> str:
    """One vertex per line: "x y boundary_flag"."""
    lines = [
        "%.17g %.17g %d" % (x, y, int(b))
        for (x, y), b in zip(mesh.vertices, mesh.boundary_mask)
    ]
    return "\n".join(lines) + "\n"


def export_triangles(mesh: DiskMesh) -> str:
    """One triangle per line: "i j k", zero-based vertex indices."""
    return "\n".join("%d %d %d" % tuple(t) for t in mesh.triangles) + "\n"
