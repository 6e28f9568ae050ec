"""Triangular meshes: storage, connectivity, element geometry and edge flips."""

# this_file: src/dmpfem/core/mesh.py

import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from dmpfem.api.exceptions import (
    DegenerateTriangleError,
    MeshValidationError,
    NonConvexQuadError,
    NonManifoldError,
)
from dmpfem.core.geometry import Vec2
from dmpfem.utils.logging import logger

DEGENERACY_FACTOR = 1e-14


class Rectangle(BaseModel):
    """Axis-aligned rectangle ``[x0, x1] x [y0, y1]``."""

    model_config = ConfigDict(frozen=True)

    x0: float = 0.0
    y0: float = 0.0
    x1: float = 1.0
    y1: float = 1.0

    @model_validator(mode="after")
    def _check_extent(self) -> "Rectangle":
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise MeshValidationError(f"empty rectangle [{self.x0}, {self.x1}]x[{self.y0}, {self.y1}]")
        return self

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @classmethod
    def bounding(cls, points: NDArray[np.float64]) -> "Rectangle":
        """Bounding box of a point cloud."""
        lo = points.min(axis=0)
        hi = points.max(axis=0)
        return cls(x0=float(lo[0]), y0=float(lo[1]), x1=float(hi[0]), y1=float(hi[1]))

    def contains(self, points: NDArray[np.float64], tol: float = 1e-12) -> NDArray[np.bool_]:
        """Mask of points inside the closed rectangle (with a relative slack)."""
        sx, sy = tol * self.width, tol * self.height
        return (
            (points[..., 0] >= self.x0 - sx)
            & (points[..., 0] <= self.x1 + sx)
            & (points[..., 1] >= self.y0 - sy)
            & (points[..., 1] <= self.y1 + sy)
        )


def signed_double_areas(vertices: NDArray[np.float64], triangles: NDArray[np.int64]) -> NDArray[np.float64]:
    p = vertices[triangles]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    return e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]


def edge_scale_sq(vertices: NDArray[np.float64], triangles: NDArray[np.int64]) -> NDArray[np.float64]:
    p = vertices[triangles]
    lengths = [np.sum((p[:, a] - p[:, b]) ** 2, axis=1) for a, b in ((0, 1), (1, 2), (2, 0))]
    return np.max(np.stack(lengths, axis=1), axis=1)


class Mesh:
    """An immutable, counterclockwise-oriented triangular mesh."""

    def __init__(
        self,
        vertices: ArrayLike,
        triangles: ArrayLike,
        domain: Rectangle | None = None,
    ) -> None:
        """Validate and freeze vertex and triangle arrays.

        Args:
            vertices: ``(N_v, 2)`` coordinates.
            triangles: ``(N, 3)`` vertex indices, counterclockwise.
            domain: Rectangle covered by the mesh; the vertex bounding box if omitted.

        Raises:
            MeshValidationError: On non-finite coordinates, bad indices,
                duplicate vertices or triangles, or non-positive / degenerate areas.
        """
        v = np.array(vertices, dtype=np.float64).reshape(-1, 2)
        t = np.array(triangles, dtype=np.int64).reshape(-1, 3)

        if v.shape[0] == 0 or t.shape[0] == 0:
            raise MeshValidationError("mesh needs at least one vertex and one triangle")
        if not np.all(np.isfinite(v)):
            raise MeshValidationError("vertex coordinates must be finite")
        if t.min() < 0 or t.max() >= v.shape[0]:
            raise MeshValidationError("triangle vertex index out of range")
        if np.any((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])):
            raise MeshValidationError("triangle with repeated vertex")
        unused = np.setdiff1d(np.arange(v.shape[0]), t)
        if unused.size:
            raise MeshValidationError(
                f"vertex {int(unused[0])} belongs to no triangle", {"vertex": int(unused[0])}
            )
        order = np.lexsort((v[:, 1], v[:, 0]))
        same = np.all(v[order[1:]] == v[order[:-1]], axis=1)
        if same.any():
            k = int(np.argmax(same))
            a, b = sorted((int(order[k]), int(order[k + 1])))
            raise MeshValidationError(
                f"vertices {a} and {b} have duplicate coordinates", {"vertex": b, "duplicate_of": a}
            )

        keys = np.sort(t, axis=1)
        if np.unique(keys, axis=0).shape[0] != t.shape[0]:
            raise MeshValidationError("duplicate triangles")

        dbl = signed_double_areas(v, t)
        bad = np.flatnonzero(dbl <= DEGENERACY_FACTOR * edge_scale_sq(v, t))
        if bad.size:
            first = int(bad[0])
            kind = "negative area (clockwise)" if dbl[first] < 0 else "degenerate area"
            raise MeshValidationError(
                f"triangle {first} has {kind}",
                {"triangle": first, "count": int(bad.size)},
            )

        v.setflags(write=False)
        t.setflags(write=False)
        self.vertices: NDArray[np.float64] = v
        self.triangles: NDArray[np.int64] = t
        self.domain = domain if domain is not None else Rectangle.bounding(v)

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])

    def vertex(self, i: int) -> Vec2:
        """Coordinates of vertex ``i``."""
        return Vec2(float(self.vertices[i, 0]), float(self.vertices[i, 1]))

    def corners(self, t: int) -> NDArray[np.float64]:
        """``(3, 2)`` coordinates of triangle ``t``."""
        return self.vertices[self.triangles[t]]

    def areas(self) -> NDArray[np.float64]:
        """Areas of all triangles."""
        return 0.5 * signed_double_areas(self.vertices, self.triangles)

    def total_area(self) -> float:
        return float(math.fsum(self.areas()))

    def same_as(self, other: "Mesh") -> bool:
        """Same vertices and the same triangle set (order and rotation ignored)."""
        if self.vertices.shape != other.vertices.shape or self.n_triangles != other.n_triangles:
            return False
        if not np.array_equal(self.vertices, other.vertices):
            return False
        mine = {_canonical_triangle(tri) for tri in self.triangles.tolist()}
        theirs = {_canonical_triangle(tri) for tri in other.triangles.tolist()}
        return mine == theirs

    def __repr__(self) -> str:
        return f"Mesh(n_vertices={self.n_vertices}, n_triangles={self.n_triangles})"


def _canonical_triangle(tri: list[int]) -> tuple[int, int, int]:
    """Rotate a CCW triple so the smallest index comes first."""
    k = tri.index(min(tri))
    return (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3])


class EdgeTopology:
    """Edge classification, adjacency and vertex patches of a mesh.

    Interior edge ``e`` has endpoints ``interior_edges[e] = (i, j)`` with
    ``i < j``; ``left[e]`` is the triangle traversing ``i -> j``
    counterclockwise (``K``) and ``right[e]`` the other one (``K'``);
    ``opposite_left[e]`` / ``opposite_right[e]`` are their third vertices.
    """

    def __init__(
        self,
        n_vertices: int,
        interior_edges: NDArray[np.int64],
        left: NDArray[np.int64],
        right: NDArray[np.int64],
        opposite_left: NDArray[np.int64],
        opposite_right: NDArray[np.int64],
        boundary_edges: NDArray[np.int64],
        boundary_triangle: NDArray[np.int64],
        patch_offsets: NDArray[np.int64],
        patch_triangles: NDArray[np.int64],
    ) -> None:
        self.interior_edges = interior_edges
        self.left = left
        self.right = right
        self.opposite_left = opposite_left
        self.opposite_right = opposite_right
        self.boundary_edges = boundary_edges
        self.boundary_triangle = boundary_triangle
        self.patch_offsets = patch_offsets
        self.patch_triangles = patch_triangles

        on_boundary = np.zeros(n_vertices, dtype=bool)
        on_boundary[boundary_edges.ravel()] = True
        self.interior_vertex_flags: NDArray[np.bool_] = ~on_boundary

    @property
    def n_interior_edges(self) -> int:
        return int(self.interior_edges.shape[0])

    @property
    def n_boundary_edges(self) -> int:
        return int(self.boundary_edges.shape[0])

    @property
    def interior_ids(self) -> NDArray[np.int64]:
        """Indices of interior vertices, ascending."""
        return np.flatnonzero(self.interior_vertex_flags)

    @property
    def boundary_ids(self) -> NDArray[np.int64]:
        """Indices of boundary vertices, ascending."""
        return np.flatnonzero(~self.interior_vertex_flags)

    def patch(self, i: int) -> NDArray[np.int64]:
        """Triangles sharing vertex ``i`` (the patch omega_i)."""
        return self.patch_triangles[self.patch_offsets[i] : self.patch_offsets[i + 1]]

    def edge_index(self, i: int, j: int) -> int | None:
        """Interior-edge id of edge ``(i, j)``, or None if it is not interior."""
        lo, hi = min(i, j), max(i, j)
        ids = np.flatnonzero((self.interior_edges[:, 0] == lo) & (self.interior_edges[:, 1] == hi))
        return int(ids[0]) if ids.size else None


def build_connectivity(m: Mesh) -> EdgeTopology:
    """Classify every edge as interior or boundary and collect vertex patches.

    Raises:
        NonManifoldError: If an edge has more than two adjacent triangles.
        MeshValidationError: If two triangles traverse a shared edge in the same direction.
    """
    tri = m.triangles
    n_tri = m.n_triangles
    start = tri[:, [0, 1, 2]].ravel()
    end = tri[:, [1, 2, 0]].ravel()
    opp = tri[:, [2, 0, 1]].ravel()
    owner = np.repeat(np.arange(n_tri, dtype=np.int64), 3)

    lo = np.minimum(start, end)
    hi = np.maximum(start, end)
    key = lo * m.n_vertices + hi
    order = np.argsort(key, kind="stable")
    _, first, counts = np.unique(key[order], return_index=True, return_counts=True)

    if counts.max() > 2:
        bad = int(order[first[np.argmax(counts)]])
        raise NonManifoldError((int(lo[bad]), int(hi[bad])), int(counts.max()))

    h0 = order[first]
    interior = counts == 2
    a = h0[interior]
    b = order[first[interior] + 1]

    forward_a = start[a] == lo[a]
    forward_b = start[b] == lo[b]
    if np.any(forward_a == forward_b):
        raise MeshValidationError("inconsistent orientation across a shared edge")
    fwd = np.where(forward_a, a, b)
    bwd = np.where(forward_a, b, a)

    interior_edges = np.stack([lo[fwd], hi[fwd]], axis=1)
    boundary_half = h0[~interior]
    boundary_edges = np.stack([lo[boundary_half], hi[boundary_half]], axis=1)

    flat = tri.ravel()
    vorder = np.argsort(flat, kind="stable")
    offsets = np.zeros(m.n_vertices + 1, dtype=np.int64)
    np.cumsum(np.bincount(flat, minlength=m.n_vertices), out=offsets[1:])

    topo = EdgeTopology(
        n_vertices=m.n_vertices,
        interior_edges=interior_edges,
        left=owner[fwd],
        right=owner[bwd],
        opposite_left=opp[fwd],
        opposite_right=opp[bwd],
        boundary_edges=boundary_edges,
        boundary_triangle=owner[boundary_half],
        patch_offsets=offsets,
        patch_triangles=vorder // 3,
    )
    logger.debug(
        f"Connectivity: {topo.n_interior_edges} interior edges, {topo.n_boundary_edges} "
        f"boundary edges, {int(topo.interior_vertex_flags.sum())} interior vertices"
    )
    return topo


class ElementGeometry(NamedTuple):
    """Edge matrix, q-vectors, area and heights of one triangle."""

    edge_matrix: NDArray[np.float64]
    q_vectors: NDArray[np.float64]
    area: float
    heights: NDArray[np.float64]


class GeometryBatch(NamedTuple):
    """Element geometry for a stack of triangles."""

    edge_matrices: NDArray[np.float64]
    q_vectors: NDArray[np.float64]
    areas: NDArray[np.float64]
    heights: NDArray[np.float64]


def geometry_batch(corners: NDArray[np.float64], ids: NDArray[np.int64] | None = None) -> GeometryBatch:
    """Element geometry for ``(n, 3, 2)`` stacked corner coordinates.

    Args:
        corners: Triangle corner coordinates.
        ids: Triangle ids used in error reports (defaults to the stack position).

    Raises:
        DegenerateTriangleError: For the first triangle whose edge-matrix
            determinant is below 1e-14 times its squared edge scale.
    """
    e1 = corners[:, 1] - corners[:, 0]
    e2 = corners[:, 2] - corners[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    scale_sq = np.max(
        np.stack(
            [np.sum(e1**2, axis=1), np.sum(e2**2, axis=1), np.sum((e2 - e1) ** 2, axis=1)], axis=1
        ),
        axis=1,
    )
    bad = np.flatnonzero(np.abs(det) < DEGENERACY_FACTOR * scale_sq)
    if bad.size:
        pos = int(bad[0])
        tid = int(ids[pos]) if ids is not None else pos
        raise DegenerateTriangleError(tid, float(det[pos]))

    edge_matrices = np.stack([e1, e2], axis=2)
    # [q2, q3] = E^{-T}, written out for the 2x2 case.
    q2 = np.stack([e2[:, 1], -e2[:, 0]], axis=1) / det[:, None]
    q3 = np.stack([-e1[:, 1], e1[:, 0]], axis=1) / det[:, None]
    q1 = -q2 - q3
    q = np.stack([q1, q2, q3], axis=1)
    heights = 1.0 / np.linalg.norm(q, axis=2)
    return GeometryBatch(edge_matrices, q, 0.5 * det, heights)


def mesh_geometry(m: Mesh) -> GeometryBatch:
    """Element geometry of every triangle of ``m``."""
    return geometry_batch(m.vertices[m.triangles], np.arange(m.n_triangles))


def element_geometry(m: Mesh, t: int) -> ElementGeometry:
    """Edge matrix, q-vectors, area and heights of triangle ``t``."""
    batch = geometry_batch(m.vertices[m.triangles[t]][None], np.array([t]))
    return ElementGeometry(
        edge_matrix=batch.edge_matrices[0],
        q_vectors=batch.q_vectors[0],
        area=float(batch.areas[0]),
        heights=batch.heights[0],
    )


def dihedral_angles(geom: ElementGeometry) -> NDArray[np.float64]:
    """Euclidean angles from q-vectors: ``alpha_ij = pi - angle(q_i, q_j)``.

    Returns a ``(3,)`` array whose entry ``k`` is the angle at local vertex
    ``k`` (opposite the edge joining the other two vertices).
    """
    q = geom.q_vectors
    out = np.empty(3)
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        cross = abs(q[i, 0] * q[j, 1] - q[i, 1] * q[j, 0])
        out[k] = math.pi - math.atan2(cross, float(q[i] @ q[j]))
    return out


def _quad_rows(
    vertices: NDArray[np.float64], i: int, j: int, k: int, l: int
) -> tuple[tuple[int, int, int], tuple[int, int, int], bool]:
    """Triangles replacing diagonal (i, j) by (k, l) and whether both are proper.

    ``(i, j, k)`` and ``(j, i, l)`` are the counterclockwise triangles on
    either side of the edge.
    """
    new_a = (k, i, l)
    new_b = (l, j, k)
    rows = np.array([new_a, new_b])
    dbl = signed_double_areas(vertices, rows)
    ok = bool(np.all(dbl > DEGENERACY_FACTOR * edge_scale_sq(vertices, rows)))
    return new_a, new_b, ok


def flip_edge(m: Mesh, topo: EdgeTopology, e: int) -> Mesh:
    """Replace interior edge ``e`` by the other diagonal of its quadrilateral.

    Raises:
        NonConvexQuadError: If the quadrilateral is not strictly convex.
    """
    i, j = (int(x) for x in topo.interior_edges[e])
    k, l = int(topo.opposite_left[e]), int(topo.opposite_right[e])
    new_a, new_b, ok = _quad_rows(m.vertices, i, j, k, l)
    if not ok:
        raise NonConvexQuadError(e)
    triangles = np.array(m.triangles)
    triangles[topo.left[e]] = new_a
    triangles[topo.right[e]] = new_b
    return Mesh(m.vertices, triangles, m.domain)


class FlipUndo(NamedTuple):
    """State needed to revert one flip."""

    slots: tuple[int, int]
    rows: tuple[tuple[int, int, int], tuple[int, int, int]]


class MutableTriangulation:
    """Working copy of a mesh supporting repeated local edge flips.

    Triangle slots keep their index across flips: flipping the diagonal of
    triangles ``t1, t2`` rewrites those two rows in place.
    """

    def __init__(self, m: Mesh) -> None:
        self.vertices = m.vertices
        self.domain = m.domain
        self.triangles: list[list[int]] = m.triangles.tolist()
        self.edges: dict[tuple[int, int], list[int]] = {}
        for t, tri in enumerate(self.triangles):
            self._register(t, tri)
        self.flips = 0

    @staticmethod
    def key(i: int, j: int) -> tuple[int, int]:
        return (i, j) if i < j else (j, i)

    def _register(self, t: int, tri: list[int]) -> None:
        for a in range(3):
            self.edges.setdefault(self.key(tri[a], tri[(a + 1) % 3]), []).append(t)

    def _unregister(self, t: int, tri: list[int]) -> None:
        for a in range(3):
            k = self.key(tri[a], tri[(a + 1) % 3])
            owners = self.edges[k]
            owners.remove(t)
            if not owners:
                del self.edges[k]

    def interior_edges(self) -> list[tuple[int, int]]:
        """Sorted keys of edges shared by two triangles."""
        return sorted(k for k, owners in self.edges.items() if len(owners) == 2)

    def is_interior(self, edge: tuple[int, int]) -> bool:
        return len(self.edges.get(edge, ())) == 2

    def quad(self, edge: tuple[int, int]) -> tuple[int, int, int, int, int, int]:
        """``(i, j, k, l, t_left, t_right)`` around an interior edge.

        ``t_left`` traverses ``i -> j`` with third vertex ``k``; ``t_right``
        traverses ``j -> i`` with third vertex ``l``.
        """
        t1, t2 = self.edges[edge]
        i, j = edge
        tri = self.triangles[t1]
        a = tri.index(i)
        if tri[(a + 1) % 3] != j:
            t1, t2 = t2, t1
            tri = self.triangles[t1]
            a = tri.index(i)
        k = tri[(a + 2) % 3]
        other = self.triangles[t2]
        l = next(v for v in other if v != i and v != j)
        return i, j, k, l, t1, t2

    def corners(self, t: int) -> NDArray[np.float64]:
        return self.vertices[self.triangles[t]]

    def can_flip(self, edge: tuple[int, int]) -> bool:
        """True if the quadrilateral around ``edge`` is strictly convex."""
        i, j, k, l, _, _ = self.quad(edge)
        return _quad_rows(self.vertices, i, j, k, l)[2]

    def flip(self, edge: tuple[int, int]) -> FlipUndo:
        """Flip an interior edge in place and return the undo record.

        Raises:
            NonConvexQuadError: If the quadrilateral is not strictly convex.
        """
        i, j, k, l, t1, t2 = self.quad(edge)
        new_a, new_b, ok = _quad_rows(self.vertices, i, j, k, l)
        if not ok:
            raise NonConvexQuadError(edge)
        undo = FlipUndo((t1, t2), (tuple(self.triangles[t1]), tuple(self.triangles[t2])))  # type: ignore[arg-type]
        self._replace(t1, list(new_a))
        self._replace(t2, list(new_b))
        self.flips += 1
        return undo

    def undo(self, record: FlipUndo) -> None:
        """Revert a flip returned by :meth:`flip`."""
        for slot, row in zip(record.slots, record.rows, strict=True):
            self._replace(slot, list(row))
        self.flips -= 1

    def _replace(self, t: int, row: list[int]) -> None:
        self._unregister(t, self.triangles[t])
        self.triangles[t] = row
        self._register(t, row)

    def outer_edges(self, edge: tuple[int, int]) -> list[tuple[int, int]]:
        """The four sides of the quadrilateral around ``edge``."""
        i, j, k, l, _, _ = self.quad(edge)
        return [self.key(i, k), self.key(k, j), self.key(j, l), self.key(l, i)]

    def to_mesh(self) -> Mesh:
        return Mesh(self.vertices, np.array(self.triangles, dtype=np.int64), self.domain)


class MeshSummary(NamedTuple):
    """Counts and Euclidean angle extremes of a mesh."""

    n_vertices: int
    n_triangles: int
    n_interior_vertices: int
    n_interior_edges: int
    n_boundary_edges: int
    min_angle: float
    max_angle: float
    total_area: float


def euclidean_angles(m: Mesh) -> NDArray[np.float64]:
    """``(N, 3)`` interior angles; column k is the angle at local vertex k."""
    p = m.vertices[m.triangles]
    out = np.empty((m.n_triangles, 3))
    for k in range(3):
        u = p[:, (k + 1) % 3] - p[:, k]
        v = p[:, (k + 2) % 3] - p[:, k]
        cross = np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
        out[:, k] = np.arctan2(cross, np.sum(u * v, axis=1))
    return out


def describe_mesh(m: Mesh, topo: EdgeTopology | None = None) -> MeshSummary:
    topo = topo or build_connectivity(m)
    angles = euclidean_angles(m)
    return MeshSummary(
        n_vertices=m.n_vertices,
        n_triangles=m.n_triangles,
        n_interior_vertices=int(topo.interior_ids.size),
        n_interior_edges=topo.n_interior_edges,
        n_boundary_edges=topo.n_boundary_edges,
        min_angle=float(angles.min()),
        max_angle=float(angles.max()),
        total_area=m.total_area(),
    )
