"""Element matrices and global assembly of the Dirichlet problem.

Element stiffness matrices come from two independent formulas: the gradient
form ``|K| q_i^T D_K q_j`` and the metric-cotangent form
``-sqrt(det D_K) / 2 * cot(alpha_ij)`` with the angle opposite edge ij
measured in the ``D_K^{-1}`` metric. Assembly uses the gradient form; the
cotangent form backs the per-edge condition checks and the cross-checks.
"""

# this_file: src/dmpfem/core/assembly.py

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from dmpfem.api.exceptions import DegenerateMetricAngleError, NotSpdError
from dmpfem.core.geometry import (
    SpdTensor,
    det_batch,
    inverse_batch,
    is_spd_batch,
    metric_sin_cos_batch,
    quadratic_form_batch,
)
from dmpfem.core.mesh import (
    EdgeTopology,
    ElementGeometry,
    GeometryBatch,
    Mesh,
    geometry_batch,
    mesh_geometry,
)
from dmpfem.core.problem import ConstantDiffusion, ProblemSpec
from dmpfem.core.quadrature import QuadratureRule
from dmpfem.utils.logging import logger

MIN_METRIC_ANGLE = 1e-12

# Local vertex k and the edge (i, j) opposite it.
OPPOSITE = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


class LinearSystem:
    """Assembled stiffness matrix with identity rows for boundary vertices.

    Interior rows hold the full stiffness row (including the couplings to
    boundary vertices, the A12 block); boundary rows are identity rows with
    the Dirichlet value on the right-hand side.
    """

    def __init__(
        self,
        matrix: sparse.csr_matrix,
        rhs: NDArray[np.float64],
        interior_ids: NDArray[np.int64],
        boundary_ids: NDArray[np.int64],
        boundary_values: NDArray[np.float64],
    ) -> None:
        self.matrix = matrix
        self.rhs = rhs
        self.interior_ids = interior_ids
        self.boundary_ids = boundary_ids
        self.boundary_values = boundary_values
        for arr in (self.rhs, self.interior_ids, self.boundary_ids, self.boundary_values):
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def n_interior(self) -> int:
        return int(self.interior_ids.size)

    def interior_block(self) -> sparse.csr_matrix:
        """A11: interior rows and interior columns."""
        return self.matrix[self.interior_ids][:, self.interior_ids].tocsr()

    def coupling_block(self) -> sparse.csr_matrix:
        """A12: interior rows and boundary columns."""
        return self.matrix[self.interior_ids][:, self.boundary_ids].tocsr()

    def __repr__(self) -> str:
        return (
            f"LinearSystem(size={self.size}, interior={self.n_interior}, nnz={self.matrix.nnz})"
        )


def average_diffusion_batch(spec: ProblemSpec, m: Mesh, rule: QuadratureRule) -> NDArray[np.float64]:
    """``(N, 3)`` components of D_K = sum_k w_k D(b_k^K) for every triangle.

    Raises:
        NotSpdError: If the field or an average fails the SPD test; the
            triangle id is in ``details["triangle"]``.
    """
    if isinstance(spec.diffusion, ConstantDiffusion):
        comps = np.broadcast_to(spec.diffusion.tensor.components(), (m.n_triangles, 3)).copy()
        return comps

    pts = rule.points(m.vertices[m.triangles])
    values = spec.diffusion.components(pts[..., 0], pts[..., 1])
    pointwise_ok = np.all(is_spd_batch(values), axis=1)
    comps = np.einsum("k,nkc->nc", rule.weight_array(), values)
    ok = pointwise_ok & is_spd_batch(comps)
    if not np.all(ok):
        t = int(np.flatnonzero(~ok)[0])
        bad = values[t][~is_spd_batch(values[t])]
        d11, d12, d22 = (float(c) for c in (bad[0] if bad.size else comps[t]))
        err = NotSpdError(d11, d12, d22)
        err.details["triangle"] = t
        raise err
    return comps


def average_diffusion(spec: ProblemSpec, m: Mesh, t: int, rule: QuadratureRule) -> SpdTensor:
    """Quadrature-weighted average D_K of the diffusion field over triangle ``t``."""
    if isinstance(spec.diffusion, ConstantDiffusion):
        return spec.diffusion.tensor
    corners = m.vertices[m.triangles[t]]
    pts = rule.points(corners)
    values = spec.diffusion.components(pts[:, 0], pts[:, 1])
    for row in values:
        SpdTensor.from_components(row)
    return SpdTensor.from_components(rule.weight_array() @ values)


def stiffness_gradient_batch(geom: GeometryBatch, comps: NDArray[np.float64]) -> NDArray[np.float64]:
    """``(N, 3, 3)`` element matrices ``|K| q_i^T D_K q_j``."""
    q = geom.q_vectors
    qi = q[:, :, None, :]
    qj = q[:, None, :, :]
    return geom.areas[:, None, None] * quadratic_form_batch(comps[:, None, None, :], qi, qj)


def metric_cot_parts(
    corners: NDArray[np.float64], comps: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Metric sine and cosine parts of the three angles of each triangle in ``D_K^{-1}``.

    Column ``k`` belongs to the angle at local vertex ``k``.
    """
    inv = inverse_batch(comps)
    sin_parts, cos_parts = [], []
    for k, i, j in OPPOSITE:
        u = corners[:, i] - corners[:, k]
        v = corners[:, j] - corners[:, k]
        s, c = metric_sin_cos_batch(inv, u, v)
        sin_parts.append(s)
        cos_parts.append(c)
    return np.stack(sin_parts, axis=1), np.stack(cos_parts, axis=1)


def stiffness_cotangent_batch(
    corners: NDArray[np.float64], comps: NDArray[np.float64], ids: NDArray[np.int64] | None = None
) -> NDArray[np.float64]:
    """``(N, 3, 3)`` element matrices from metric cotangents.

    Raises:
        DegenerateMetricAngleError: If a metric angle is below 1e-12.
    """
    sin_part, cos_part = metric_cot_parts(corners, comps)
    angles = np.arctan2(sin_part, cos_part)
    if np.any(angles < MIN_METRIC_ANGLE):
        n, k = np.argwhere(angles < MIN_METRIC_ANGLE)[0]
        tid = int(ids[n]) if ids is not None else int(n)
        raise DegenerateMetricAngleError(float(angles[n, k]), {"triangle": tid, "vertex": int(k)})

    off = -0.5 * np.sqrt(det_batch(comps))[:, None] * (cos_part / sin_part)
    out = np.zeros((comps.shape[0], 3, 3))
    for col, (_, i, j) in enumerate(OPPOSITE):
        out[:, i, j] = off[:, col]
        out[:, j, i] = off[:, col]
    idx = np.arange(3)
    out[:, idx, idx] = -out.sum(axis=2)
    return out


def element_stiffness_gradient(geom: ElementGeometry, dk: SpdTensor) -> NDArray[np.float64]:
    """3x3 stiffness matrix of one element from its q-vectors."""
    batch = GeometryBatch(
        geom.edge_matrix[None], geom.q_vectors[None], np.array([geom.area]), geom.heights[None]
    )
    return stiffness_gradient_batch(batch, dk.components()[None])[0]


def element_stiffness_cotangent(m: Mesh, t: int, dk: SpdTensor) -> NDArray[np.float64]:
    """3x3 stiffness matrix of triangle ``t`` from metric cotangents."""
    corners = m.vertices[m.triangles[t]][None]
    return stiffness_cotangent_batch(corners, dk.components()[None], np.array([t]))[0]


def element_loads(
    spec: ProblemSpec, m: Mesh, areas: NDArray[np.float64], rule: QuadratureRule
) -> NDArray[np.float64]:
    """``(N, 3)`` element load vectors ``|K| sum_k w_k f(b_k) phi_i(b_k)``."""
    pts = rule.points(m.vertices[m.triangles])
    f = np.asarray(spec.source(pts[..., 0], pts[..., 1]), dtype=float)
    weighted = f * rule.weight_array()[None, :]
    return areas[:, None] * (weighted @ rule.node_array())


def assemble(spec: ProblemSpec, m: Mesh, topo: EdgeTopology, rule: QuadratureRule) -> LinearSystem:
    """Assemble the stiffness matrix and load vector with Dirichlet identity rows.

    Raises:
        DegenerateTriangleError: For a degenerate element, with its id.
        NotSpdError: For a non-SPD diffusion average, with the triangle id.
    """
    geom = mesh_geometry(m)
    comps = average_diffusion_batch(spec, m, rule)
    local = stiffness_gradient_batch(geom, comps)
    loads = element_loads(spec, m, geom.areas, rule)

    tri = m.triangles
    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    vals = local.reshape(-1)

    interior = topo.interior_vertex_flags
    keep = interior[rows]
    boundary_ids = topo.boundary_ids
    n = m.n_vertices

    rows = np.concatenate([rows[keep], boundary_ids])
    cols = np.concatenate([cols[keep], boundary_ids])
    vals = np.concatenate([vals[keep], np.ones(boundary_ids.size)])
    matrix = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    matrix.sum_duplicates()
    matrix.sort_indices()

    rhs = np.zeros(n)
    np.add.at(rhs, tri.ravel(), loads.ravel())
    g = spec.boundary_values(m.vertices[boundary_ids])
    rhs[boundary_ids] = g

    system = LinearSystem(matrix, rhs, topo.interior_ids, boundary_ids, g)
    logger.debug(f"Assembled {system!r}")
    return system


def element_matrices(
    spec: ProblemSpec, m: Mesh, rule: QuadratureRule, method: str = "gradient"
) -> NDArray[np.float64]:
    """All element stiffness matrices by the requested formula."""
    comps = average_diffusion_batch(spec, m, rule)
    if method == "cotangent":
        return stiffness_cotangent_batch(m.vertices[m.triangles], comps, np.arange(m.n_triangles))
    return stiffness_gradient_batch(geometry_batch(m.vertices[m.triangles]), comps)
