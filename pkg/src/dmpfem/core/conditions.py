"""Mesh conditions for the discrete maximum principle.

Per interior edge ``e_ij`` shared by ``K`` and ``K'``, with opposite angles
measured in the ``D_K^{-1}`` and ``D_{K'}^{-1}`` metrics, three equivalent
tests decide whether the stiffness entry ``a_ij`` is non-positive:

* the symmetric angle form, averaging both one-sided forms,
* the one-sided form ``alpha_K + arccot(sqrt(det D_K' / det D_K) cot alpha_K') <= pi``,
* the sign of ``a_ij = -(sqrt(det D_K) cot alpha_K + sqrt(det D_K') cot alpha_K') / 2``.

At constant D the angle forms reduce to ``alpha_K + alpha_K' <= pi`` and at
``D = I`` to the Euclidean Delaunay condition.
"""

# this_file: src/dmpfem/core/conditions.py

import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field

from dmpfem.api.exceptions import ConsistencyError, DegenerateMetricAngleError
from dmpfem.core.assembly import (
    MIN_METRIC_ANGLE,
    OPPOSITE,
    LinearSystem,
    average_diffusion_batch,
    metric_cot_parts,
    stiffness_gradient_batch,
)
from dmpfem.core.geometry import (
    IDENTITY,
    det_batch,
    inverse_batch,
    metric_angle_batch,
    metric_sin_cos_batch,
)
from dmpfem.core.mesh import EdgeTopology, Mesh, mesh_geometry
from dmpfem.core.problem import ProblemSpec
from dmpfem.core.quadrature import QuadratureRule
from dmpfem.utils.logging import logger

ANGLE_TOL = 1e-10
SIGN_REL_TOL = 1e-12
CONSISTENCY_BAND = 1e-9


class SideRecord(BaseModel):
    """One triangle adjacent to an interior edge."""

    triangle: int = Field(..., description="Triangle id")
    opposite_vertex: int = Field(..., description="Vertex opposite the edge")
    metric_angle: float = Field(..., description="Opposite angle in the D_K^{-1} metric (radians)")
    det: float = Field(..., description="det D_K")


class EdgeReport(BaseModel):
    """Condition values of one interior edge."""

    edge: int
    endpoints: tuple[int, int]
    sides: tuple[SideRecord, SideRecord]
    lhs_symmetric: float = Field(..., description="Symmetric angle form (radians)")
    lhs_asymmetric: float = Field(..., description="One-sided angle form (radians)")
    a_ij_value: float = Field(..., description="Stiffness entry a_ij")
    euclid_angle_sum: float = Field(..., description="Sum of Euclidean opposite angles")
    satisfied: bool
    affects_interior: bool = Field(..., description="At least one endpoint is an interior vertex")


class NonObtuseViolation(BaseModel):
    """An element angle above pi/2 in the D_K^{-1} metric."""

    triangle: int
    vertex: int = Field(..., description="Global id of the vertex carrying the angle")
    metric_angle: float = Field(..., description="Angle in the D_K^{-1} metric (radians)")
    q_angle: float = Field(..., description="Angle between the two q-vectors in the D_K metric")
    q_form: float = Field(..., description="q_i^T D_K q_j of the two other vertices")


class ElementAngleReport:
    """Metric angles of every element and the non-obtuse verdicts."""

    def __init__(
        self,
        metric_angles: NDArray[np.float64],
        q_angles: NDArray[np.float64],
        q_forms: NDArray[np.float64],
        obtuse: NDArray[np.bool_],
        triangles: NDArray[np.int64],
    ) -> None:
        self.metric_angles = metric_angles
        self.q_angles = q_angles
        self.q_forms = q_forms
        self.obtuse = obtuse
        self.triangles = triangles

    @property
    def max_metric_angle(self) -> float:
        return float(self.metric_angles.max())

    @property
    def max_relation_error(self) -> float:
        """Largest deviation from ``q-angle + metric angle = pi``."""
        return float(np.max(np.abs(self.q_angles + self.metric_angles - math.pi)))

    def violations(self) -> list[NonObtuseViolation]:
        out = []
        for t, k in np.argwhere(self.obtuse):
            out.append(
                NonObtuseViolation(
                    triangle=int(t),
                    vertex=int(self.triangles[t, k]),
                    metric_angle=float(self.metric_angles[t, k]),
                    q_angle=float(self.q_angles[t, k]),
                    q_form=float(self.q_forms[t, k]),
                )
            )
        return out


def element_angle_report(
    m: Mesh,
    spec: ProblemSpec,
    rule: QuadratureRule,
    angle_tol: float = ANGLE_TOL,
    sign_rel_tol: float = SIGN_REL_TOL,
    comps: NDArray[np.float64] | None = None,
) -> ElementAngleReport:
    """Metric angles, q-vector angles and q-forms of all element angles.

    Raises:
        ConsistencyError: If the angle test and the q-form test disagree
            outside the tolerance band around pi/2.
    """
    if comps is None:
        comps = average_diffusion_batch(spec, m, rule)
    corners = m.vertices[m.triangles]
    sin_part, cos_part = metric_cot_parts(corners, comps)
    angles = np.arctan2(sin_part, cos_part)

    geom = mesh_geometry(m)
    local = stiffness_gradient_batch(geom, comps)
    q = geom.q_vectors
    q_forms = np.empty_like(angles)
    q_angles = np.empty_like(angles)
    for k, i, j in OPPOSITE:
        q_forms[:, k] = local[:, i, j] / geom.areas
        q_angles[:, k] = metric_angle_batch(comps, q[:, i], q[:, j])

    by_angle = angles > 0.5 * math.pi + angle_tol
    scale = np.max(np.abs(q_forms), axis=1, keepdims=True)
    by_form = q_forms > sign_rel_tol * scale
    disagree = (by_angle != by_form) & (np.abs(angles - 0.5 * math.pi) > CONSISTENCY_BAND)
    if np.any(disagree):
        t, k = (int(v) for v in np.argwhere(disagree)[0])
        raise ConsistencyError(
            f"triangle {t} vertex {k}",
            {"angle": bool(by_angle[t, k]), "q_form": bool(by_form[t, k])},
            {"triangle": t, "vertex": k},
        )
    return ElementAngleReport(angles, q_angles, q_forms, by_angle, m.triangles)


def check_nonobtuse(
    m: Mesh,
    topo: EdgeTopology,
    spec: ProblemSpec,
    rule: QuadratureRule,
    tol: float = ANGLE_TOL,
) -> list[NonObtuseViolation]:
    """Element angles exceeding pi/2 + tol in the D_K^{-1} metric."""
    report = element_angle_report(m, spec, rule, angle_tol=tol)
    violations = report.violations()
    logger.debug(
        f"Non-obtuse check on {m.n_triangles} elements ({topo.n_interior_edges} interior edges): "
        f"{len(violations)} violations"
    )
    return violations


class ConditionReport:
    """Per-edge values of the DMP edge condition plus summary statistics.

    Arrays are indexed by interior-edge id; ``edges`` materializes
    :class:`EdgeReport` records on demand.
    """

    def __init__(
        self,
        topo: EdgeTopology,
        alpha: NDArray[np.float64],
        dets: NDArray[np.float64],
        lhs_symmetric: NDArray[np.float64],
        lhs_asymmetric: NDArray[np.float64],
        a_ij: NDArray[np.float64],
        euclid_sum: NDArray[np.float64],
        satisfied: NDArray[np.bool_],
        elements: ElementAngleReport,
    ) -> None:
        self.topo = topo
        self.alpha = alpha
        self.dets = dets
        self.lhs_symmetric = lhs_symmetric
        self.lhs_asymmetric = lhs_asymmetric
        self.a_ij = a_ij
        self.euclid_sum = euclid_sum
        self.satisfied = satisfied
        self.elements = elements
        ends = topo.interior_edges
        self.affects_interior = (
            topo.interior_vertex_flags[ends[:, 0]] | topo.interior_vertex_flags[ends[:, 1]]
        )

    @property
    def n_edges(self) -> int:
        return int(self.a_ij.size)

    @property
    def violations_delaunay_type(self) -> int:
        """Violating edges with at least one interior endpoint."""
        return int(np.count_nonzero(~self.satisfied & self.affects_interior))

    @property
    def violations_boundary_edges(self) -> int:
        """Violating edges joining two boundary vertices (no effect on interior rows)."""
        return int(np.count_nonzero(~self.satisfied & ~self.affects_interior))

    @property
    def violations_nonobtuse(self) -> int:
        return int(np.count_nonzero(self.elements.obtuse))

    @property
    def pair_sums(self) -> NDArray[np.float64]:
        """alpha_K + alpha_K' per edge."""
        return self.alpha.sum(axis=1) if self.n_edges else np.zeros(0)

    @property
    def max_pair_sum(self) -> float:
        return float(self.pair_sums.max()) if self.n_edges else 0.0

    @property
    def max_metric_angle(self) -> float:
        return self.elements.max_metric_angle

    @property
    def worst_edge(self) -> int | None:
        """Edge with the largest symmetric left-hand side."""
        return int(np.argmax(self.lhs_symmetric)) if self.n_edges else None

    def edge_report(self, e: int) -> EdgeReport:
        t = self.topo
        sides = (
            SideRecord(
                triangle=int(t.left[e]),
                opposite_vertex=int(t.opposite_left[e]),
                metric_angle=float(self.alpha[e, 0]),
                det=float(self.dets[e, 0]),
            ),
            SideRecord(
                triangle=int(t.right[e]),
                opposite_vertex=int(t.opposite_right[e]),
                metric_angle=float(self.alpha[e, 1]),
                det=float(self.dets[e, 1]),
            ),
        )
        i, j = (int(v) for v in t.interior_edges[e])
        return EdgeReport(
            edge=e,
            endpoints=(i, j),
            sides=sides,
            lhs_symmetric=float(self.lhs_symmetric[e]),
            lhs_asymmetric=float(self.lhs_asymmetric[e]),
            a_ij_value=float(self.a_ij[e]),
            euclid_angle_sum=float(self.euclid_sum[e]),
            satisfied=bool(self.satisfied[e]),
            affects_interior=bool(self.affects_interior[e]),
        )

    @property
    def edges(self) -> list[EdgeReport]:
        return [self.edge_report(e) for e in range(self.n_edges)]

    def summary(self) -> dict[str, float | int | None]:
        """Counts and maxima, angles as multiples of pi."""
        return {
            "interior_edges": self.n_edges,
            "violations_delaunay_type": self.violations_delaunay_type,
            "violations_boundary_edges": self.violations_boundary_edges,
            "violations_nonobtuse": self.violations_nonobtuse,
            "max_metric_angle_over_pi": self.max_metric_angle / math.pi,
            "max_pair_sum_over_pi": self.max_pair_sum / math.pi,
            "worst_edge": self.worst_edge,
        }


def _side_parts(
    m: Mesh,
    apex: NDArray[np.int64],
    ends: NDArray[np.int64],
    inv: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    p = m.vertices
    u = p[ends[:, 0]] - p[apex]
    v = p[ends[:, 1]] - p[apex]
    return metric_sin_cos_batch(inv, u, v)


def edge_condition_report(
    m: Mesh,
    topo: EdgeTopology,
    spec: ProblemSpec,
    rule: QuadratureRule,
    tol: float = ANGLE_TOL,
    sign_rel_tol: float = SIGN_REL_TOL,
) -> ConditionReport:
    """Evaluate both angle forms and the sign test on every interior edge.

    Args:
        m: Mesh.
        topo: Connectivity of ``m``.
        spec: Problem whose diffusion field defines D_K.
        rule: Quadrature used to average D over elements.
        tol: Absolute tolerance on angle sums (radians).
        sign_rel_tol: Relative tolerance on the sign of a_ij.

    Raises:
        DegenerateMetricAngleError: If an opposite metric angle is below 1e-12,
            with the edge id in ``details["edge"]``.
        ConsistencyError: If the three tests disagree outside a 1e-9 band around pi.
    """
    comps = average_diffusion_batch(spec, m, rule)
    elements = element_angle_report(m, spec, rule, tol, sign_rel_tol, comps)

    ends = topo.interior_edges
    sides = ((topo.left, topo.opposite_left), (topo.right, topo.opposite_right))
    sin_parts, cos_parts, dets, euclid = [], [], [], []
    for tri, apex in sides:
        c = comps[tri]
        s_part, c_part = _side_parts(m, apex, ends, inverse_batch(c))
        sin_parts.append(s_part)
        cos_parts.append(c_part)
        dets.append(det_batch(c))
        ident = np.broadcast_to(IDENTITY.components(), c.shape)
        euclid.append(np.arctan2(*_side_parts(m, apex, ends, ident)))

    sin_k, sin_kp = sin_parts
    cos_k, cos_kp = cos_parts
    det_k, det_kp = dets
    alpha = np.stack([np.arctan2(sin_k, cos_k), np.arctan2(sin_kp, cos_kp)], axis=1)

    if alpha.size and np.any(alpha < MIN_METRIC_ANGLE):
        e, side = (int(v) for v in np.argwhere(alpha < MIN_METRIC_ANGLE)[0])
        raise DegenerateMetricAngleError(float(alpha[e, side]), {"edge": e, "side": side})

    # arccot(rho * cot a) = atan2(sin part, rho * cos part) for a in (0, pi).
    across_kp = np.arctan2(sin_kp, np.sqrt(det_kp / det_k) * cos_kp)
    across_k = np.arctan2(sin_k, np.sqrt(det_k / det_kp) * cos_k)
    lhs_asym = alpha[:, 0] + across_kp
    lhs_sym = 0.5 * ((alpha[:, 0] + alpha[:, 1]) + (across_k + across_kp))

    contrib_k = -0.5 * np.sqrt(det_k) * cos_k / sin_k
    contrib_kp = -0.5 * np.sqrt(det_kp) * cos_kp / sin_kp
    a_ij = contrib_k + contrib_kp
    scale = np.maximum(np.abs(contrib_k), np.abs(contrib_kp))

    threshold = math.pi + tol
    by_sign = a_ij <= sign_rel_tol * scale
    by_sym = lhs_sym <= threshold
    by_asym = lhs_asym <= threshold
    outside_band = (np.abs(lhs_sym - math.pi) > CONSISTENCY_BAND) & (
        np.abs(lhs_asym - math.pi) > CONSISTENCY_BAND
    )
    disagree = ((by_sign != by_sym) | (by_sign != by_asym)) & outside_band
    if np.any(disagree):
        e = int(np.flatnonzero(disagree)[0])
        raise ConsistencyError(
            f"edge {e}",
            {"sign": bool(by_sign[e]), "symmetric": bool(by_sym[e]), "asymmetric": bool(by_asym[e])},
            {"edge": e},
        )

    report = ConditionReport(
        topo,
        alpha,
        np.stack(dets, axis=1),
        lhs_sym,
        lhs_asym,
        a_ij,
        euclid[0] + euclid[1],
        by_sign,
        elements,
    )
    logger.debug(
        f"Edge conditions: {report.violations_delaunay_type} Delaunay-type and "
        f"{report.violations_nonobtuse} non-obtuse violations over {report.n_edges} edges"
    )
    return report


class MMatrixReport(BaseModel):
    """Sign and row-sum structure of the interior rows of an assembled matrix."""

    offdiagonal_ok: bool = Field(..., description="All interior-row off-diagonals <= tol * scale")
    row_sums_ok: bool = Field(..., description="All interior row sums >= -tol * scale")
    diagonal_ok: bool = Field(..., description="All interior diagonals > 0")
    verdict: bool
    positive_offdiagonals: list[tuple[int, int, float]] = Field(default_factory=list)
    n_positive_offdiagonals: int = 0
    min_row_sum: float = 0.0
    inverse_nonnegative: bool | None = Field(
        None, description="Dense check of A11^{-1} >= -tol, None when skipped"
    )


MAX_LISTED_ENTRIES = 100


def check_m_matrix(
    system: LinearSystem,
    tol: float = SIGN_REL_TOL,
    inverse_check_max_vertices: int = 200,
) -> MMatrixReport:
    """Check off-diagonal signs, row sums and diagonals of the interior rows.

    The scale of row ``i`` is its diagonal entry. For systems with at most
    ``inverse_check_max_vertices`` vertices, A11 is also inverted densely and
    checked for non-negativity.
    """
    if system.n_interior == 0:
        return MMatrixReport(offdiagonal_ok=True, row_sums_ok=True, diagonal_ok=True, verdict=True)

    rows = system.matrix[system.interior_ids].tocoo()
    global_row = system.interior_ids[rows.row]
    diag = system.matrix.diagonal()[system.interior_ids]
    scale = np.abs(diag)[rows.row]

    off = global_row != rows.col
    positive = off & (rows.data > tol * scale)
    row_sums = np.asarray(system.matrix[system.interior_ids].sum(axis=1)).ravel()

    listed = [
        (int(global_row[n]), int(rows.col[n]), float(rows.data[n]))
        for n in np.flatnonzero(positive)[:MAX_LISTED_ENTRIES]
    ]
    offdiagonal_ok = not bool(np.any(positive))
    row_sums_ok = bool(np.all(row_sums >= -tol * np.abs(diag)))
    diagonal_ok = bool(np.all(diag > 0))

    inverse_ok: bool | None = None
    if system.size <= inverse_check_max_vertices and diagonal_ok:
        a11 = system.interior_block().toarray()
        inv = np.linalg.inv(a11)
        inverse_ok = bool(np.all(inv >= -tol * np.max(np.abs(inv))))

    return MMatrixReport(
        offdiagonal_ok=offdiagonal_ok,
        row_sums_ok=row_sums_ok,
        diagonal_ok=diagonal_ok,
        verdict=offdiagonal_ok and row_sums_ok and diagonal_ok,
        positive_offdiagonals=listed,
        n_positive_offdiagonals=int(np.count_nonzero(positive)),
        min_row_sum=float(row_sums.min()),
        inverse_nonnegative=inverse_ok,
    )


class BoundsReport(BaseModel):
    """Interior extremes of a solution against the range of its boundary data."""

    interior_min: float | None
    interior_max: float | None
    boundary_min: float
    boundary_max: float
    overshoot: float = Field(..., ge=0)
    undershoot: float = Field(..., ge=0)

    @property
    def satisfied(self) -> bool:
        return self.overshoot == 0.0 and self.undershoot == 0.0


def measure_bounds(
    u: NDArray[np.float64], system: LinearSystem, g: NDArray[np.float64] | None = None
) -> BoundsReport:
    """Overshoot and undershoot of ``u`` over the boundary data range."""
    g_values = system.boundary_values if g is None else np.asarray(g, dtype=float)
    b_min, b_max = float(g_values.min()), float(g_values.max())
    if system.n_interior == 0:
        return BoundsReport(
            interior_min=None,
            interior_max=None,
            boundary_min=b_min,
            boundary_max=b_max,
            overshoot=0.0,
            undershoot=0.0,
        )
    interior = np.asarray(u)[system.interior_ids]
    i_min, i_max = float(interior.min()), float(interior.max())
    return BoundsReport(
        interior_min=i_min,
        interior_max=i_max,
        boundary_min=b_min,
        boundary_max=b_max,
        overshoot=max(0.0, i_max - b_max),
        undershoot=max(0.0, b_min - i_min),
    )

