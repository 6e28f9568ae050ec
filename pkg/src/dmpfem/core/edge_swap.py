"""Edge swapping towards the DMP edge condition."""

# this_file: src/dmpfem/core/edge_swap.py

import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from dmpfem.core.conditions import SIGN_REL_TOL, edge_condition_report
from dmpfem.core.generators import lawson_flip
from dmpfem.core.geometry import (
    det_batch,
    inverse_batch,
    metric_sin_cos_batch,
    tensor_invariants,
)
from dmpfem.core.mesh import Mesh, MutableTriangulation, build_connectivity
from dmpfem.core.problem import ConstantDiffusion, ProblemSpec
from dmpfem.core.quadrature import QuadratureRule
from dmpfem.utils.logging import logger

DEFAULT_MAX_PASSES = 50


class SwapResult(BaseModel):
    """Outcome of :func:`swap_to_satisfy`."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    mesh: Mesh
    passes: int = Field(..., description="Passes over the violating edges")
    flips: int = Field(..., description="Net flips between input and output")
    initial_violations: int
    remaining_violations: int
    metric_completion: bool = Field(
        False, description="Finished by flipping in the D^{-1} metric (constant D only)"
    )


class _LocalEvaluator:
    """a_ij of single edges of a mutable triangulation."""

    def __init__(self, spec: ProblemSpec, rule: QuadratureRule, sign_rel_tol: float) -> None:
        self.spec = spec
        self.rule = rule
        self.sign_rel_tol = sign_rel_tol

    def tensor(self, corners: NDArray[np.float64]) -> NDArray[np.float64]:
        if isinstance(self.spec.diffusion, ConstantDiffusion):
            return self.spec.diffusion.tensor.components()
        pts = self.rule.points(corners)
        values = self.spec.diffusion.components(pts[:, 0], pts[:, 1])
        return self.rule.weight_array() @ values

    def a_ij(self, tri: MutableTriangulation, edge: tuple[int, int]) -> tuple[float, float]:
        """Stiffness entry of ``edge`` and its sign-test scale."""
        i, j, k, l, t1, t2 = tri.quad(edge)
        p = tri.vertices
        contribs = []
        for apex, t in ((k, t1), (l, t2)):
            comps = self.tensor(tri.corners(t))
            s, c = metric_sin_cos_batch(inverse_batch(comps), p[i] - p[apex], p[j] - p[apex])
            contribs.append(-0.5 * math.sqrt(float(det_batch(comps))) * float(c) / float(s))
        return contribs[0] + contribs[1], max(abs(contribs[0]), abs(contribs[1]))

    def positivity(self, tri: MutableTriangulation, edges: list[tuple[int, int]]) -> float:
        """Sum of violating a_ij over the interior edges among ``edges``."""
        total = 0.0
        for edge in edges:
            if not tri.is_interior(edge):
                continue
            value, scale = self.a_ij(tri, edge)
            if value > self.sign_rel_tol * scale:
                total += value
        return total


def _violations(m: Mesh, spec: ProblemSpec, rule: QuadratureRule, tol: float, sign_rel_tol: float) -> tuple[int, list[tuple[int, int]]]:
    """Global count of violating interior edges and those edges, worst first."""
    topo = build_connectivity(m)
    report = edge_condition_report(m, topo, spec, rule, tol, sign_rel_tol)
    bad = np.flatnonzero(~report.satisfied)
    order = bad[np.argsort(-report.a_ij[bad], kind="stable")]
    edges = [(int(a), int(b)) for a, b in topo.interior_edges[order]]
    return len(edges), edges


def swap_to_satisfy(
    m: Mesh,
    spec: ProblemSpec,
    rule: QuadratureRule,
    max_passes: int = DEFAULT_MAX_PASSES,
    tol: float = 1e-10,
    sign_rel_tol: float = SIGN_REL_TOL,
) -> SwapResult:
    """Flip violating edges while flips reduce the local a_ij positivity.

    An edge is flipped only when its quadrilateral is strictly convex and
    the sum of positive a_ij over the quadrilateral's interior edges
    strictly decreases. The best triangulation seen is returned, so the
    remaining violation count never exceeds the input's. With constant D a
    final Lawson pass in the D^{-1} metric removes any violations left.

    Args:
        m: Input mesh (left untouched).
        spec: Problem providing the diffusion field.
        rule: Quadrature for element averages of D.
        max_passes: Pass limit (>= 1).
        tol: Angle tolerance of the violation count.
        sign_rel_tol: Relative tolerance on a_ij signs.
    """
    max_passes = max(1, int(max_passes))
    evaluator = _LocalEvaluator(spec, rule, sign_rel_tol)
    initial, violating = _violations(m, spec, rule, tol, sign_rel_tol)
    best_mesh, best_count = m, initial
    tri = MutableTriangulation(m)
    passes = 0

    while violating and passes < max_passes:
        passes += 1
        accepted = 0
        for edge in violating:
            if not tri.is_interior(edge) or not tri.can_flip(edge):
                continue
            value, scale = evaluator.a_ij(tri, edge)
            if value <= sign_rel_tol * scale:
                continue
            _, _, k, l, _, _ = tri.quad(edge)
            outer = tri.outer_edges(edge)
            before = evaluator.positivity(tri, [edge, *outer])
            undo = tri.flip(edge)
            after = evaluator.positivity(tri, [tri.key(k, l), *outer])
            if after < before:
                accepted += 1
            else:
                tri.undo(undo)

        current = tri.to_mesh()
        count, violating = _violations(current, spec, rule, tol, sign_rel_tol)
        logger.debug(f"Swap pass {passes}: {accepted} flips, {count} violations")
        if count < best_count:
            best_mesh, best_count = current, count
        if accepted == 0:
            break

    completed = False
    tensor = spec.constant_tensor
    if best_count > 0 and tensor is not None:
        inverse = tensor_invariants(tensor).inverse
        candidate, extra = lawson_flip(best_mesh, metric=inverse)
        count, _ = _violations(candidate, spec, rule, tol, sign_rel_tol)
        logger.debug(f"Metric Lawson completion: {extra} flips, {count} violations")
        if count < best_count:
            best_mesh, best_count, completed = candidate, count, True

    flips = _flip_distance(m, best_mesh)
    logger.info(f"Edge swapping: {initial} -> {best_count} violations after {passes} passes")
    return SwapResult(
        mesh=best_mesh,
        passes=passes,
        flips=flips,
        initial_violations=initial,
        remaining_violations=best_count,
        metric_completion=completed,
    )


def _flip_distance(before: Mesh, after: Mesh) -> int:
    """Number of edges of ``after`` missing from ``before`` (one per net flip)."""

    def edges(mesh: Mesh) -> set[tuple[int, int]]:
        t = mesh.triangles
        pairs = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        pairs.sort(axis=1)
        return set(map(tuple, pairs.tolist()))

    return len(edges(after) - edges(before))
