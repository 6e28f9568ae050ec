"""Tests for the benchmark mesh families and Lawson flipping."""

import math

import numpy as np
import pytest

from dmpfem.api.exceptions import BadResolutionError, ValidationError
from dmpfem.core.generators import (
    MeshPattern,
    generate_delaunay_mesh,
    generate_grid_mesh,
    lawson_flip,
    opposite_angle_sum,
)
from dmpfem.core.geometry import IDENTITY, make_spd
from dmpfem.core.mesh import Mesh, MutableTriangulation, Rectangle, build_connectivity

BENCH = Rectangle(x1=16.0, y1=16.0)


def max_opposite_sum(m: Mesh, comps: np.ndarray = IDENTITY.components()) -> float:
    tri = MutableTriangulation(m)
    return max(opposite_angle_sum(tri, e, comps) for e in tri.interior_edges())


class TestGridMesh:
    """NE, NW and FOURWAY splits."""

    def test_single_cell_ne(self) -> None:
        """One cell: two triangles sharing the (0,0)-(1,1) diagonal."""
        m = generate_grid_mesh(Rectangle(), 1, 1, MeshPattern.NE)
        assert m.n_triangles == 2
        assert build_connectivity(m).interior_edges.tolist() == [[0, 3]]
        np.testing.assert_array_equal(m.vertices[3], [1.0, 1.0])

    def test_single_cell_nw(self) -> None:
        m = generate_grid_mesh(Rectangle(), 1, 1, "nw")
        assert build_connectivity(m).interior_edges.tolist() == [[1, 2]]

    def test_single_cell_fourway(self) -> None:
        """Four triangles around the interior vertex (0.75, 0.75)."""
        m = generate_grid_mesh(Rectangle(), 1, 1, "fourway")
        assert m.n_triangles == 4
        assert m.n_vertices == 5
        np.testing.assert_array_equal(m.vertices[4], [0.75, 0.75])
        assert build_connectivity(m).interior_ids.tolist() == [4]

    @pytest.mark.parametrize("pattern", ["ne", "nw"])
    def test_counts_two_way(self, pattern: str) -> None:
        m = generate_grid_mesh(BENCH, 16, 8, pattern)
        assert m.n_triangles == 2 * 16 * 8
        assert m.n_vertices == 17 * 9
        assert m.total_area() == pytest.approx(256.0, rel=1e-14)

    def test_counts_fourway(self) -> None:
        m = generate_grid_mesh(BENCH, 16, 16, "fourway", fraction=0.75)
        assert m.n_triangles == 4 * 256
        assert m.n_vertices == 17 * 17 + 256
        assert m.domain == BENCH

    @pytest.mark.parametrize(("nx", "ny"), [(0, 4), (4, 0), (-1, 1)])
    def test_bad_resolution(self, nx: int, ny: int) -> None:
        with pytest.raises(BadResolutionError):
            generate_grid_mesh(BENCH, nx, ny, "ne")

    @pytest.mark.parametrize("fraction", [0.0, 1.0, 1.5])
    def test_bad_fraction(self, fraction: float) -> None:
        with pytest.raises(ValidationError, match="fraction"):
            generate_grid_mesh(BENCH, 2, 2, "fourway", fraction=fraction)

    def test_unknown_pattern(self) -> None:
        with pytest.raises(ValueError, match="'sw'"):
            generate_grid_mesh(BENCH, 2, 2, "sw")

    def test_delaunay_pattern_rejected(self) -> None:
        with pytest.raises(ValidationError):
            generate_grid_mesh(BENCH, 2, 2, "delaunay")


class TestDelaunayMesh:
    """Jittered grid followed by Lawson flips."""

    def test_no_jitter_matches_ne(self) -> None:
        """Square cells are already Delaunay: the NE split survives unchanged."""
        m = generate_delaunay_mesh(BENCH, 8, 8, jitter=0.0)
        assert m.same_as(generate_grid_mesh(BENCH, 8, 8, "ne"))

    @pytest.mark.parametrize("seed", [0, 1, 42, 2024])
    def test_delaunay_condition(self, seed: int) -> None:
        m = generate_delaunay_mesh(BENCH, 10, 10, jitter=0.45, seed=seed)
        assert max_opposite_sum(m) <= math.pi + 1e-12

    def test_deterministic(self) -> None:
        a = generate_delaunay_mesh(BENCH, 12, 12, seed=7)
        b = generate_delaunay_mesh(BENCH, 12, 12, seed=7)
        np.testing.assert_array_equal(a.vertices, b.vertices)
        np.testing.assert_array_equal(a.triangles, b.triangles)

    def test_boundary_points_stay_on_boundary(self) -> None:
        m = generate_delaunay_mesh(BENCH, 6, 6, jitter=0.49, seed=3)
        topo = build_connectivity(m)
        pts = m.vertices[topo.boundary_ids]
        on_side = (
            np.isclose(pts[:, 0], 0.0)
            | np.isclose(pts[:, 0], 16.0)
            | np.isclose(pts[:, 1], 0.0)
            | np.isclose(pts[:, 1], 16.0)
        )
        assert on_side.all()
        assert m.total_area() == pytest.approx(256.0, rel=1e-12)

    @pytest.mark.parametrize("jitter", [-0.1, 0.5])
    def test_bad_jitter(self, jitter: float) -> None:
        with pytest.raises(ValidationError, match="jitter"):
            generate_delaunay_mesh(BENCH, 4, 4, jitter=jitter)


class TestLawsonFlip:
    """Euclidean and metric Lawson flipping."""

    def test_already_delaunay(self, unit_square: Mesh) -> None:
        """Right-isosceles pairs sum to exactly pi: no flips."""
        m, flips = lawson_flip(unit_square)
        assert flips == 0
        assert m.same_as(unit_square)

    def test_flips_long_diagonal(self) -> None:
        """A flat rhombus split along its long diagonal is flipped once."""
        m = Mesh([(0.0, 0.0), (2.0, -0.5), (4.0, 0.0), (2.0, 0.5)], [(0, 1, 2), (0, 2, 3)])
        flipped, flips = lawson_flip(m)
        assert flips == 1
        assert build_connectivity(flipped).interior_edges.tolist() == [[1, 3]]

    def test_metric_flip(self) -> None:
        """After flipping, every edge satisfies the condition in the given metric."""
        m = generate_grid_mesh(Rectangle(x1=1.0, y1=1.0), 4, 4, "ne")
        metric = make_spd(0.01, 0.004, 1.0)
        flipped, _ = lawson_flip(m, metric=metric)
        assert max_opposite_sum(flipped, metric.components()) <= math.pi + 1e-12

    def test_metric_skew(self) -> None:
        """A metric with strong negative coupling favors the NE diagonal over NW."""
        nw = generate_grid_mesh(Rectangle(), 3, 3, "nw")
        metric = make_spd(500.5, -499.5, 500.5)
        flipped, flips = lawson_flip(nw, metric=metric)
        assert flips > 0
        assert max_opposite_sum(flipped, metric.components()) <= math.pi + 1e-12
