"""Tests for contour extraction."""

import numpy as np
import pytest

from dmpfem.api.exceptions import ValidationError
from dmpfem.core.benchmark import run_case
from dmpfem.core.contours import default_levels, extract_contours
from dmpfem.core.generators import generate_grid_mesh
from dmpfem.core.mesh import Mesh, Rectangle


class TestExtractContours:
    def test_linear_field(self, unit_square: Mesh) -> None:
        """u = x at level 0.5 is the single segment x = 0.5."""
        u = unit_square.vertices[:, 0]
        result = extract_contours(unit_square, u, [0.5])
        assert result.levels == [0.5]
        (line,) = result.contours[0].polylines
        np.testing.assert_allclose(line[:, 0], 0.5)
        assert {float(line[0, 1]), float(line[-1, 1])} == {0.0, 1.0}

    def test_constant_field(self, unit_square: Mesh) -> None:
        result = extract_contours(unit_square, np.ones(4), [0.25, 0.5, 1.0])
        assert result.is_empty
        assert result.contours == []

    def test_closed_loop(self, square_with_center: Mesh) -> None:
        """A peak at the center gives one closed loop around it."""
        u = np.array([0.0, 0.0, 0.0, 0.0, 1.0])
        (contour,) = extract_contours(square_with_center, u, [0.5]).contours
        (loop,) = contour.polylines
        np.testing.assert_array_equal(loop[0], loop[-1])
        assert loop.shape == (5, 2)
        np.testing.assert_allclose(np.abs(loop - 0.5).max(axis=1), 0.25)

    def test_points_on_level(self) -> None:
        """Polyline points stay inside the domain."""
        m = generate_grid_mesh(Rectangle(), 6, 6, "fourway")
        x, y = m.vertices[:, 0], m.vertices[:, 1]
        u = x * x + y
        for contour in extract_contours(m, u, [0.3, 0.9]).contours:
            assert contour.polylines
            for line in contour.polylines:
                assert np.all((line >= -1e-12) & (line <= 1 + 1e-12))

    def test_wrong_length(self, unit_square: Mesh) -> None:
        with pytest.raises(ValidationError, match="nodal values"):
            extract_contours(unit_square, [0.0, 1.0], [0.5])

    def test_benchmark_levels(self) -> None:
        """Every default level of the NE benchmark solution is drawn."""
        case = run_case("ne", 16, 16)
        result = extract_contours(case.mesh, case.solution, default_levels())
        assert result.levels == pytest.approx([0.1 * k for k in range(1, 10)])
        assert all(c.polylines for c in result.contours)


class TestDefaultLevels:
    def test_nine(self) -> None:
        assert default_levels() == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]

    def test_range(self) -> None:
        assert default_levels(3, 0.0, 4.0) == [1.0, 2.0, 3.0]
