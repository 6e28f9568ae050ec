"""Tests for the mesh file format."""

from pathlib import Path

import numpy as np
import pytest

from dmpfem.api.exceptions import MeshParseError, MeshValidationError, ValidationError
from dmpfem.core.generators import generate_grid_mesh
from dmpfem.core.mesh import Mesh, Rectangle
from dmpfem.loaders.mesh_loader import load_mesh, read_mesh, save_mesh, write_mesh

ONE_TRIANGLE = """meshfmt 1
3 1
v 0 0
v 1 0
v 0 1
t 0 1 2
"""


class TestReadMesh:
    """Parsing ``meshfmt 1`` text."""

    def test_one_triangle(self) -> None:
        m = read_mesh(ONE_TRIANGLE)
        assert m.n_vertices == 3
        assert m.n_triangles == 1
        np.testing.assert_array_equal(m.vertices[2], [0.0, 1.0])

    def test_comments_and_blank_lines(self) -> None:
        text = "# unit triangle\n\nmeshfmt 1   # header\n3 1\n\nv 0 0\nv 1 0\nv 0 1 # apex\nt 0 1 2\n\n"
        assert read_mesh(text).same_as(read_mesh(ONE_TRIANGLE))

    def test_clockwise_triangle(self) -> None:
        """Orientation is checked after parsing."""
        with pytest.raises(MeshValidationError, match="clockwise"):
            read_mesh(ONE_TRIANGLE.replace("t 0 1 2", "t 0 2 1"))

    @pytest.mark.parametrize(
        ("text", "line", "message"),
        [
            ("", 1, "empty"),
            ("meshfmt 2\n3 1\n", 1, "header"),
            ("meshfmt 1\n", 2, "missing"),
            ("meshfmt 1\n3\n", 2, "<N_v> <N>"),
            ("meshfmt 1\n3 x\n", 2, "not an integer"),
            ("meshfmt 1\n-1 1\n", 2, "non-negative"),
            ("meshfmt 1\n3 1\nv 0 0\nx 1 0\n", 4, "v <x> <y>"),
            ("meshfmt 1\n3 1\nv 0 0\nv 1 zero\n", 4, "not a number"),
            ("meshfmt 1\n3 1\nv 0 0\nv 1 0\nv 0 1\nt 0 1\n", 6, "t <i> <j> <k>"),
            ("meshfmt 1\n3 1\nv 0 0\nv 1 0\nv 0 1\nt 0 1 2.5\n", 6, "not an integer"),
            (ONE_TRIANGLE + "t 0 1 2\n", 7, "unexpected content"),
            ("meshfmt 1\n3 1\nv 0 0\nv 1 0\n", 5, "ends early"),
        ],
    )
    def test_parse_errors(self, text: str, line: int, message: str) -> None:
        with pytest.raises(MeshParseError, match=message) as exc_info:
            read_mesh(text)
        assert exc_info.value.line_number == line


class TestWriteMesh:
    """Serialization and files."""

    def test_format(self, unit_square: Mesh) -> None:
        text = write_mesh(unit_square)
        lines = text.splitlines()
        assert lines[0] == "meshfmt 1"
        assert lines[1] == "4 2"
        assert lines[2] == "v 0.0 0.0"
        assert lines[-1] == "t 0 2 3"
        assert text.endswith("\n")

    def test_small_grid_round_trip(self) -> None:
        """A 2x2 NE grid survives write/read/write unchanged."""
        text = write_mesh(generate_grid_mesh(Rectangle(x1=16.0, y1=16.0), 2, 2, "ne"))
        assert write_mesh(read_mesh(text)) == text

    def test_shortest_floats(self) -> None:
        m = Mesh([(0.0, 0.0), (0.1, 0.0), (0.0, 1 / 3)], [(0, 1, 2)])
        again = read_mesh(write_mesh(m))
        np.testing.assert_array_equal(again.vertices, m.vertices)
        assert "v 0.1 0.0" in write_mesh(m)

    def test_save_and_load(self, tmp_path: Path, square_with_center: Mesh) -> None:
        path = save_mesh(square_with_center, tmp_path / "meshes" / "fan.mesh")
        assert path.exists()
        assert load_mesh(path).same_as(square_with_center)

    def test_load_missing(self, tmp_path: Path) -> None:
        with pytest.raises(ValidationError, match="file not found"):
            load_mesh(tmp_path / "nope.mesh")
