"""Integration tests for the command-line interface.

Every test drives :func:`dmpfem.__main__.main` with an argument list and
checks the exit code and the files it writes.
"""

# this_file: tests/test_integration/test_cli_integration.py

import csv
import json
from pathlib import Path

import pytest

from dmpfem.__main__ import EXIT_INPUT, EXIT_OK, EXIT_USAGE, main
from dmpfem.loaders.mesh_loader import load_mesh


@pytest.fixture
def nw_mesh(tmp_path: Path) -> Path:
    path = tmp_path / "nw.mesh"
    assert main(["gen-mesh", "nw", "16", "16", "--output", str(path)]) == EXIT_OK
    return path


def check_json(mesh: Path, out: Path) -> dict:
    assert main(["check", str(mesh), "--benchmark", "--output", str(out)]) == EXIT_OK
    return json.loads(out.read_text())


class TestGenMesh:
    def test_writes_mesh(self, tmp_path: Path) -> None:
        path = tmp_path / "meshes" / "ne.mesh"
        assert main(["gen-mesh", "ne", "16", "16", "--output", str(path)]) == EXIT_OK
        m = load_mesh(path)
        assert m.n_triangles == 2 * 16 * 16
        assert m.n_vertices == 17 * 17

    def test_fourway_fraction(self, tmp_path: Path) -> None:
        path = tmp_path / "fw.mesh"
        assert main(["gen-mesh", "fourway", "2", "2", "--fraction", "0.5", "--output", str(path)]) == EXIT_OK
        assert load_mesh(path).n_triangles == 4 * 2 * 2

    @pytest.mark.parametrize(
        "args",
        [
            ["gen-mesh", "nw", "0", "1"],
            ["gen-mesh", "sw", "4", "4"],
            ["gen-mesh", "fourway", "4", "4", "--fraction", "1.5"],
        ],
    )
    def test_bad_arguments(self, args: list[str]) -> None:
        assert main(args) in (EXIT_USAGE, EXIT_INPUT)

    def test_zero_cells_is_usage_error(self) -> None:
        assert main(["gen-mesh", "nw", "0", "1"]) == EXIT_USAGE


class TestCheck:
    def test_ne_report(self, tmp_path: Path) -> None:
        mesh = tmp_path / "ne.mesh"
        main(["gen-mesh", "ne", "8", "8", "--output", str(mesh)])
        report = check_json(mesh, tmp_path / "ne.json")
        assert report["violations_delaunay_type"] == 0
        assert report["m_matrix_verdict"] is True
        assert report["max_pair_sum_over_pi"] < 1.0

    def test_nw_report(self, nw_mesh: Path, tmp_path: Path) -> None:
        report = check_json(nw_mesh, tmp_path / "nw.json")
        assert report["violations_delaunay_type"] > 0
        assert report["overshoot"] > 0
        assert not report["m_matrix_verdict"]

    def test_needs_one_diffusion(self, nw_mesh: Path) -> None:
        assert main(["check", str(nw_mesh)]) == EXIT_USAGE
        assert main(["check", str(nw_mesh), "--benchmark", "--field", "rotated"]) == EXIT_USAGE

    def test_not_spd(self, nw_mesh: Path) -> None:
        args = ["check", str(nw_mesh), "--d11", "1", "--d12", "2", "--d22", "1"]
        assert main(args) == EXIT_INPUT

    def test_missing_file(self, tmp_path: Path) -> None:
        assert main(["check", str(tmp_path / "absent.mesh"), "--benchmark"]) == EXIT_INPUT

    def test_malformed_file(self, tmp_path: Path) -> None:
        bad = tmp_path / "bad.mesh"
        bad.write_text("3\n0 0\n1 0\n")
        assert main(["check", str(bad), "--benchmark"]) == EXIT_INPUT


class TestSwap:
    def test_reduces_violations(self, nw_mesh: Path, tmp_path: Path) -> None:
        swapped = tmp_path / "swapped.mesh"
        assert main(["swap", str(nw_mesh), "--benchmark", "--output", str(swapped)]) == EXIT_OK
        before = check_json(nw_mesh, tmp_path / "before.json")
        after = check_json(swapped, tmp_path / "after.json")
        assert after["violations_delaunay_type"] < before["violations_delaunay_type"]
        assert load_mesh(swapped).n_triangles == load_mesh(nw_mesh).n_triangles


class TestSolve:
    def test_writes_outputs(self, nw_mesh: Path, tmp_path: Path) -> None:
        csv_path = tmp_path / "u.csv"
        svg_path = tmp_path / "u.svg"
        dump_path = tmp_path / "a.txt"
        args = [
            "solve", str(nw_mesh), "--benchmark",
            "--output", str(csv_path), "--svg", str(svg_path), "--dump", str(dump_path),
        ]
        assert main(args) == EXIT_OK
        rows = list(csv.DictReader(csv_path.read_text().splitlines()))
        assert len(rows) == 17 * 17
        assert {r["is_boundary"] for r in rows} == {"0", "1"}
        assert svg_path.read_text().startswith("<svg")
        assert dump_path.read_text().splitlines()[-1].startswith("b ")

    def test_explicit_levels(self, nw_mesh: Path, tmp_path: Path) -> None:
        svg_path = tmp_path / "levels.svg"
        args = ["solve", str(nw_mesh), "--benchmark", "--contours", "0.25,0.5", "--svg", str(svg_path)]
        assert main(args) == EXIT_OK
        assert svg_path.read_text().count('class="level"') == 2


class TestSweepAndRegion:
    def test_sweep(self, tmp_path: Path) -> None:
        out = tmp_path / "sweep.csv"
        svg = tmp_path / "sweep.svg"
        args = ["sweep", "ne", "--resolutions", "4,6,8,10", "--output", str(out), "--svg", str(svg)]
        assert main(args) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("pattern,nx,ny,N")
        assert len(lines) == 5
        assert svg.exists()

    def test_sweep_too_few(self) -> None:
        assert main(["sweep", "ne", "--resolutions", "4,8"]) == EXIT_INPUT

    def test_region(self, tmp_path: Path) -> None:
        out = tmp_path / "region.svg"
        assert main(["region", "10", "--grid", "32", "--output", str(out)]) == EXIT_OK
        assert "det ratio 10.0" in out.read_text()

    def test_region_bad_ratio(self) -> None:
        assert main(["region", "-1"]) == EXIT_INPUT


class TestHelp:
    @pytest.mark.parametrize("args", [[], ["--help"]])
    def test_help(self, args: list[str]) -> None:
        assert main(args) == EXIT_OK


class TestNamedFlags:
    """Positional arguments can also be given by name."""

    def test_gen_mesh_named(self, tmp_path: Path) -> None:
        path = tmp_path / "named.mesh"
        args = ["gen-mesh", "--pattern", "ne", "--nx", "4", "--ny", "3", "--output", str(path)]
        assert main(args) == EXIT_OK
        assert load_mesh(path).n_triangles == 24

    def test_zero_nx_named(self) -> None:
        assert main(["gen-mesh", "--pattern", "nw", "--nx", "0", "--ny", "4"]) == EXIT_USAGE

    def test_check_and_region_named(self, nw_mesh: Path, tmp_path: Path) -> None:
        report = tmp_path / "named.json"
        assert main(["check", "--mesh", str(nw_mesh), "--benchmark", "--output", str(report)]) == EXIT_OK
        assert json.loads(report.read_text())["violations_delaunay_type"] > 0
        region = tmp_path / "named.svg"
        assert main(["region", "--det-ratio", "2", "--grid", "16", "--output", str(region)]) == EXIT_OK
        assert region.exists()
