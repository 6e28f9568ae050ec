"""Main API service layer. Hooks up the CLI commands to the numerical core."""

from typing import Any

from dmpfem.api.check import check_command
from dmpfem.api.helptext import show_help_command
from dmpfem.api.meshgen import meshgen_command
from dmpfem.api.region import region_command
from dmpfem.api.solve import solve_command
from dmpfem.api.swap import swap_command
from dmpfem.api.sweep import sweep_command


class DmpFemService:
    """Service layer behind :class:`dmpfem.__main__.DmpFemCLI`."""

    def generate_mesh(
        self,
        pattern: str,
        nx: int,
        ny: int,
        output: str | None = None,
        fraction: float | None = None,
        seed: int | None = None,
        jitter: float | None = None,
        config: str | None = None,
        verbose: bool = False,
    ) -> None:
        meshgen_command(pattern, nx, ny, output, fraction, seed, jitter, config, verbose)

    def check_mesh(
        self,
        mesh: str,
        output: str | None = None,
        benchmark: bool = False,
        d11: float | None = None,
        d12: float | None = None,
        d22: float | None = None,
        field: str | None = None,
        tol: float | None = None,
        config: str | None = None,
        verbose: bool = False,
    ) -> None:
        check_command(mesh, output, benchmark, d11, d12, d22, field, tol, config, verbose)

    def solve(
        self,
        mesh: str,
        output: str | None = None,
        benchmark: bool = False,
        d11: float | None = None,
        d12: float | None = None,
        d22: float | None = None,
        field: str | None = None,
        contours: Any = None,
        svg: str | None = None,
        dump: str | None = None,
        config: str | None = None,
        verbose: bool = False,
    ) -> None:
        solve_command(
            mesh, output, benchmark, d11, d12, d22, field, contours, svg, dump, config, verbose
        )

    def swap_edges(
        self,
        mesh: str,
        output: str | None = None,
        benchmark: bool = False,
        d11: float | None = None,
        d12: float | None = None,
        d22: float | None = None,
        field: str | None = None,
        max_passes: int | None = None,
        config: str | None = None,
        verbose: bool = False,
    ) -> None:
        swap_command(mesh, output, benchmark, d11, d12, d22, field, max_passes, config, verbose)

    def sweep(
        self,
        pattern: str,
        resolutions: Any = (16, 32, 64, 128),
        output: str | None = None,
        svg: str | None = None,
        workers: int = 1,
        benchmark: bool = True,
        config: str | None = None,
        verbose: bool = False,
    ) -> None:
        sweep_command(pattern, resolutions, output, svg, workers, benchmark, config, verbose)

    def region(
        self,
        det_ratio: float,
        grid: int = 256,
        output: str | None = None,
        verbose: bool = False,
    ) -> None:
        region_command(det_ratio, grid, output, verbose)

    def show_help(self) -> None:
        show_help_command()
