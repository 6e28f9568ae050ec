"""Command-line interface entry point for dmpfem."""

import sys
from typing import Any

import fire
from fire.core import FireExit

from dmpfem.api.exceptions import DmpFemError, NoConvergenceError, UsageError
from dmpfem.api.main import DmpFemService
from dmpfem.utils.logging import logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NO_CONVERGENCE = 3


class DmpFemCLI:
    """A thin CLI wrapper for dmpfem commands."""

    def __init__(self) -> None:
        """Initialize the CLI with the service layer."""
        self.service = DmpFemService()

    def gen_mesh(
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
        """Generate one of the benchmark mesh families on [0, 16]^2.

        Args:
            pattern: Mesh family: nw, ne, fourway or delaunay.
            nx: Cells in x (>= 1).
            ny: Cells in y (>= 1).
            output: Mesh file to write.
            fraction: FOURWAY interior point position along the cell diagonal.
            seed: Seed of the delaunay family.
            jitter: Point jitter of the delaunay family, in cell widths.
            config: TOML file with a [dmpfem] settings table.
            verbose: Enable verbose output.
        """
        self.service.generate_mesh(pattern, nx, ny, output, fraction, seed, jitter, config, verbose)

    def check(
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
        """Audit a mesh against the Delaunay-type and non-obtuse conditions.

        Args:
            mesh: Mesh file.
            output: JSON report to write (angles in multiples of pi).
            benchmark: Use the benchmark diffusion tensor.
            d11: Constant tensor component.
            d12: Constant tensor component.
            d22: Constant tensor component.
            field: Built-in diffusion field name.
            tol: Angle tolerance in radians.
            config: TOML file with a [dmpfem] settings table.
            verbose: Enable verbose output.
        """
        self.service.check_mesh(mesh, output, benchmark, d11, d12, d22, field, tol, config, verbose)

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
        """Solve the diffusion problem with the benchmark boundary data.

        Args:
            mesh: Mesh file.
            output: Solution CSV to write.
            benchmark: Use the benchmark diffusion tensor.
            d11: Constant tensor component.
            d12: Constant tensor component.
            d22: Constant tensor component.
            field: Built-in diffusion field name.
            contours: Number of contour levels, or the levels themselves.
            svg: Contour plot to write.
            dump: Matrix triplet file to write.
            config: TOML file with a [dmpfem] settings table.
            verbose: Enable verbose output.
        """
        self.service.solve(
            mesh, output, benchmark, d11, d12, d22, field, contours, svg, dump, config, verbose
        )

    def swap(
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
        """Flip edges to reduce violations of the Delaunay-type condition.

        Args:
            mesh: Mesh file.
            output: Swapped mesh file to write.
            benchmark: Use the benchmark diffusion tensor.
            d11: Constant tensor component.
            d12: Constant tensor component.
            d22: Constant tensor component.
            field: Built-in diffusion field name.
            max_passes: Pass limit.
            config: TOML file with a [dmpfem] settings table.
            verbose: Enable verbose output.
        """
        self.service.swap_edges(
            mesh, output, benchmark, d11, d12, d22, field, max_passes, config, verbose
        )

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
        """Run the benchmark over increasing resolutions and fit decay rates.

        Args:
            pattern: Mesh family: nw, ne, fourway or delaunay.
            resolutions: At least four increasing cell counts, e.g. 16,32,64,128.
            output: Sweep CSV to write.
            svg: Log-log plot to write.
            workers: Worker processes.
            benchmark: The benchmark problem (the only one swept).
            config: TOML file with a [dmpfem] settings table.
            verbose: Enable verbose output.
        """
        self.service.sweep(pattern, resolutions, output, svg, workers, benchmark, config, verbose)

    def region(
        self,
        det_ratio: float,
        grid: int = 256,
        output: str | None = None,
        verbose: bool = False,
    ) -> None:
        """Sample the angle pairs satisfying the edge condition.

        Args:
            det_ratio: det D_K / det D_K' across the edge.
            grid: Cells per axis (>= 16).
            output: SVG plot to write.
            verbose: Enable verbose output.
        """
        self.service.region(det_ratio, grid, output, verbose)


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return the process exit code.

    0 on success, 1 for usage errors, 2 for other dmpfem errors (invalid
    input, unreadable files), 3 when the solver does not converge.
    """
    args = sys.argv[1:] if argv is None else list(argv)
    if not args or args[0] in ("--help", "-h", "help"):
        DmpFemService().show_help()
        return EXIT_OK

    try:
        fire.Fire(DmpFemCLI, command=args, name="dmpfem")
    except FireExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    except UsageError as e:
        logger.error(e.message)
        return EXIT_USAGE
    except NoConvergenceError as e:
        logger.error(e.message)
        return EXIT_NO_CONVERGENCE
    except DmpFemError as e:
        logger.error(e.message)
        if e.details:
            logger.debug(f"Details: {e.details}")
        return EXIT_INPUT
    except OSError as e:
        logger.error(f"Cannot access file: {e}")
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
