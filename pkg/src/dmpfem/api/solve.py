# this_file: src/dmpfem/api/solve.py

from typing import Any

import numpy as np
from numpy.typing import NDArray
from rich.console import Console
from rich.table import Table

from dmpfem.api.options import parse_levels, problem_from_flags, run_settings
from dmpfem.core.benchmark import solve_problem
from dmpfem.core.contours import extract_contours
from dmpfem.core.quadrature import get_rule
from dmpfem.loaders.mesh_loader import load_mesh
from dmpfem.loaders.result_writer import contours_svg, dump_system, solution_csv
from dmpfem.utils import setup_logging, write_text
from dmpfem.utils.logging import logger

console = Console()


def solve_command(
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
) -> NDArray[np.float64]:
    setup_logging(verbose=verbose)

    problem = problem_from_flags(benchmark, d11, d12, d22, field)
    settings = run_settings(config)
    m = load_mesh(mesh)
    system, u, result, _, m_matrix, bounds = solve_problem(m, problem, get_rule(settings.quadrature), settings)

    table = Table(show_header=False, box=None, expand=False)
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="white")
    table.add_row("Unknowns", f"{system.n_interior:,} interior of {system.size:,}")
    table.add_row("Solver", "dense" if result.iterations == 0 else f"CG, {result.iterations} iterations")
    table.add_row("Residual", f"{result.residual:.3e}")
    table.add_row("Solution range", f"[{float(u.min()):.6g}, {float(u.max()):.6g}]")
    table.add_row("Overshoot / undershoot", f"{bounds.overshoot:.3e} / {bounds.undershoot:.3e}")
    table.add_row("M-matrix structure", "yes" if m_matrix.verdict else "[red]no[/red]")
    console.print(table)

    if output:
        write_text(output, solution_csv(m, u))
        console.print(f"[green]Solution written to {output}[/green]")
    if dump:
        write_text(dump, dump_system(system.matrix, system.rhs))
        console.print(f"[green]System written to {dump}[/green]")

    if contours is not None or svg:
        levels = parse_levels(
            contours if contours is not None else True, bounds.boundary_min, bounds.boundary_max
        )
        iso = extract_contours(m, u, levels)
        logger.info(f"Extracted {len(iso.contours)} contour level(s)")
        if svg:
            write_text(svg, contours_svg(iso, m.domain, m))
            console.print(f"[green]Contours written to {svg}[/green]")
    return u
