# this_file: src/dmpfem/api/swap.py

from rich.console import Console

from dmpfem.api.options import problem_from_flags, run_settings
from dmpfem.core.edge_swap import SwapResult, swap_to_satisfy
from dmpfem.core.quadrature import get_rule
from dmpfem.loaders.mesh_loader import load_mesh, save_mesh
from dmpfem.utils import setup_logging

console = Console()


def swap_command(
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
) -> SwapResult:
    setup_logging(verbose=verbose)

    problem = problem_from_flags(benchmark, d11, d12, d22, field)
    settings = run_settings(config, max_passes=max_passes)
    m = load_mesh(mesh)

    result = swap_to_satisfy(
        m,
        problem,
        get_rule(settings.quadrature),
        max_passes=settings.max_passes,
        tol=settings.angle_tol,
        sign_rel_tol=settings.sign_rel_tol,
    )

    style = "green" if result.remaining_violations == 0 else "yellow"
    console.print(
        f"Violations: {result.initial_violations} -> "
        f"[{style}]{result.remaining_violations}[/{style}] "
        f"({result.flips} flips, {result.passes} passes"
        f"{', metric completion' if result.metric_completion else ''})"
    )
    if output:
        save_mesh(result.mesh, output)
        console.print(f"[green]Swapped mesh written to {output}[/green]")
    return result
