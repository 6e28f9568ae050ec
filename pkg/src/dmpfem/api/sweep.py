# this_file: src/dmpfem/api/sweep.py

from typing import Any

from rich.console import Console
from rich.table import Table

from dmpfem.api.exceptions import UsageError
from dmpfem.api.options import mesh_pattern, parse_resolutions, run_settings
from dmpfem.core.benchmark import SweepResult, refinement_sweep
from dmpfem.core.quadrature import get_rule
from dmpfem.loaders.result_writer import sweep_csv, sweep_svg
from dmpfem.utils import setup_logging, write_text

console = Console()


def _exponent(value: float | None) -> str:
    return "-" if value is None else f"{value:.3f}"


def sweep_command(
    pattern: str,
    resolutions: Any = (16, 32, 64, 128),
    output: str | None = None,
    svg: str | None = None,
    workers: int = 1,
    benchmark: bool = True,
    config: str | None = None,
    verbose: bool = False,
) -> SweepResult:
    setup_logging(verbose=verbose)

    if not benchmark:
        raise UsageError("sweep runs the benchmark problem only; drop --nobenchmark")
    family = mesh_pattern(pattern)
    res = parse_resolutions(resolutions)
    if workers < 1:
        raise UsageError(f"--workers must be >= 1, got {workers}")
    settings = run_settings(config)

    result = refinement_sweep(family, res, get_rule(settings.quadrature), settings, workers=workers)

    table = Table(title=f"{family.value} refinement sweep")
    for name in ("nx", "N", "Delaunay-type", "non-obtuse", "overshoot", "undershoot"):
        table.add_column(name, justify="right")
    for row in result.rows:
        table.add_row(
            str(row.nx),
            f"{row.n_elements:,}",
            str(row.violations_delaunay),
            str(row.violations_nonobtuse),
            f"{row.overshoot:.3e}",
            f"{row.undershoot:.3e}",
        )
    console.print(table)
    if result.dmp_satisfied:
        console.print("[green]No over- or undershoot in any case; no decay fit[/green]")
    else:
        console.print(
            f"Decay exponents (finest half): overshoot {_exponent(result.overshoot_exponent)}, "
            f"undershoot {_exponent(result.undershoot_exponent)}"
        )

    if output:
        write_text(output, sweep_csv(result))
        console.print(f"[green]Sweep written to {output}[/green]")
    if svg:
        write_text(svg, sweep_svg(result))
        console.print(f"[green]Plot written to {svg}[/green]")
    return result
