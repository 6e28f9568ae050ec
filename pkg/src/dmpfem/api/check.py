# this_file: src/dmpfem/api/check.py

import math

from rich.console import Console
from rich.table import Table

from dmpfem.api.options import problem_from_flags, run_settings
from dmpfem.core.benchmark import solve_problem
from dmpfem.core.mesh import MeshSummary, describe_mesh
from dmpfem.core.quadrature import get_rule
from dmpfem.loaders.mesh_loader import load_mesh
from dmpfem.loaders.result_writer import CheckReport, check_report, report_json
from dmpfem.utils import setup_logging, write_text

console = Console()


def _pi(value: float) -> str:
    return f"{value / math.pi:.4f}π"


def _summary_table(summary: MeshSummary, report: CheckReport) -> Table:
    table = Table(show_header=False, box=None, expand=False)
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="white")
    table.add_row("Vertices", f"{summary.n_vertices:,} ({summary.n_interior_vertices:,} interior)")
    table.add_row("Triangles", f"{summary.n_triangles:,}")
    table.add_row("Interior edges", f"{summary.n_interior_edges:,}")
    table.add_row("Euclidean angles", f"{_pi(summary.min_angle)} .. {_pi(summary.max_angle)}")
    table.add_row("Max metric angle", f"{report.max_metric_angle_over_pi:.4f}π")
    table.add_row("Max angle pair sum", f"{report.max_pair_sum_over_pi:.4f}π")

    style = "green" if report.violations_delaunay_type == 0 else "red"
    table.add_row("Delaunay-type violations", f"[{style}]{report.violations_delaunay_type}[/{style}]")
    style = "green" if report.violations_nonobtuse == 0 else "yellow"
    table.add_row("Non-obtuse violations", f"[{style}]{report.violations_nonobtuse}[/{style}]")
    table.add_row("M-matrix structure", "yes" if report.m_matrix_verdict else "[red]no[/red]")
    if report.overshoot is not None and report.undershoot is not None:
        table.add_row("Overshoot / undershoot", f"{report.overshoot:.3e} / {report.undershoot:.3e}")
    return table


def check_command(
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
) -> CheckReport:
    setup_logging(verbose=verbose)

    problem = problem_from_flags(benchmark, d11, d12, d22, field)
    settings = run_settings(config, angle_tol=tol)
    m = load_mesh(mesh)
    rule = get_rule(settings.quadrature)

    _, _, _, conditions, m_matrix, bounds = solve_problem(m, problem, rule, settings)
    report = check_report(conditions, m_matrix, bounds)

    console.print(f"\n[bold cyan]Mesh check[/bold cyan] {mesh} ({problem.diffusion.name})")
    console.print(_summary_table(describe_mesh(m, conditions.topo), report))
    if conditions.violations_boundary_edges:
        console.print(
            f"[dim]{conditions.violations_boundary_edges} violating edge(s) join two boundary "
            "vertices and do not affect the DMP[/dim]"
        )

    if output:
        write_text(output, report_json(report))
        console.print(f"[green]Report written to {output}[/green]")
    return report
