# this_file: src/dmpfem/api/helptext.py

from rich.console import Console

from dmpfem.core.generators import MeshPattern
from dmpfem.core.problem import field_names

console = Console()

PROBLEM_FLAGS = (
    "    --benchmark       Benchmark tensor [[500.5, 499.5], [499.5, 500.5]]",
    "    --d11 --d12 --d22 Constant tensor components",
    "    --field NAME      Built-in diffusion field",
)


def show_help_command() -> None:
    patterns = "|".join(p.value for p in MeshPattern)
    console.print("[bold cyan]dmpfem - DMP-aware linear FEM for anisotropic diffusion[/bold cyan]")
    console.print("\n[cyan]Available commands:[/cyan]")
    console.print("  [green]gen-mesh[/green]        Generate a benchmark mesh family")
    console.print(f"    --pattern {patterns}")
    console.print("    --nx N --ny N     Grid cells (>= 1)")
    console.print("    --fraction F      FOURWAY interior point fraction (default 0.75)")
    console.print("    --seed S --jitter J  Delaunay family seed and jitter")
    console.print("    -o PATH           Mesh file")
    console.print("")
    console.print("  [green]check[/green]           Audit a mesh against the DMP conditions")
    console.print("    --mesh PATH")
    for line in PROBLEM_FLAGS:
        console.print(line)
    console.print("    --tol T           Angle tolerance in radians (default 1e-10)")
    console.print("    -o PATH           JSON report")
    console.print("")
    console.print("  [green]solve[/green]           Solve the boundary value problem on a mesh")
    console.print("    --mesh PATH")
    for line in PROBLEM_FLAGS:
        console.print(line)
    console.print("    -o PATH           Solution CSV (x,y,u,is_boundary)")
    console.print("    --contours N|L1,L2  Contour count or levels")
    console.print("    --svg PATH        Contour plot")
    console.print("    --dump PATH       Matrix triplets 'i j value'")
    console.print("")
    console.print("  [green]swap[/green]            Flip edges towards the DMP edge condition")
    console.print("    --mesh PATH")
    for line in PROBLEM_FLAGS:
        console.print(line)
    console.print("    --max-passes N    Pass limit (default 50)")
    console.print("    -o PATH           Swapped mesh file")
    console.print("")
    console.print("  [green]sweep[/green]           Overshoot/undershoot refinement sweep")
    console.print(f"    --pattern {patterns}")
    console.print("    --resolutions 16,32,64,128")
    console.print("    --workers N       Parallel cases")
    console.print("    -o PATH           Sweep CSV")
    console.print("    --svg PATH        Log-log plot")
    console.print("")
    console.print("  [green]region[/green]          Sample the edge condition over angle pairs")
    console.print("    --det-ratio R     det D_K / det D_K'")
    console.print("    --grid G          Cells per axis (>= 16, default 256)")
    console.print("    -o PATH           SVG plot")
    console.print("")
    console.print("  Every command takes --config PATH (TOML [dmpfem] table) and --verbose.")
    console.print(f"  Diffusion fields: {', '.join(field_names())}")
