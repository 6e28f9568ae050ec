# this_file: src/dmpfem/api/meshgen.py

from rich.console import Console

from dmpfem.api.options import check_resolution, mesh_pattern, run_settings
from dmpfem.core.benchmark import make_mesh
from dmpfem.core.mesh import Mesh, describe_mesh
from dmpfem.loaders.mesh_loader import save_mesh
from dmpfem.utils import setup_logging
from dmpfem.utils.logging import logger

console = Console()


def meshgen_command(
    pattern: str,
    nx: int,
    ny: int,
    output: str | None = None,
    fraction: float | None = None,
    seed: int | None = None,
    jitter: float | None = None,
    config: str | None = None,
    verbose: bool = False,
) -> Mesh:
    setup_logging(verbose=verbose)

    family = mesh_pattern(pattern)
    nx, ny = check_resolution(nx, ny)
    settings = run_settings(
        config, fourway_fraction=fraction, delaunay_seed=seed, delaunay_jitter=jitter
    )
    mesh = make_mesh(family, nx, ny, settings=settings)
    summary = describe_mesh(mesh)
    logger.info(
        f"Generated {family.value} mesh {nx}x{ny}: {summary.n_vertices} vertices, "
        f"{summary.n_triangles} triangles"
    )

    if output:
        save_mesh(mesh, output)
        console.print(f"[green]Mesh written to {output}[/green]")
    return mesh
