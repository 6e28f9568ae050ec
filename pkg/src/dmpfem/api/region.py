# this_file: src/dmpfem/api/region.py

from rich.console import Console

from dmpfem.core.benchmark import RegionSample, sample_feasibility_region
from dmpfem.loaders.result_writer import region_svg
from dmpfem.utils import setup_logging, write_text

console = Console()


def region_command(
    det_ratio: float,
    grid: int = 256,
    output: str | None = None,
    verbose: bool = False,
) -> RegionSample:
    setup_logging(verbose=verbose)

    sample = sample_feasibility_region(float(det_ratio), int(grid))
    share = float(sample.inside.mean())
    console.print(
        f"det ratio {sample.det_ratio:g}: {share:.1%} of the {sample.grid}x{sample.grid} "
        "angle pairs satisfy the edge condition"
    )
    if output:
        write_text(output, region_svg(sample))
        console.print(f"[green]Region written to {output}[/green]")
    return sample
