# this_file: src/dmpfem/api/options.py
"""Parsing and validation of command-line options shared by several commands."""

from typing import Any

from dmpfem.api.exceptions import UsageError, ValidationError
from dmpfem.core.benchmark import benchmark_spec
from dmpfem.core.contours import default_levels
from dmpfem.core.generators import MeshPattern
from dmpfem.core.geometry import make_spd
from dmpfem.core.problem import ProblemSpec, diffusion_field
from dmpfem.core.settings import Settings
from dmpfem.loaders.config_loader import load_settings, settings_from_mapping


def run_settings(config: str | None = None, **overrides: Any) -> Settings:
    """Settings from ``--config`` with explicit command-line values on top.

    ``None`` overrides are ignored, so unset flags keep the file or default value.
    """
    base = load_settings(config)
    updates = {k: v for k, v in overrides.items() if v is not None}
    if not updates:
        return base
    return settings_from_mapping({**base.model_dump(), **updates}, "command line")


def mesh_pattern(pattern: str) -> MeshPattern:
    try:
        return MeshPattern(str(pattern).lower())
    except ValueError as e:
        choices = ", ".join(p.value for p in MeshPattern)
        raise UsageError(f"Unknown pattern '{pattern}'; choose one of {choices}") from e


def check_resolution(nx: Any, ny: Any) -> tuple[int, int]:
    """Cell counts as ints; both must be >= 1."""
    try:
        nx_i, ny_i = int(nx), int(ny)
    except (TypeError, ValueError) as e:
        raise UsageError(f"--nx and --ny must be integers, got {nx!r} and {ny!r}") from e
    if nx_i < 1 or ny_i < 1:
        raise UsageError(f"--nx and --ny must be >= 1, got {nx_i} and {ny_i}", {"nx": nx_i, "ny": ny_i})
    return nx_i, ny_i


def problem_from_flags(
    benchmark: bool = False,
    d11: float | None = None,
    d12: float | None = None,
    d22: float | None = None,
    field: str | None = None,
) -> ProblemSpec:
    """The problem selected by ``--benchmark``, ``--d11/--d12/--d22`` or ``--field``.

    Every choice uses the benchmark boundary data and a zero source; only the
    diffusion differs.

    Raises:
        UsageError: Unless exactly one source is given, or if the tensor
            flags are incomplete.
        NotSpdError: If the three components do not form an SPD tensor.
    """
    components = (d11, d12, d22)
    has_tensor = any(c is not None for c in components)
    chosen = int(bool(benchmark)) + int(has_tensor) + int(field is not None)
    if chosen != 1:
        raise UsageError("Give exactly one of --benchmark, --d11/--d12/--d22 or --field")

    spec = benchmark_spec()
    if benchmark:
        return spec.problem()
    if has_tensor:
        if any(c is None for c in components):
            raise UsageError("--d11, --d12 and --d22 must be given together")
        return spec.problem(make_spd(float(d11), float(d12), float(d22)))  # type: ignore[arg-type]
    try:
        return spec.problem().with_diffusion(diffusion_field(str(field)))
    except ValidationError as e:
        raise UsageError(e.message, e.details) from e


def _split_numbers(value: Any) -> list[str]:
    if isinstance(value, str):
        return [tok for tok in value.replace(" ", ",").split(",") if tok]
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [str(value)]


def parse_resolutions(value: Any) -> list[int]:
    """``16,32,64`` (a string or the tuple fire makes of it) as a list of ints."""
    try:
        return [int(tok) for tok in _split_numbers(value)]
    except ValueError as e:
        raise UsageError(f"--resolutions must be integers, got {value!r}") from e


def parse_levels(value: Any, lo: float, hi: float) -> list[float]:
    """Contour levels from ``--contours``.

    A single integer ``n`` asks for ``n`` equispaced levels strictly inside
    ``(lo, hi)``; anything else is read as an explicit list of levels.
    """
    if isinstance(value, bool):
        return default_levels(9, lo, hi)
    if isinstance(value, int):
        if value < 1:
            raise UsageError(f"--contours count must be >= 1, got {value}")
        return default_levels(value, lo, hi)
    try:
        return [float(tok) for tok in _split_numbers(value)]
    except ValueError as e:
        raise UsageError(f"--contours must be a count or numbers, got {value!r}") from e
