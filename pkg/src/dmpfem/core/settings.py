"""Run settings shared by the library and the CLI."""

# this_file: src/dmpfem/core/settings.py

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class QuadratureName(str, Enum):
    """Names of the built-in quadrature rules."""

    CENTROID = "centroid"
    THREE_POINT = "three_point"


class Settings(BaseModel):
    """Tolerances and defaults for meshing, auditing and solving.

    Values can be overridden from the ``[dmpfem]`` table of a TOML file, see
    :func:`dmpfem.loaders.config_loader.load_settings`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    angle_tol: float = Field(1e-10, ge=0, description="Absolute tolerance on angle sums (radians)")
    sign_rel_tol: float = Field(1e-12, ge=0, description="Relative tolerance on a_ij sign tests")
    solver_rel_tol: float = Field(1e-12, gt=0, description="Relative residual target of the solver")
    solver_max_iter: int | None = Field(None, ge=1, description="CG iteration cap (20 n if unset)")
    dense_threshold: int = Field(64, ge=0, description="Largest system solved densely")
    quadrature: QuadratureName = Field(QuadratureName.THREE_POINT, description="Quadrature rule")
    fourway_fraction: float = Field(0.75, gt=0, lt=1, description="FOURWAY interior point fraction")
    delaunay_seed: int = Field(42, description="Seed of the jittered Delaunay generator")
    delaunay_jitter: float = Field(0.3, ge=0, le=0.49, description="Jitter in cell widths")
    max_passes: int = Field(50, ge=1, description="Edge swap pass limit")
    inverse_check_max_vertices: int = Field(
        200, ge=0, description="Largest mesh whose A11 inverse is checked densely"
    )


DEFAULT_SETTINGS = Settings()
