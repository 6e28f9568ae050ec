"""High-level API for dmpfem functionality."""

from importlib.metadata import PackageNotFoundError, version

import numpy as np
from numpy.typing import ArrayLike, NDArray

from dmpfem.core.benchmark import (
    CaseResult,
    RegionSample,
    SweepResult,
    benchmark_spec,
    make_mesh,
    refinement_sweep,
    run_case,
    sample_feasibility_region,
    solve_problem,
)
from dmpfem.core.contours import ContourSet, extract_contours
from dmpfem.core.edge_swap import SwapResult, swap_to_satisfy
from dmpfem.core.generators import MeshPattern
from dmpfem.core.mesh import Mesh
from dmpfem.core.problem import ProblemSpec
from dmpfem.core.quadrature import QuadratureRule, get_rule
from dmpfem.core.settings import DEFAULT_SETTINGS, Settings
from dmpfem.loaders.result_writer import CheckReport, check_report
from dmpfem.utils.logging import setup_logging

try:
    from dmpfem._version import __version__
except ImportError:
    try:
        __version__ = version("dmpfem")
    except PackageNotFoundError:
        __version__ = "0.0.0+unknown"


class DmpFem:
    """High-level interface to meshing, auditing and solving.

    Every method defaults to the benchmark problem (D = [[500.5, 499.5],
    [499.5, 500.5]] on [0, 16]^2 with its piecewise linear boundary data).

    Example:
        >>> fem = DmpFem()
        >>> mesh = fem.generate("ne", 16, 16)
        >>> fem.check(mesh).violations_delaunay_type
        0
    """

    def __init__(self, settings: Settings = DEFAULT_SETTINGS, verbose: bool = False) -> None:
        """Initializes the facade.

        Args:
            settings: Tolerances and generator defaults.
            verbose: Enable verbose logging.
        """
        self.settings = settings
        self.verbose = verbose
        setup_logging(verbose=verbose)

    @property
    def rule(self) -> QuadratureRule:
        return get_rule(self.settings.quadrature)

    def _problem(self, problem: ProblemSpec | None) -> ProblemSpec:
        return problem if problem is not None else benchmark_spec().problem()

    def generate(self, pattern: MeshPattern | str, nx: int, ny: int) -> Mesh:
        """Mesh of one benchmark family on [0, 16]^2."""
        return make_mesh(pattern, nx, ny, settings=self.settings)

    def check(self, mesh: Mesh, problem: ProblemSpec | None = None) -> CheckReport:
        """Condition counts, M-matrix verdict and solution bounds of ``mesh``."""
        _, _, _, conditions, m_matrix, bounds = solve_problem(
            mesh, self._problem(problem), self.rule, self.settings
        )
        return check_report(conditions, m_matrix, bounds)

    def solve(self, mesh: Mesh, problem: ProblemSpec | None = None) -> NDArray[np.float64]:
        """Nodal solution on ``mesh``."""
        _, u, _, _, _, _ = solve_problem(mesh, self._problem(problem), self.rule, self.settings)
        return u

    def swap(self, mesh: Mesh, problem: ProblemSpec | None = None) -> SwapResult:
        """Edge-swapped copy of ``mesh`` with fewer condition violations."""
        return swap_to_satisfy(
            mesh,
            self._problem(problem),
            self.rule,
            max_passes=self.settings.max_passes,
            tol=self.settings.angle_tol,
            sign_rel_tol=self.settings.sign_rel_tol,
        )

    def run(self, pattern: MeshPattern | str, nx: int, ny: int) -> CaseResult:
        """One benchmark case: mesh, solution and all reports."""
        return run_case(pattern, nx, ny, self.rule, self.settings)

    def sweep(
        self, pattern: MeshPattern | str, resolutions: list[int], workers: int = 1
    ) -> SweepResult:
        """Refinement sweep with fitted overshoot/undershoot decay."""
        return refinement_sweep(pattern, resolutions, self.rule, self.settings, workers)

    def region(self, det_ratio: float, grid: int = 256) -> RegionSample:
        """Angle pairs satisfying the edge condition at a determinant ratio."""
        return sample_feasibility_region(det_ratio, grid, self.settings.angle_tol)

    def contours(self, mesh: Mesh, u: ArrayLike, levels: ArrayLike) -> ContourSet:
        return extract_contours(mesh, u, levels)


__all__ = [
    "DmpFem",
    "Mesh",
    "MeshPattern",
    "ProblemSpec",
    "Settings",
    "__version__",
]
