"""The anisotropic benchmark problem, refinement sweeps and region sampling."""

# this_file: src/dmpfem/core/benchmark.py

import math
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from dmpfem.api.exceptions import ValidationError
from dmpfem.core.assembly import LinearSystem, assemble
from dmpfem.core.conditions import (
    BoundsReport,
    ConditionReport,
    MMatrixReport,
    check_m_matrix,
    edge_condition_report,
    measure_bounds,
)
from dmpfem.core.generators import MeshPattern, generate_delaunay_mesh, generate_grid_mesh
from dmpfem.core.geometry import SpdTensor
from dmpfem.core.mesh import Mesh, Rectangle, build_connectivity
from dmpfem.core.problem import BENCHMARK_TENSOR, ProblemSpec, zero_field
from dmpfem.core.quadrature import QuadratureRule, get_rule
from dmpfem.core.settings import DEFAULT_SETTINGS, Settings
from dmpfem.core.solver import SolveResult, solve_system
from dmpfem.utils.logging import is_verbose, logger, setup_logging

DMP_TOL = 1e-10
BOUNDARY_EPS = 1e-12


class BenchmarkSpec(BaseModel):
    """Domain, diffusion tensor and boundary data of the benchmark problem.

    ``g`` is 0.5 y on the left side below y = 2 and 1 above it, 1 on the top
    side up to x = 14 then 8 - 0.5 x, and 0 on the bottom and right sides.
    The source term vanishes.
    """

    model_config = ConfigDict(frozen=True)

    domain: Rectangle = Field(default_factory=lambda: Rectangle(x0=0.0, y0=0.0, x1=16.0, y1=16.0))
    tensor: SpdTensor = BENCHMARK_TENSOR

    def g(self, x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
        """Dirichlet data; 0 at points off the boundary."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d = self.domain
        eps = BOUNDARY_EPS * max(d.width, d.height)
        out = np.zeros(np.broadcast_shapes(x.shape, y.shape))
        left = np.abs(x - d.x0) <= eps
        top = np.abs(y - d.y1) <= eps
        bottom = np.abs(y - d.y0) <= eps
        right = np.abs(x - d.x1) <= eps
        out = np.where(left, np.where(y - d.y0 < 2.0, 0.5 * (y - d.y0), 1.0), out)
        out = np.where(top, np.where(x - d.x0 <= 14.0, 1.0, 8.0 - 0.5 * (x - d.x0)), out)
        # Bottom and right sides win at their corners.
        out = np.where(bottom | right, 0.0, out)
        return out

    def problem(self, tensor: SpdTensor | None = None) -> ProblemSpec:
        """Problem with this boundary data and the benchmark (or given) tensor."""
        return ProblemSpec(tensor or self.tensor, source=zero_field, dirichlet=self.g, name="benchmark")


@lru_cache(maxsize=1)
def benchmark_spec() -> BenchmarkSpec:
    """The benchmark problem on [0, 16]^2."""
    return BenchmarkSpec()


def make_mesh(
    pattern: MeshPattern | str,
    nx: int,
    ny: int,
    domain: Rectangle | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Mesh:
    """Mesh of one benchmark family."""
    domain = domain or benchmark_spec().domain
    pattern = MeshPattern(pattern)
    if pattern is MeshPattern.DELAUNAY:
        return generate_delaunay_mesh(
            domain, nx, ny, jitter=settings.delaunay_jitter, seed=settings.delaunay_seed
        )
    return generate_grid_mesh(domain, nx, ny, pattern, fraction=settings.fourway_fraction)


class CaseResult(NamedTuple):
    """Mesh, solution and reports of one benchmark run."""

    pattern: MeshPattern
    nx: int
    ny: int
    mesh: Mesh
    system: LinearSystem
    solution: NDArray[np.float64]
    solve: SolveResult
    conditions: ConditionReport
    m_matrix: MMatrixReport
    bounds: BoundsReport

    @property
    def n_elements(self) -> int:
        return self.mesh.n_triangles


def solve_problem(
    m: Mesh,
    problem: ProblemSpec,
    rule: QuadratureRule,
    settings: Settings = DEFAULT_SETTINGS,
) -> tuple[LinearSystem, NDArray[np.float64], SolveResult, ConditionReport, MMatrixReport, BoundsReport]:
    """Assemble, solve and audit ``problem`` on ``m``."""
    topo = build_connectivity(m)
    system = assemble(problem, m, topo, rule)
    u, result = solve_system(
        system, settings.solver_rel_tol, settings.solver_max_iter, settings.dense_threshold
    )
    conditions = edge_condition_report(
        m, topo, problem, rule, settings.angle_tol, settings.sign_rel_tol
    )
    m_matrix = check_m_matrix(system, settings.sign_rel_tol, settings.inverse_check_max_vertices)
    bounds = measure_bounds(u, system)
    return system, u, result, conditions, m_matrix, bounds


def run_case(
    pattern: MeshPattern | str,
    nx: int,
    ny: int,
    rule: QuadratureRule | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> CaseResult:
    """Generate a benchmark mesh, solve the benchmark problem and audit it."""
    rule = rule or get_rule(settings.quadrature)
    pattern = MeshPattern(pattern)
    spec = benchmark_spec()
    m = make_mesh(pattern, nx, ny, spec.domain, settings)
    system, u, result, conditions, m_matrix, bounds = solve_problem(m, spec.problem(), rule, settings)
    logger.debug(
        f"Case {pattern.value} {nx}x{ny}: N={m.n_triangles}, "
        f"violations={conditions.violations_delaunay_type}, "
        f"overshoot={bounds.overshoot:.3e}, undershoot={bounds.undershoot:.3e}"
    )
    return CaseResult(
        pattern=pattern,
        nx=nx,
        ny=ny,
        mesh=m,
        system=system,
        solution=u,
        solve=result,
        conditions=conditions,
        m_matrix=m_matrix,
        bounds=bounds,
    )


class SweepRow(BaseModel):
    """One case of a refinement sweep."""

    pattern: MeshPattern
    nx: int
    ny: int
    n_elements: int
    violations_delaunay: int
    violations_nonobtuse: int
    overshoot: float
    undershoot: float


class SweepResult(BaseModel):
    """Refinement sweep rows ordered by N with fitted decay exponents."""

    pattern: MeshPattern
    rows: list[SweepRow]
    overshoot_exponent: float | None = Field(None, description="Slope of log overshoot vs log N")
    undershoot_exponent: float | None = Field(None, description="Slope of log undershoot vs log N")
    dmp_satisfied: bool = Field(False, description="All cases free of over- and undershoot")


def fit_exponent(n: list[int], values: list[float], floor: float = DMP_TOL) -> float | None:
    """Least-squares slope of log(value) against log(n) over the finest half.

    The finest half is the last ceil(len / 2) cases, at least two. Values at
    or below ``floor`` are left out; fewer than two usable points give None.
    """
    half = max(2, math.ceil(len(n) / 2))
    pairs = [(a, v) for a, v in zip(n[-half:], values[-half:], strict=True) if v > floor]
    if len(pairs) < 2:
        return None
    x = np.log([p[0] for p in pairs])
    y = np.log([p[1] for p in pairs])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _sweep_row(args: tuple[str, int, str, Settings]) -> SweepRow:
    pattern, res, rule_name, settings = args
    case = run_case(pattern, res, res, get_rule(rule_name), settings)
    return SweepRow(
        pattern=case.pattern,
        nx=res,
        ny=res,
        n_elements=case.n_elements,
        violations_delaunay=case.conditions.violations_delaunay_type,
        violations_nonobtuse=case.conditions.violations_nonobtuse,
        overshoot=case.bounds.overshoot,
        undershoot=case.bounds.undershoot,
    )


def refinement_sweep(
    pattern: MeshPattern | str,
    resolutions: list[int],
    rule: QuadratureRule | None = None,
    settings: Settings = DEFAULT_SETTINGS,
    workers: int = 1,
) -> SweepResult:
    """Run the benchmark on ``nx = ny`` in ``resolutions`` and fit decay rates.

    Args:
        pattern: Mesh family.
        resolutions: At least four strictly increasing cell counts.
        rule: Quadrature rule.
        settings: Run settings.
        workers: Worker processes; rows stay ordered by N.

    Raises:
        ValidationError: For fewer than four or non-increasing resolutions.
    """
    res = [int(r) for r in resolutions]
    if len(res) < 4 or any(b <= a for a, b in zip(res, res[1:], strict=False)):
        raise ValidationError("resolutions", res, "need at least 4 strictly increasing values")
    pattern = MeshPattern(pattern)
    rule = rule or get_rule(settings.quadrature)
    jobs = [(pattern.value, r, rule.name, settings) for r in res]

    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=setup_logging, initargs=(is_verbose(),)
        ) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(job) for job in jobs]

    for row in rows:
        logger.info(
            f"{pattern.value} {row.nx}x{row.ny}: N={row.n_elements}, "
            f"overshoot={row.overshoot:.3e}, undershoot={row.undershoot:.3e}"
        )

    dmp_ok = all(r.overshoot <= DMP_TOL and r.undershoot <= DMP_TOL for r in rows)
    n = [r.n_elements for r in rows]
    return SweepResult(
        pattern=pattern,
        rows=rows,
        overshoot_exponent=None if dmp_ok else fit_exponent(n, [r.overshoot for r in rows]),
        undershoot_exponent=None if dmp_ok else fit_exponent(n, [r.undershoot for r in rows]),
        dmp_satisfied=dmp_ok,
    )


class RegionSample(NamedTuple):
    """Cells of the (alpha', alpha) square satisfying the edge condition.

    Row ``a`` and column ``b`` of ``inside`` hold the cell centred at
    ``alpha = centers[a]``, ``alpha' = centers[b]``.
    """

    det_ratio: float
    grid: int
    centers: NDArray[np.float64]
    inside: NDArray[np.bool_]
    boundary: NDArray[np.float64]


def region_boundary(det_ratio: float, alpha_prime: NDArray[np.float64]) -> NDArray[np.float64]:
    """Largest alpha satisfying the condition for each alpha'."""
    s = np.sin(alpha_prime)
    c = np.cos(alpha_prime)
    return math.pi - np.arctan2(s, math.sqrt(det_ratio) * c)


def sample_feasibility_region(
    det_ratio: float, grid: int, tol: float = DMP_TOL
) -> RegionSample:
    """Evaluate the symmetric edge condition at cell centres of (0, pi)^2.

    Raises:
        ValidationError: If det_ratio <= 0 or grid < 16.
    """
    if not (det_ratio > 0 and math.isfinite(det_ratio)):
        raise ValidationError("det_ratio", det_ratio, "must be positive and finite")
    if grid < 16:
        raise ValidationError("grid", grid, "must be at least 16")

    centers = (np.arange(grid) + 0.5) * math.pi / grid
    alpha = centers[:, None]
    alpha_p = centers[None, :]
    to_k = math.sqrt(1.0 / det_ratio)
    to_kp = math.sqrt(det_ratio)
    # arccot(rho * cot a) = atan2(sin a, rho * cos a)
    across_k = np.arctan2(np.sin(alpha), to_k * np.cos(alpha))
    across_kp = np.arctan2(np.sin(alpha_p), to_kp * np.cos(alpha_p))
    lhs = 0.5 * ((alpha + alpha_p) + (across_k + across_kp))
    inside = lhs <= math.pi + tol
    return RegionSample(
        det_ratio=det_ratio,
        grid=grid,
        centers=centers,
        inside=inside,
        boundary=region_boundary(det_ratio, centers),
    )
