"""Tests for the benchmark problem, sweeps and the feasibility region."""

import math

import numpy as np
import pytest

from dmpfem.api.exceptions import ValidationError
from dmpfem.core.benchmark import (
    DMP_TOL,
    benchmark_spec,
    fit_exponent,
    make_mesh,
    refinement_sweep,
    region_boundary,
    run_case,
    sample_feasibility_region,
)
from dmpfem.core.generators import MeshPattern
from dmpfem.core.settings import Settings


class TestBoundaryData:
    """Piecewise linear Dirichlet data on [0, 16]^2."""

    @pytest.mark.parametrize(
        ("x", "y", "expected"),
        [
            (0.0, 1.0, 0.5),
            (15.0, 16.0, 0.5),
            (0.0, 8.0, 1.0),
            (0.0, 0.0, 0.0),
            (0.0, 2.0, 1.0),
            (0.0, 16.0, 1.0),
            (14.0, 16.0, 1.0),
            (16.0, 16.0, 0.0),
            (16.0, 5.0, 0.0),
            (7.0, 0.0, 0.0),
        ],
    )
    def test_values(self, x: float, y: float, expected: float) -> None:
        assert float(benchmark_spec().g(np.array(x), np.array(y))) == pytest.approx(expected)

    def test_range_and_continuity(self) -> None:
        """Values stay in [0, 1] and vary continuously along the top side."""
        t = np.linspace(0.0, 16.0, 1601)
        g = benchmark_spec().g
        top = g(t, np.full_like(t, 16.0))
        left = g(np.zeros_like(t), t)
        assert top.min() >= 0.0
        assert top.max() <= 1.0
        assert np.abs(np.diff(top)).max() <= 0.5 * 0.01 + 1e-12
        assert np.abs(np.diff(left)).max() <= 0.5 * 0.01 + 1e-12

    def test_problem(self) -> None:
        problem = benchmark_spec().problem()
        assert problem.constant_tensor is not None
        assert problem.constant_tensor.det == 1000.0


class TestRunCase:
    """Single benchmark runs."""

    def test_ne_satisfies_dmp(self) -> None:
        case = run_case("ne", 32, 32)
        assert case.bounds.overshoot <= DMP_TOL
        assert case.bounds.undershoot <= DMP_TOL
        assert case.conditions.violations_delaunay_type == 0
        assert case.m_matrix.verdict

    def test_fourway_bounds_hold(self) -> None:
        """Obtuse metric angles, yet no over- or undershoot."""
        case = run_case(MeshPattern.FOURWAY, 32, 32)
        assert case.conditions.max_metric_angle > math.pi / 2
        assert case.bounds.overshoot <= DMP_TOL
        assert case.bounds.undershoot <= DMP_TOL

    def test_nw_violates(self) -> None:
        case = run_case("nw", 32, 32)
        assert case.bounds.overshoot > 0
        assert case.bounds.undershoot > 0
        assert not case.m_matrix.verdict
        assert case.n_elements == 2 * 32 * 32

    def test_delaunay_uses_settings(self) -> None:
        a = make_mesh("delaunay", 6, 6, settings=Settings(delaunay_seed=1))
        b = make_mesh("delaunay", 6, 6, settings=Settings(delaunay_seed=2))
        assert not np.array_equal(a.vertices, b.vertices)

    @pytest.mark.slow
    @pytest.mark.parametrize("pattern", ["ne", "fourway"])
    def test_bounds_hold_at_64(self, pattern: str) -> None:
        case = run_case(pattern, 64, 64)
        assert case.solution.min() >= -DMP_TOL
        assert case.solution.max() <= 1.0 + DMP_TOL

    @pytest.mark.slow
    @pytest.mark.parametrize("pattern", ["nw", "delaunay"])
    def test_over_and_undershoot_at_64(self, pattern: str) -> None:
        case = run_case(pattern, 64, 64)
        assert case.bounds.overshoot > 1e-3
        assert case.bounds.undershoot > 1e-3
        assert case.conditions.violations_delaunay_type > 0


class TestSweep:
    """Refinement sweeps and fitted decay exponents."""

    def test_fit_exponent(self) -> None:
        n = [100, 400, 1600, 6400]
        values = [1.0 / math.sqrt(v) for v in n]
        assert fit_exponent(n, values) == pytest.approx(-0.5)

    def test_fit_exponent_finest_half_rounds_up(self) -> None:
        """Five cases fit the last three: a flat last pair alone would give 0."""
        n = [1, 2, 4, 8, 16]
        values = [1.0, 1.0, 1.0, 0.5, 0.5]
        assert fit_exponent(n, values) == pytest.approx(-0.5)

    def test_fit_exponent_needs_two_points(self) -> None:
        assert fit_exponent([1, 2, 3, 4], [0.0, 0.0, 0.0, 1.0]) is None

    def test_ne_sweep_flags_dmp(self) -> None:
        result = refinement_sweep("ne", [4, 6, 8, 10])
        assert result.dmp_satisfied
        assert result.overshoot_exponent is None
        assert [r.n_elements for r in result.rows] == [32, 72, 128, 200]

    @pytest.mark.parametrize("resolutions", [[4, 8, 16], [4, 8, 8, 16], [8, 4, 16, 32]])
    def test_rejects_resolutions(self, resolutions: list[int]) -> None:
        with pytest.raises(ValidationError, match="resolutions"):
            refinement_sweep("ne", resolutions)

    @pytest.mark.slow
    def test_nw_overshoot_decays(self) -> None:
        """N from 512 to 131072: decay is slow at first and steepens towards N^-0.5."""
        result = refinement_sweep("nw", [16, 32, 64, 128, 256])
        assert not result.dmp_satisfied
        n = [r.n_elements for r in result.rows]
        assert n[0] == 512
        assert n[-1] == 131072
        overshoots = [r.overshoot for r in result.rows]
        assert all(v > 1e-3 for v in overshoots)
        assert all(r.undershoot > DMP_TOL for r in result.rows)
        assert result.overshoot_exponent is not None
        assert result.undershoot_exponent is not None
        assert result.overshoot_exponent < 0
        finest = np.polyfit(np.log(n[2:]), np.log(overshoots[2:]), 1)[0]
        assert result.overshoot_exponent == pytest.approx(finest)
        rates = [
            math.log(b / a) / math.log(nb / na)
            for na, nb, a, b in zip(n[2:], n[3:], overshoots[2:], overshoots[3:], strict=True)
        ]
        assert rates[-1] < rates[0]
        assert rates[-1] < -0.2

    @pytest.mark.slow
    def test_delaunay_overshoot_positive(self) -> None:
        result = refinement_sweep("delaunay", [16, 24, 32, 48])
        assert any(r.overshoot > 0 for r in result.rows)


class TestFeasibilityRegion:
    """Angle pairs satisfying the edge condition."""

    def test_equal_determinants(self) -> None:
        """Ratio 1 reduces to alpha + alpha' <= pi."""
        sample = sample_feasibility_region(1.0, 64)
        c = sample.centers
        expected = c[:, None] + c[None, :] <= math.pi + DMP_TOL
        np.testing.assert_array_equal(sample.inside, expected)
        np.testing.assert_allclose(sample.boundary, math.pi - c, atol=1e-14)

    def test_mirror(self) -> None:
        """Swapping the two sides inverts the ratio."""
        a = sample_feasibility_region(100.0, 128)
        b = sample_feasibility_region(0.01, 128)
        np.testing.assert_array_equal(a.inside, b.inside.T)

    @pytest.mark.parametrize("ratio", [1e-4, 0.3, 1.0, 17.0, 1e4])
    def test_contains_acute_square(self, ratio: float) -> None:
        sample = sample_feasibility_region(ratio, 64)
        acute = sample.centers <= math.pi / 2
        assert sample.inside[np.ix_(acute, acute)].all()

    def test_large_ratio_limits_alpha_prime(self) -> None:
        """At ratio 100 a wide alpha' leaves almost no room for alpha."""
        sample = sample_feasibility_region(100.0, 200)
        c = sample.centers
        wide = c >= 0.6 * math.pi
        rows = sample.inside[:, wide]
        assert c[rows.any(axis=1)].max() <= 0.1 * math.pi
        narrow = np.argmin(np.abs(c - 0.1 * math.pi))
        assert c[sample.inside[:, narrow]].max() >= 0.95 * math.pi

    def test_boundary_matches_sample(self) -> None:
        ratio = 5.0
        sample = sample_feasibility_region(ratio, 128)
        bound = region_boundary(ratio, sample.centers)
        c = sample.centers
        margin = np.abs(c[:, None] - bound[None, :]) > 1e-6
        np.testing.assert_array_equal(sample.inside[margin], (c[:, None] <= bound[None, :])[margin])

    @pytest.mark.parametrize(("ratio", "grid"), [(0.0, 64), (-1.0, 64), (math.inf, 64), (1.0, 8)])
    def test_invalid(self, ratio: float, grid: int) -> None:
        with pytest.raises(ValidationError):
            sample_feasibility_region(ratio, grid)
