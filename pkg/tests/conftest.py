"""Pytest configuration and shared fixtures."""

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# Add the src directory to the path so we can import dmpfem
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from dmpfem.core.benchmark import benchmark_spec  # noqa: E402
from dmpfem.core.geometry import IDENTITY  # noqa: E402
from dmpfem.core.mesh import Mesh  # noqa: E402
from dmpfem.core.problem import ProblemSpec  # noqa: E402
from dmpfem.core.quadrature import THREE_POINT, QuadratureRule  # noqa: E402

settings.register_profile(
    "ci",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture
def unit_square() -> Mesh:
    """Unit square split by the diagonal (0,0)-(1,1)."""
    return Mesh([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], [(0, 1, 2), (0, 2, 3)])


@pytest.fixture
def single_triangle() -> Mesh:
    return Mesh([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0, 1, 2)])


@pytest.fixture
def square_with_center() -> Mesh:
    """Unit square fanned around its center vertex 4 (one interior vertex)."""
    return Mesh(
        [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)],
        [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)],
    )


@pytest.fixture
def rule() -> QuadratureRule:
    return THREE_POINT


@pytest.fixture
def benchmark_problem() -> ProblemSpec:
    return benchmark_spec().problem()


@pytest.fixture
def identity_problem() -> ProblemSpec:
    return benchmark_spec().problem(IDENTITY)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
