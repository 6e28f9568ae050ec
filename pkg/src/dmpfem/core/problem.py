"""Boundary value problem data: diffusion fields, source and Dirichlet data."""

# this_file: src/dmpfem/core/problem.py

from collections.abc import Callable
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from dmpfem.api.exceptions import ValidationError
from dmpfem.core.geometry import IDENTITY, SpdTensor, make_spd

ScalarField = Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]]

BENCHMARK_TENSOR = make_spd(500.5, 499.5, 500.5)


class DiffusionField(Protocol):
    """Tensor field ``D(x, y)`` evaluated on coordinate arrays."""

    name: str

    def components(self, x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
        """``(..., 3)`` array of ``(d11, d12, d22)`` at the given points."""
        ...


class ConstantDiffusion:
    """The same tensor everywhere."""

    def __init__(self, tensor: SpdTensor, name: str = "constant") -> None:
        self.tensor = tensor
        self.name = name

    def components(self, x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
        shape = np.broadcast_shapes(np.shape(x), np.shape(y))
        return np.broadcast_to(self.tensor.components(), (*shape, 3)).copy()

    def at(self, x: float, y: float) -> SpdTensor:
        return self.tensor


class FunctionDiffusion:
    """Tensor field given by a vectorized component function."""

    def __init__(
        self,
        func: Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]],
        name: str,
    ) -> None:
        self.func = func
        self.name = name

    def components(self, x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))

    def at(self, x: float, y: float) -> SpdTensor:
        """Pointwise tensor, raising NotSpdError where the field fails the SPD test."""
        return SpdTensor.from_components(self.components(np.array(x), np.array(y)))


def zero_field(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
    """f = 0."""
    return np.zeros(np.broadcast_shapes(np.shape(x), np.shape(y)))


class ProblemSpec:
    """Diffusion tensor field, source term and Dirichlet data of ``-div(D grad u) = f``."""

    def __init__(
        self,
        diffusion: DiffusionField | SpdTensor,
        source: ScalarField = zero_field,
        dirichlet: ScalarField = zero_field,
        name: str = "problem",
    ) -> None:
        self.diffusion: DiffusionField = (
            ConstantDiffusion(diffusion) if isinstance(diffusion, SpdTensor) else diffusion
        )
        self.source = source
        self.dirichlet = dirichlet
        self.name = name

    @property
    def constant_tensor(self) -> SpdTensor | None:
        """The tensor if the diffusion is constant, else None."""
        if isinstance(self.diffusion, ConstantDiffusion):
            return self.diffusion.tensor
        return None

    def with_diffusion(self, diffusion: DiffusionField | SpdTensor) -> "ProblemSpec":
        """Same source and boundary data with a different tensor field."""
        return ProblemSpec(diffusion, self.source, self.dirichlet, self.name)

    def boundary_values(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(self.dirichlet(points[:, 0], points[:, 1]), dtype=float)

    def __repr__(self) -> str:
        return f"ProblemSpec(name={self.name!r}, diffusion={self.diffusion.name!r})"


def _stack(d11: NDArray[np.float64], d12: NDArray[np.float64], d22: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.stack(np.broadcast_arrays(d11, d12, d22), axis=-1).astype(float)


def _linear_x(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
    return _stack(1.0 + x, np.zeros_like(y), np.ones_like(y))


def _rotated(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
    # Eigenvalues 100 and 1; the principal direction turns half a revolution over x in [0, 16].
    theta = np.pi * np.broadcast_to(x, np.broadcast_shapes(np.shape(x), np.shape(y))) / 16.0
    c, s = np.cos(theta), np.sin(theta)
    lam1, lam2 = 100.0, 1.0
    return _stack(lam1 * c * c + lam2 * s * s, (lam1 - lam2) * c * s, lam1 * s * s + lam2 * c * c)


def _two_layer(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
    # Identity for x < 8, the benchmark tensor for x >= 8.
    right = (x >= 8.0) & np.ones_like(y, dtype=bool)
    left_c = IDENTITY.components()
    right_c = BENCHMARK_TENSOR.components()
    return np.where(right[..., None], right_c, left_c)


FIELD_REGISTRY: dict[str, Callable[[], DiffusionField]] = {
    "identity": lambda: ConstantDiffusion(IDENTITY, "identity"),
    "benchmark": lambda: ConstantDiffusion(BENCHMARK_TENSOR, "benchmark"),
    "linear-x": lambda: FunctionDiffusion(_linear_x, "linear-x"),
    "rotated": lambda: FunctionDiffusion(_rotated, "rotated"),
    "two-layer": lambda: FunctionDiffusion(_two_layer, "two-layer"),
}


def field_names() -> list[str]:
    """Names accepted by :func:`diffusion_field`."""
    return sorted(FIELD_REGISTRY)


def diffusion_field(name: str) -> DiffusionField:
    """Look up a built-in diffusion field.

    Raises:
        ValidationError: For an unknown name.
    """
    try:
        factory = FIELD_REGISTRY[name]
    except KeyError as e:
        raise ValidationError("field", name, f"choose one of {', '.join(field_names())}") from e
    return factory()
