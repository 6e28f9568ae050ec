"""2D vectors, SPD tensors, metric norms and metric angles.

Every scalar operation here has a vectorized twin (suffix ``_batch``) working on
stacks of vectors and tensors; the mesh-wide analyses use the batch forms and
the per-element APIs delegate to them so both paths share one formula.
"""

# this_file: src/dmpfem/core/geometry.py

import math
from typing import NamedTuple, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from dmpfem.api.exceptions import DegenerateVectorError, NotSpdError

Angle: TypeAlias = float
"""Angle in radians."""

MIN_METRIC_NORM = 1e-300


class Vec2(NamedTuple):
    """A point or direction in the plane."""

    x: float
    y: float

    def __sub__(self, other: tuple[float, float]) -> "Vec2":
        return Vec2(self.x - other[0], self.y - other[1])

    def cross(self, other: tuple[float, float]) -> float:
        """z-component of the 3D cross product."""
        return self.x * other[1] - self.y * other[0]


class SpdTensor(BaseModel):
    """Symmetric positive-definite 2x2 tensor stored as its upper triangle."""

    model_config = ConfigDict(frozen=True)

    d11: float
    d12: float
    d22: float

    @model_validator(mode="after")
    def _check_spd(self) -> "SpdTensor":
        values = (self.d11, self.d12, self.d22)
        if not all(math.isfinite(v) for v in values):
            raise NotSpdError(*values)
        if self.d11 <= 0 or self.d11 * self.d22 - self.d12 * self.d12 <= 0:
            raise NotSpdError(*values)
        return self

    @property
    def det(self) -> float:
        """Determinant."""
        return self.d11 * self.d22 - self.d12 * self.d12

    def as_array(self) -> NDArray[np.float64]:
        """Full 2x2 matrix."""
        return np.array([[self.d11, self.d12], [self.d12, self.d22]])

    def components(self) -> NDArray[np.float64]:
        """Upper-triangle components ``(d11, d12, d22)``."""
        return np.array([self.d11, self.d12, self.d22])

    def scaled(self, factor: float) -> "SpdTensor":
        """Tensor multiplied by a positive scalar."""
        return make_spd(factor * self.d11, factor * self.d12, factor * self.d22)

    @classmethod
    def from_components(cls, comps: ArrayLike) -> "SpdTensor":
        """Build from a ``(d11, d12, d22)`` triple."""
        c = np.asarray(comps, dtype=float)
        return make_spd(float(c[0]), float(c[1]), float(c[2]))

    @classmethod
    def from_matrix(cls, matrix: ArrayLike) -> "SpdTensor":
        """Build from a full symmetric 2x2 matrix (upper triangle is used)."""
        a = np.asarray(matrix, dtype=float)
        return make_spd(float(a[0, 0]), float(a[0, 1]), float(a[1, 1]))


IDENTITY = SpdTensor(d11=1.0, d12=0.0, d22=1.0)


class TensorInvariants(BaseModel):
    """Derived quantities of an SPD tensor."""

    model_config = ConfigDict(frozen=True)

    det: float
    inverse: SpdTensor
    sqrt: SpdTensor
    inv_sqrt: SpdTensor
    eigenvalues: tuple[float, float]
    eigenvectors: tuple[Vec2, Vec2]


def make_spd(d11: float, d12: float, d22: float) -> SpdTensor:
    """Create an SPD tensor, raising NotSpdError if the SPD test fails."""
    return SpdTensor(d11=d11, d12=d12, d22=d22)


def _eigen(d11: float, d12: float, d22: float) -> tuple[float, float, float]:
    """Closed-form eigen-decomposition of a symmetric 2x2 matrix.

    Returns the descending eigenvalues and the rotation angle of the first
    eigenvector.
    """
    mean = 0.5 * (d11 + d22)
    radius = math.hypot(0.5 * (d11 - d22), d12)
    theta = 0.5 * math.atan2(2.0 * d12, d11 - d22)
    return mean + radius, mean - radius, theta


def _from_eigen(lam1: float, lam2: float, theta: float) -> SpdTensor:
    c, s = math.cos(theta), math.sin(theta)
    return make_spd(
        lam1 * c * c + lam2 * s * s,
        (lam1 - lam2) * c * s,
        lam1 * s * s + lam2 * c * c,
    )


def tensor_invariants(t: SpdTensor) -> TensorInvariants:
    """Determinant, inverse, principal square roots and eigenpairs of an SPD tensor."""
    det = t.det
    lam1, lam2, theta = _eigen(t.d11, t.d12, t.d22)
    # The smaller eigenvalue via det/lam1 keeps full relative precision.
    lam2 = det / lam1 if lam1 > 0 else lam2
    c, s = math.cos(theta), math.sin(theta)
    return TensorInvariants(
        det=det,
        inverse=make_spd(t.d22 / det, -t.d12 / det, t.d11 / det),
        sqrt=_from_eigen(math.sqrt(lam1), math.sqrt(lam2), theta),
        inv_sqrt=_from_eigen(1.0 / math.sqrt(lam1), 1.0 / math.sqrt(lam2), theta),
        eigenvalues=(lam1, lam2),
        eigenvectors=(Vec2(c, s), Vec2(-s, c)),
    )


def metric_norm(t: SpdTensor, v: tuple[float, float]) -> float:
    """Norm of ``v`` in the metric ``t``: sqrt(v^T t v)."""
    x, y = v
    q = t.d11 * x * x + 2.0 * t.d12 * x * y + t.d22 * y * y
    return math.sqrt(max(q, 0.0))


def metric_angle(t: SpdTensor, u: tuple[float, float], v: tuple[float, float]) -> Angle:
    """Angle between ``u`` and ``v`` measured with the inner product of ``t``.

    Evaluated as atan2 of the metric sine and cosine parts, which equals the
    clamped arccos of the normalized metric inner product but keeps full
    precision for angles near 0 and pi.

    Raises:
        DegenerateVectorError: If either vector has metric norm below 1e-300.
    """
    for w in (u, v):
        norm = metric_norm(t, w)
        if norm < MIN_METRIC_NORM:
            raise DegenerateVectorError(norm)
    dot = t.d11 * u[0] * v[0] + t.d12 * (u[0] * v[1] + u[1] * v[0]) + t.d22 * u[1] * v[1]
    cross = math.sqrt(t.det) * abs(u[0] * v[1] - u[1] * v[0])
    return math.atan2(cross, dot)


def arccot(x: ArrayLike) -> NDArray[np.float64] | float:
    """Arccotangent with range (0, pi); arccot(+inf) = 0 and arccot(-inf) = pi."""
    result = np.arctan2(1.0, np.asarray(x, dtype=float))
    if result.ndim == 0:
        return float(result)
    return result


# ---------------------------------------------------------------------------
# Batch forms. Tensors are carried as (..., 3) arrays of (d11, d12, d22).
# ---------------------------------------------------------------------------


def det_batch(comps: NDArray[np.float64]) -> NDArray[np.float64]:
    """Determinants of stacked tensors."""
    return comps[..., 0] * comps[..., 2] - comps[..., 1] ** 2


def inverse_batch(comps: NDArray[np.float64]) -> NDArray[np.float64]:
    """Inverses of stacked tensors, same component layout."""
    det = det_batch(comps)
    return np.stack([comps[..., 2] / det, -comps[..., 1] / det, comps[..., 0] / det], axis=-1)


def is_spd_batch(comps: NDArray[np.float64]) -> NDArray[np.bool_]:
    """Mask of stacked tensors passing the SPD test."""
    finite = np.all(np.isfinite(comps), axis=-1)
    with np.errstate(invalid="ignore"):
        return finite & (comps[..., 0] > 0) & (det_batch(comps) > 0)


def quadratic_form_batch(
    comps: NDArray[np.float64], u: NDArray[np.float64], v: NDArray[np.float64]
) -> NDArray[np.float64]:
    """u^T T v for stacked tensors and vectors."""
    return (
        comps[..., 0] * u[..., 0] * v[..., 0]
        + comps[..., 1] * (u[..., 0] * v[..., 1] + u[..., 1] * v[..., 0])
        + comps[..., 2] * u[..., 1] * v[..., 1]
    )


def metric_sin_cos_batch(
    comps: NDArray[np.float64], u: NDArray[np.float64], v: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Unnormalized metric sine and cosine parts of the angle between u and v.

    The sine part is sqrt(det T)|u x v|, the cosine part u^T T v; both carry
    the same factor ||u||_T ||v||_T so their ratio is the metric cotangent.
    """
    cross = np.abs(u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])
    return np.sqrt(det_batch(comps)) * cross, quadratic_form_batch(comps, u, v)


def metric_angle_batch(
    comps: NDArray[np.float64], u: NDArray[np.float64], v: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Metric angles for stacked tensors and vector pairs."""
    sin_part, cos_part = metric_sin_cos_batch(comps, u, v)
    return np.arctan2(sin_part, cos_part)


def metric_cot_batch(
    comps: NDArray[np.float64], u: NDArray[np.float64], v: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Cotangents of metric angles (inf for parallel vectors)."""
    sin_part, cos_part = metric_sin_cos_batch(comps, u, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        return cos_part / sin_part
