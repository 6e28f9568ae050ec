"""Barycentric quadrature rules on triangles."""

# this_file: src/dmpfem/core/quadrature.py

import math
from collections.abc import Callable
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from dmpfem.api.exceptions import ValidationError
from dmpfem.core.settings import QuadratureName


class QuadratureRule(BaseModel):
    """Weights normalized to 1 and barycentric nodes.

    ``integral over K of g  ~  |K| * sum_k weights[k] * g(F_K(nodes[k]))``.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    weights: tuple[float, ...]
    nodes: tuple[tuple[float, float, float], ...]

    @model_validator(mode="after")
    def _check_rule(self) -> "QuadratureRule":
        if len(self.weights) != len(self.nodes) or not self.weights:
            raise ValidationError("quadrature", self.name, "weights and nodes must match in length")
        if math.fsum(self.weights) != 1.0:
            raise ValidationError("quadrature", self.name, "weights must sum to 1")
        for node in self.nodes:
            if min(node) < 0 or abs(math.fsum(node) - 1.0) > 1e-15:
                raise ValidationError("quadrature", self.name, f"bad barycentric node {node}")
        return self

    @property
    def size(self) -> int:
        return len(self.weights)

    def weight_array(self) -> NDArray[np.float64]:
        return np.array(self.weights)

    def node_array(self) -> NDArray[np.float64]:
        """``(n, 3)`` barycentric coordinates."""
        return np.array(self.nodes)

    def points(self, corners: NDArray[np.float64]) -> NDArray[np.float64]:
        """Physical quadrature points for ``(..., 3, 2)`` triangle corners."""
        return np.einsum("kv,...vd->...kd", self.node_array(), corners)

    def integrate(
        self,
        func: Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]],
        corners: NDArray[np.float64],
    ) -> float:
        """Approximate the integral of ``func(x, y)`` over one triangle."""
        pts = self.points(corners)
        e1, e2 = corners[1] - corners[0], corners[2] - corners[0]
        area = 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0])
        values = np.asarray(func(pts[:, 0], pts[:, 1]), dtype=float)
        return float(area * np.dot(self.weight_array(), values))


CENTROID = QuadratureRule(name="centroid", weights=(1.0,), nodes=((1 / 3, 1 / 3, 1 / 3),))

THREE_POINT = QuadratureRule(
    name="three_point",
    weights=(1 / 3, 1 / 3, 1 / 3),
    nodes=(
        (1 / 6, 1 / 6, 2 / 3),
        (1 / 6, 2 / 3, 1 / 6),
        (2 / 3, 1 / 6, 1 / 6),
    ),
)


@lru_cache(maxsize=None)
def builtin_rules() -> dict[QuadratureName, QuadratureRule]:
    """The centroid and three-point rules keyed by name."""
    return {QuadratureName.CENTROID: CENTROID, QuadratureName.THREE_POINT: THREE_POINT}


def get_rule(name: QuadratureName | str) -> QuadratureRule:
    """Look up a built-in rule by name.

    Raises:
        ValidationError: For an unknown rule name.
    """
    try:
        return builtin_rules()[QuadratureName(name)]
    except ValueError as e:
        choices = ", ".join(q.value for q in QuadratureName)
        raise ValidationError("quadrature", name, f"choose one of {choices}") from e
