"""Numerical core of dmpfem."""

from dmpfem.core.geometry import SpdTensor, Vec2, make_spd, metric_angle, tensor_invariants
from dmpfem.core.mesh import EdgeTopology, Mesh, Rectangle, build_connectivity
from dmpfem.core.problem import ProblemSpec
from dmpfem.core.settings import DEFAULT_SETTINGS, Settings

__all__ = [
    "DEFAULT_SETTINGS",
    "EdgeTopology",
    "Mesh",
    "ProblemSpec",
    "Rectangle",
    "Settings",
    "SpdTensor",
    "Vec2",
    "build_connectivity",
    "make_spd",
    "metric_angle",
    "tensor_invariants",
]
