"""Command services and exceptions for dmpfem."""

from dmpfem.api.exceptions import (
    ConfigurationError,
    DmpFemError,
    GeometryError,
    MeshError,
    NoConvergenceError,
    NotSpdError,
    SolverError,
    UsageError,
    ValidationError,
)

__all__ = [
    "ConfigurationError",
    "DmpFemError",
    "GeometryError",
    "MeshError",
    "NoConvergenceError",
    "NotSpdError",
    "SolverError",
    "UsageError",
    "ValidationError",
]
