"""Custom exceptions for dmpfem operations."""

from typing import Any


class DmpFemError(Exception):
    """Base exception for all dmpfem errors."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        """Initialize the exception."""
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ValidationError(DmpFemError):
    """Raised when input data fails validation."""

    def __init__(self, field: str, value: Any, reason: str) -> None:
        """Initialize the exception."""
        message = f"Validation failed for {field}={value}: {reason}"
        super().__init__(message, {"field": field, "value": value})
        self.field = field
        self.value = value
        self.reason = reason


class NotSpdError(ValidationError):
    """Raised when a 2x2 tensor is not symmetric positive definite."""

    def __init__(self, d11: float, d12: float, d22: float) -> None:
        """Initialize the exception."""
        det = d11 * d22 - d12 * d12
        reason = f"d11={d11:g}, determinant={det:g}; both must be > 0"
        super().__init__("tensor", (d11, d12, d22), reason)
        self.determinant = det


class BadResolutionError(ValidationError):
    """Raised when a mesh generator gets a non-positive cell count."""

    def __init__(self, nx: int, ny: int) -> None:
        """Initialize the exception."""
        super().__init__("resolution", (nx, ny), "nx and ny must be >= 1")


class MeshValidationError(ValidationError):
    """Raised when a mesh violates its structural invariants."""

    def __init__(self, reason: str, details: dict[str, Any] | None = None) -> None:
        """Initialize the exception."""
        super().__init__("mesh", "<mesh>", reason)
        self.details.update(details or {})


class GeometryError(DmpFemError):
    """Base class for degenerate geometric configurations."""


class DegenerateVectorError(GeometryError):
    """Raised when an angle is requested for a (numerically) zero vector."""

    def __init__(self, norm: float) -> None:
        """Initialize the exception."""
        super().__init__(f"Vector has metric norm {norm:g}; an angle is undefined", {"norm": norm})
        self.norm = norm


class DegenerateTriangleError(GeometryError):
    """Raised when a triangle has (numerically) zero area."""

    def __init__(self, triangle: int, det: float) -> None:
        """Initialize the exception."""
        super().__init__(
            f"Triangle {triangle} is degenerate (edge-matrix determinant {det:g})",
            {"triangle": triangle, "det": det},
        )
        self.triangle = triangle


class DegenerateMetricAngleError(GeometryError):
    """Raised when a metric angle is too small for its cotangent to be meaningful."""

    def __init__(self, angle: float, details: dict[str, Any] | None = None) -> None:
        """Initialize the exception."""
        super().__init__(f"Metric angle {angle:g} rad is degenerate", details)
        self.angle = angle


class MeshError(DmpFemError):
    """Base class for mesh topology and file errors."""


class NonManifoldError(MeshError):
    """Raised when an edge is shared by more than two triangles."""

    def __init__(self, edge: tuple[int, int], count: int) -> None:
        """Initialize the exception."""
        super().__init__(
            f"Edge {edge} is shared by {count} triangles (at most 2 allowed)",
            {"edge": edge, "count": count},
        )
        self.edge = edge


class NonConvexQuadError(MeshError):
    """Raised when flipping an edge would invert a triangle."""

    def __init__(self, edge: int | tuple[int, int]) -> None:
        """Initialize the exception."""
        super().__init__(
            f"Interior edge {edge} borders a non-convex quadrilateral and cannot be flipped",
            {"edge": edge},
        )
        self.edge = edge


class MeshParseError(MeshError):
    """Raised when a mesh file cannot be parsed."""

    def __init__(self, line_number: int, reason: str) -> None:
        """Initialize the exception."""
        super().__init__(f"Mesh parse error at line {line_number}: {reason}", {"line": line_number})
        self.line_number = line_number
        self.reason = reason


class SolverError(DmpFemError):
    """Base class for linear solver failures."""


class NoConvergenceError(SolverError):
    """Raised when the iterative solver misses its tolerance."""

    def __init__(self, iterations: int, residual: float, best: Any) -> None:
        """Initialize the exception."""
        super().__init__(
            f"Solver did not converge after {iterations} iterations (residual {residual:.3e})",
            {"iterations": iterations, "residual": residual},
        )
        self.iterations = iterations
        self.residual = residual
        self.best = best


class ConfigurationError(DmpFemError):
    """Raised when there's a configuration issue."""

    def __init__(self, config_name: str, reason: str, details: dict[str, Any] | None = None) -> None:
        """Initialize the exception."""
        message = f"Configuration error for '{config_name}': {reason}"
        super().__init__(message, details)
        self.config_name = config_name
        self.reason = reason


class UsageError(DmpFemError):
    """Raised when command-line arguments are missing or inconsistent."""


class ConsistencyError(DmpFemError):
    """Raised when equivalent forms of the edge condition disagree."""

    def __init__(self, location: str, verdicts: dict[str, bool], details: dict[str, Any] | None = None) -> None:
        """Initialize the exception."""
        super().__init__(
            f"{location}: condition forms disagree {verdicts}",
            {"verdicts": verdicts, **(details or {})},
        )
        self.verdicts = verdicts
