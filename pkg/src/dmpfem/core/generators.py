"""Structured benchmark meshes, a jittered Delaunay mesh and a Lawson flipper."""

# this_file: src/dmpfem/core/generators.py

import math
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import Delaunay

from dmpfem.api.exceptions import BadResolutionError, MeshError, ValidationError
from dmpfem.core.geometry import IDENTITY, SpdTensor, metric_angle_batch
from dmpfem.core.mesh import (
    DEGENERACY_FACTOR,
    Mesh,
    MutableTriangulation,
    Rectangle,
    edge_scale_sq,
    signed_double_areas,
)
from dmpfem.utils.logging import logger

DEFAULT_FRACTION = 0.75
DEFAULT_SEED = 42
DEFAULT_JITTER = 0.3
MAX_JITTER = 0.49


class MeshPattern(str, Enum):
    """Mesh families of the benchmark study."""

    NW = "nw"
    NE = "ne"
    FOURWAY = "fourway"
    DELAUNAY = "delaunay"


def _check_resolution(nx: int, ny: int) -> None:
    if isinstance(nx, bool) or isinstance(ny, bool) or int(nx) != nx or int(ny) != ny:
        raise BadResolutionError(nx, ny)
    if nx < 1 or ny < 1:
        raise BadResolutionError(nx, ny)


def _grid_points(domain: Rectangle, nx: int, ny: int) -> NDArray[np.float64]:
    """Grid nodes with index ``j * (nx + 1) + i`` for column i, row j."""
    xs = np.linspace(domain.x0, domain.x1, nx + 1)
    ys = np.linspace(domain.y0, domain.y1, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    return np.stack([gx.ravel(), gy.ravel()], axis=1)


def _cell_corners(nx: int, ny: int) -> tuple[NDArray[np.int64], ...]:
    """Corner vertex ids (p00, p10, p11, p01) of every cell, row-major."""
    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    i, j = i.ravel(), j.ravel()
    stride = nx + 1
    p00 = j * stride + i
    return p00, p00 + 1, p00 + stride + 1, p00 + stride


def _split_cells(nx: int, ny: int, pattern: MeshPattern) -> NDArray[np.int64]:
    p00, p10, p11, p01 = _cell_corners(nx, ny)
    if pattern is MeshPattern.NE:
        pair = (np.stack([p00, p10, p11], axis=1), np.stack([p00, p11, p01], axis=1))
    else:
        pair = (np.stack([p00, p10, p01], axis=1), np.stack([p10, p11, p01], axis=1))
    return np.stack(pair, axis=1).reshape(-1, 3)


def generate_grid_mesh(
    domain: Rectangle,
    nx: int,
    ny: int,
    pattern: MeshPattern | str,
    fraction: float = DEFAULT_FRACTION,
) -> Mesh:
    """Uniform ``nx x ny`` cell mesh split by the given pattern.

    NE and NW split every cell along the northeast ((0,0)-(1,1)) or northwest
    ((1,0)-(0,1)) diagonal. FOURWAY adds one vertex per cell at cell fraction
    ``(fraction, fraction)`` and connects it to the four corners.

    Args:
        domain: Rectangle to mesh.
        nx: Cells along x.
        ny: Cells along y.
        pattern: Split pattern (``delaunay`` is handled by :func:`generate_delaunay_mesh`).
        fraction: FOURWAY interior point position, strictly between 0 and 1.

    Raises:
        BadResolutionError: If nx or ny < 1.
        ValidationError: For an unknown pattern or a fraction outside (0, 1).
    """
    _check_resolution(nx, ny)
    pattern = MeshPattern(pattern)
    points = _grid_points(domain, nx, ny)

    if pattern in (MeshPattern.NE, MeshPattern.NW):
        triangles = _split_cells(nx, ny, pattern)
    elif pattern is MeshPattern.FOURWAY:
        if not 0.0 < fraction < 1.0:
            raise ValidationError("fraction", fraction, "must lie strictly between 0 and 1")
        p00, p10, p11, p01 = _cell_corners(nx, ny)
        hx, hy = domain.width / nx, domain.height / ny
        centers = points[p00] + np.array([fraction * hx, fraction * hy])
        c = points.shape[0] + np.arange(p00.size)
        points = np.vstack([points, centers])
        quads = (
            np.stack([p00, p10, c], axis=1),
            np.stack([p10, p11, c], axis=1),
            np.stack([p11, p01, c], axis=1),
            np.stack([p01, p00, c], axis=1),
        )
        triangles = np.stack(quads, axis=1).reshape(-1, 3)
    else:
        raise ValidationError("pattern", pattern.value, "use generate_delaunay_mesh")

    m = Mesh(points, triangles, domain)
    logger.debug(f"Generated {pattern.value} mesh {nx}x{ny}: {m!r}")
    return m


def _jitter_points(
    domain: Rectangle, nx: int, ny: int, jitter: float, seed: int
) -> NDArray[np.float64]:
    points = _grid_points(domain, nx, ny)
    rng = np.random.default_rng(seed)
    offsets = rng.uniform(-jitter, jitter, size=points.shape)
    offsets *= np.array([domain.width / nx, domain.height / ny])

    i = np.tile(np.arange(nx + 1), ny + 1)
    j = np.repeat(np.arange(ny + 1), nx + 1)
    # Boundary points slide only along their side; corners stay put.
    offsets[(i == 0) | (i == nx), 0] = 0.0
    offsets[(j == 0) | (j == ny), 1] = 0.0
    return points + offsets


def _valid_triangles(points: NDArray[np.float64], triangles: NDArray[np.int64]) -> bool:
    dbl = signed_double_areas(points, triangles)
    return bool(np.all(dbl > DEGENERACY_FACTOR * edge_scale_sq(points, triangles)))


def _qhull_triangles(points: NDArray[np.float64]) -> NDArray[np.int64]:
    simplices = np.array(Delaunay(points).simplices, dtype=np.int64)
    dbl = signed_double_areas(points, simplices)
    cw = dbl < 0
    simplices[cw] = simplices[cw][:, [0, 2, 1]]
    keep = np.abs(dbl) > DEGENERACY_FACTOR * edge_scale_sq(points, simplices)
    return simplices[keep]


def generate_delaunay_mesh(
    domain: Rectangle,
    nx: int,
    ny: int,
    jitter: float = DEFAULT_JITTER,
    seed: int = DEFAULT_SEED,
) -> Mesh:
    """Jittered-grid Delaunay mesh.

    Grid nodes are displaced by uniform noise of at most ``jitter`` cell
    widths (boundary nodes only along their side), triangulated with the NE
    split (or Qhull when that split inverts a cell), then Lawson-flipped
    until every interior edge satisfies the Euclidean Delaunay angle condition.

    Raises:
        BadResolutionError: If nx or ny < 1.
        ValidationError: If jitter is outside [0, 0.49].
    """
    _check_resolution(nx, ny)
    if not 0.0 <= jitter <= MAX_JITTER:
        raise ValidationError("jitter", jitter, f"must lie in [0, {MAX_JITTER}]")

    points = _jitter_points(domain, nx, ny, jitter, seed)
    seed_triangles = _split_cells(nx, ny, MeshPattern.NE)
    if not _valid_triangles(points, seed_triangles):
        logger.debug("NE split inverts a jittered cell; seeding from Qhull")
        seed_triangles = _qhull_triangles(points)

    m, flips = lawson_flip(Mesh(points, seed_triangles, domain))
    logger.debug(f"Delaunay mesh {nx}x{ny} (seed={seed}, jitter={jitter}): {flips} flips")
    return m


def opposite_angle_sum(
    tri: MutableTriangulation, edge: tuple[int, int], comps: NDArray[np.float64]
) -> float:
    """Sum of the two angles opposite ``edge``, measured in the metric ``comps``."""
    i, j, k, l, _, _ = tri.quad(edge)
    p = tri.vertices
    u = np.array([p[i] - p[k], p[i] - p[l]])
    v = np.array([p[j] - p[k], p[j] - p[l]])
    angles = metric_angle_batch(comps, u, v)
    return float(angles[0] + angles[1])


def lawson_flip(
    m: Mesh, metric: SpdTensor | None = None, tol: float = 1e-12
) -> tuple[Mesh, int]:
    """Flip edges until every opposite angle pair sums to at most pi + tol.

    Angles are Euclidean unless ``metric`` is given, in which case they are
    measured in that metric (the Delaunay mesh of the mapped point set).

    Returns:
        The flipped mesh and the number of flips.

    Raises:
        MeshError: If the flip count reaches 10 N^2.
    """
    comps = (metric or IDENTITY).components()
    tri = MutableTriangulation(m)
    cap = 10 * m.n_triangles * m.n_triangles
    stack = tri.interior_edges()
    threshold = math.pi + tol

    while stack:
        edge = stack.pop()
        if not tri.is_interior(edge):
            continue
        if opposite_angle_sum(tri, edge, comps) <= threshold or not tri.can_flip(edge):
            continue
        outer = tri.outer_edges(edge)
        tri.flip(edge)
        if tri.flips >= cap:
            raise MeshError(f"Lawson flipping hit its cap of {cap} flips", {"cap": cap})
        stack.extend(e for e in outer if tri.is_interior(e))

    return tri.to_mesh(), tri.flips
