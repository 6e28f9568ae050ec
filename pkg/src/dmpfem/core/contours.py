"""Iso-lines of piecewise linear nodal fields (marching triangles)."""

# this_file: src/dmpfem/core/contours.py

from collections import defaultdict
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from dmpfem.api.exceptions import ValidationError
from dmpfem.core.mesh import Mesh

EdgeKey = tuple[int, int]


class Contour(NamedTuple):
    """Polylines of one iso-level; each polyline is an ``(n, 2)`` array."""

    level: float
    polylines: list[NDArray[np.float64]]


class ContourSet(NamedTuple):
    contours: list[Contour]

    @property
    def levels(self) -> list[float]:
        return [c.level for c in self.contours]

    @property
    def is_empty(self) -> bool:
        return not any(c.polylines for c in self.contours)


def _segments(
    m: Mesh, u: NDArray[np.float64], level: float
) -> tuple[list[tuple[EdgeKey, EdgeKey]], dict[EdgeKey, NDArray[np.float64]]]:
    """Per-triangle crossing segments keyed by the mesh edges they cut."""
    tri = m.triangles
    above = u[tri] >= level
    n_above = above.sum(axis=1)
    cut = np.flatnonzero((n_above == 1) | (n_above == 2))

    points: dict[EdgeKey, NDArray[np.float64]] = {}
    segments: list[tuple[EdgeKey, EdgeKey]] = []
    for t in cut.tolist():
        ends: list[EdgeKey] = []
        for a, b in ((0, 1), (1, 2), (2, 0)):
            if above[t, a] == above[t, b]:
                continue
            i, j = int(tri[t, a]), int(tri[t, b])
            key = (i, j) if i < j else (j, i)
            if key not in points:
                lo, hi = key
                s = (level - u[lo]) / (u[hi] - u[lo])
                points[key] = m.vertices[lo] + s * (m.vertices[hi] - m.vertices[lo])
            ends.append(key)
        segments.append((ends[0], ends[1]))
    return segments, points


def _chain(
    segments: list[tuple[EdgeKey, EdgeKey]], points: dict[EdgeKey, NDArray[np.float64]]
) -> list[NDArray[np.float64]]:
    """Join segments sharing a crossing point into polylines.

    Open chains start at points used by a single segment; closed loops repeat
    their first point at the end.
    """
    links: dict[EdgeKey, list[int]] = defaultdict(list)
    for s, (a, b) in enumerate(segments):
        links[a].append(s)
        links[b].append(s)

    used = [False] * len(segments)
    starts = sorted(k for k, v in links.items() if len(v) == 1)
    starts += sorted(k for k, v in links.items() if len(v) != 1)

    polylines = []
    for start in starts:
        while any(not used[s] for s in links[start]):
            path = [start]
            current = start
            while True:
                nxt = next((s for s in links[current] if not used[s]), None)
                if nxt is None:
                    break
                used[nxt] = True
                a, b = segments[nxt]
                current = b if a == current else a
                path.append(current)
            polylines.append(np.array([points[k] for k in path]))
    return polylines


def extract_contours(m: Mesh, u: ArrayLike, levels: ArrayLike) -> ContourSet:
    """Iso-lines of the piecewise linear interpolant of ``u``.

    Levels outside the open interval (min u, max u) produce no contour and
    are skipped.

    Raises:
        ValidationError: If ``u`` does not have one value per vertex.
    """
    values = np.asarray(u, dtype=float)
    if values.shape != (m.n_vertices,):
        raise ValidationError("u", values.shape, f"expected {m.n_vertices} nodal values")
    u_min, u_max = float(values.min()), float(values.max())

    contours = []
    for level in np.atleast_1d(np.asarray(levels, dtype=float)).tolist():
        if not u_min < level < u_max:
            continue
        segments, points = _segments(m, values, level)
        contours.append(Contour(level, _chain(segments, points)))
    return ContourSet(contours)


def default_levels(count: int = 9, lo: float = 0.0, hi: float = 1.0) -> list[float]:
    """``count`` equispaced levels strictly inside (lo, hi)."""
    step = (hi - lo) / (count + 1)
    return [round(lo + step * (k + 1), 12) for k in range(count)]
