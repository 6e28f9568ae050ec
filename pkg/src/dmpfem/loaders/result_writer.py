"""Text emitters for solutions, reports, sweeps and figures.

All emitters are pure functions returning text; files are written through
:func:`dmpfem.utils.paths.write_text`. Floats are printed with ``repr`` so
they parse back bit-exactly, and SVG coordinates are rounded to a fixed
number of decimals so output is deterministic.
"""

# this_file: src/dmpfem/loaders/result_writer.py

import csv
import io
import math
from collections.abc import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, Field
from scipy import sparse

from dmpfem.api.exceptions import ValidationError
from dmpfem.core.benchmark import RegionSample, SweepResult
from dmpfem.core.conditions import BoundsReport, ConditionReport, MMatrixReport
from dmpfem.core.contours import ContourSet
from dmpfem.core.mesh import Mesh, Rectangle, build_connectivity

SWEEP_HEADER = (
    "pattern",
    "nx",
    "ny",
    "N",
    "violations_delaunay",
    "violations_nonobtuse",
    "overshoot",
    "undershoot",
)
SVG_SIZE = 480
SVG_MARGIN = 40
SVG_DIGITS = 3


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def solution_csv(m: Mesh, u: ArrayLike) -> str:
    """``x,y,u,is_boundary`` rows in vertex order.

    Raises:
        ValidationError: If ``u`` does not have one value per vertex.
    """
    values = np.asarray(u, dtype=float)
    if values.shape != (m.n_vertices,):
        raise ValidationError("u", values.shape, f"expected {m.n_vertices} nodal values")
    boundary = ~build_connectivity(m).interior_vertex_flags
    rows = (
        (repr(x), repr(y), repr(val), int(b))
        for (x, y), val, b in zip(m.vertices.tolist(), values.tolist(), boundary.tolist(), strict=True)
    )
    return _csv_text(("x", "y", "u", "is_boundary"), rows)


def sweep_csv(result: SweepResult) -> str:
    """One row per sweep case, ordered by N."""
    rows = (
        (
            r.pattern.value,
            r.nx,
            r.ny,
            r.n_elements,
            r.violations_delaunay,
            r.violations_nonobtuse,
            repr(r.overshoot),
            repr(r.undershoot),
        )
        for r in result.rows
    )
    return _csv_text(SWEEP_HEADER, rows)


def dump_system(matrix: sparse.spmatrix, rhs: ArrayLike | None = None) -> str:
    """Nonzeros as ``i j value`` lines in row-major order, then ``b i value`` lines."""
    coo = sparse.csr_matrix(matrix).tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = [
        f"{int(i)} {int(j)} {float(v)!r}"
        for i, j, v in zip(coo.row[order], coo.col[order], coo.data[order], strict=True)
    ]
    if rhs is not None:
        lines.extend(f"b {i} {float(v)!r}" for i, v in enumerate(np.asarray(rhs, dtype=float)))
    return "\n".join(lines) + "\n"


class EdgeRecord(BaseModel):
    """One interior edge of a check report; angles in multiples of pi."""

    edge: int
    endpoints: tuple[int, int]
    triangles: tuple[int, int]
    metric_angles_over_pi: tuple[float, float]
    dets: tuple[float, float]
    lhs_symmetric_over_pi: float
    lhs_asymmetric_over_pi: float
    a_ij: float
    satisfied: bool
    affects_interior: bool


class CheckReport(BaseModel):
    """JSON document written by ``check``; field order is the key order."""

    edges: list[EdgeRecord]
    violations_delaunay_type: int
    violations_nonobtuse: int
    max_metric_angle_over_pi: float
    max_pair_sum_over_pi: float
    m_matrix_verdict: bool
    overshoot: float | None = Field(None, description="None when no solution was computed")
    undershoot: float | None = None


def _edge_records(report: ConditionReport) -> list[EdgeRecord]:
    topo = report.topo
    records = []
    for e in range(report.n_edges):
        i, j = (int(v) for v in topo.interior_edges[e])
        records.append(
            EdgeRecord(
                edge=e,
                endpoints=(i, j),
                triangles=(int(topo.left[e]), int(topo.right[e])),
                metric_angles_over_pi=(
                    float(report.alpha[e, 0]) / math.pi,
                    float(report.alpha[e, 1]) / math.pi,
                ),
                dets=(float(report.dets[e, 0]), float(report.dets[e, 1])),
                lhs_symmetric_over_pi=float(report.lhs_symmetric[e]) / math.pi,
                lhs_asymmetric_over_pi=float(report.lhs_asymmetric[e]) / math.pi,
                a_ij=float(report.a_ij[e]),
                satisfied=bool(report.satisfied[e]),
                affects_interior=bool(report.affects_interior[e]),
            )
        )
    return records


def check_report(
    conditions: ConditionReport,
    m_matrix: MMatrixReport,
    bounds: BoundsReport | None = None,
) -> CheckReport:
    """Collect the condition, M-matrix and bounds verdicts of one mesh."""
    return CheckReport(
        edges=_edge_records(conditions),
        violations_delaunay_type=conditions.violations_delaunay_type,
        violations_nonobtuse=conditions.violations_nonobtuse,
        max_metric_angle_over_pi=conditions.max_metric_angle / math.pi,
        max_pair_sum_over_pi=conditions.max_pair_sum / math.pi,
        m_matrix_verdict=m_matrix.verdict,
        overshoot=bounds.overshoot if bounds else None,
        undershoot=bounds.undershoot if bounds else None,
    )


def report_json(report: CheckReport) -> str:
    return report.model_dump_json(indent=2) + "\n"


# SVG


class _Viewport:
    """Maps a data rectangle onto a square canvas with y pointing up."""

    def __init__(self, box: Rectangle, size: int = SVG_SIZE, margin: int = SVG_MARGIN) -> None:
        self.box = box
        self.size = size
        self.margin = margin
        self.scale = (size - 2 * margin) / max(box.width, box.height)

    def x(self, value: float) -> float:
        return round(self.margin + (value - self.box.x0) * self.scale, SVG_DIGITS)

    def y(self, value: float) -> float:
        return round(self.size - self.margin - (value - self.box.y0) * self.scale, SVG_DIGITS)

    def points(self, xy: NDArray[np.float64]) -> str:
        return " ".join(f"{self.x(px)},{self.y(py)}" for px, py in xy.tolist())


def _svg_document(size: int, body: list[str], title: str) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    return "\n".join([*head, *body, "</svg>"]) + "\n"


def _frame(vp: _Viewport) -> str:
    b = vp.box
    return (
        f'<rect x="{vp.x(b.x0)}" y="{vp.y(b.y1)}" width="{round(b.width * vp.scale, SVG_DIGITS)}" '
        f'height="{round(b.height * vp.scale, SVG_DIGITS)}" fill="none" stroke="black"/>'
    )


def contours_svg(contours: ContourSet, domain: Rectangle, mesh: Mesh | None = None) -> str:
    """Iso-lines over the domain frame, optionally on top of the mesh edges."""
    vp = _Viewport(domain)
    body = []
    if mesh is not None:
        for tri in mesh.triangles.tolist():
            pts = mesh.vertices[[*tri, tri[0]]]
            body.append(
                f'<polyline points="{vp.points(pts)}" fill="none" stroke="#cccccc" stroke-width="0.5"/>'
            )
    body.append(_frame(vp))
    for contour in contours.contours:
        body.append(f'<g class="level" data-level="{contour.level!r}">')
        for line in contour.polylines:
            body.append(f'<polyline points="{vp.points(line)}" fill="none" stroke="blue"/>')
        body.append("</g>")
    return _svg_document(vp.size, body, "solution contours")


def region_svg(sample: RegionSample) -> str:
    """Sampled condition region as cells plus the analytic boundary curve."""
    box = Rectangle(x0=0.0, y0=0.0, x1=math.pi, y1=math.pi)
    vp = _Viewport(box)
    cell = math.pi / sample.grid
    w = round(cell * vp.scale, SVG_DIGITS)
    body = []
    # Rows of ``inside`` are alpha (vertical axis), columns alpha' (horizontal).
    for a, b in np.argwhere(sample.inside).tolist():
        body.append(
            f'<rect x="{vp.x(b * cell)}" y="{vp.y((a + 1) * cell)}" width="{w}" height="{w}" '
            f'fill="#9ecae1" stroke="none"/>'
        )
    curve = np.column_stack([sample.centers, sample.boundary])
    body.append(f'<polyline points="{vp.points(curve)}" fill="none" stroke="red"/>')
    body.append(_frame(vp))
    body.append(
        f'<text x="{vp.size / 2}" y="{vp.size - 10}" text-anchor="middle">alpha\'</text>'
    )
    body.append(f'<text x="10" y="{vp.size / 2}">alpha</text>')
    return _svg_document(vp.size, body, f"condition region, det ratio {sample.det_ratio!r}")


def sweep_svg(result: SweepResult) -> str:
    """Log-log plot of overshoot and undershoot against N.

    Cases with a zero value are left out of the log axis.
    """
    n = np.array([r.n_elements for r in result.rows], dtype=float)
    series = {
        "overshoot": np.array([r.overshoot for r in result.rows]),
        "undershoot": np.array([r.undershoot for r in result.rows]),
    }
    values = np.concatenate([v[v > 0] for v in series.values()])
    if values.size == 0:
        values = np.array([1.0])
    lx = np.log10(n)
    ly_lo, ly_hi = math.floor(float(np.log10(values.min()))), math.ceil(float(np.log10(values.max())))
    if ly_hi == ly_lo:
        ly_hi += 1
    lx_lo, lx_hi = math.floor(float(lx.min())), math.ceil(float(lx.max()))
    if lx_hi == lx_lo:
        lx_hi += 1

    box = Rectangle(x0=0.0, y0=0.0, x1=1.0, y1=1.0)
    vp = _Viewport(box)

    def unit(v: NDArray[np.float64], lo: float, hi: float) -> NDArray[np.float64]:
        return (v - lo) / (hi - lo)

    body = [_frame(vp)]
    colors = {"overshoot": "red", "undershoot": "blue"}
    for name, v in series.items():
        keep = v > 0
        if not np.any(keep):
            continue
        pts = np.column_stack([unit(lx[keep], lx_lo, lx_hi), unit(np.log10(v[keep]), ly_lo, ly_hi)])
        body.append(f'<polyline points="{vp.points(pts)}" fill="none" stroke="{colors[name]}"/>')
        for px, py in pts.tolist():
            body.append(f'<circle cx="{vp.x(px)}" cy="{vp.y(py)}" r="3" fill="{colors[name]}"/>')
    for k in range(lx_lo, lx_hi + 1):
        body.append(
            f'<text x="{vp.x(unit(np.array(k), lx_lo, lx_hi).item())}" y="{vp.size - 15}" '
            f'text-anchor="middle">1e{k}</text>'
        )
    for k in range(ly_lo, ly_hi + 1):
        body.append(
            f'<text x="5" y="{vp.y(unit(np.array(k), ly_lo, ly_hi).item())}">1e{k}</text>'
        )
    return _svg_document(vp.size, body, f"{result.pattern.value} overshoot and undershoot vs N")
