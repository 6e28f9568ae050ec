"""Reading and writing meshes in the ``meshfmt 1`` text format.

::

    meshfmt 1
    <N_v> <N>
    v <x> <y>        # N_v lines
    t <i> <j> <k>    # N lines, 0-based, counterclockwise

Blank lines and ``#`` comments are ignored anywhere.
"""

# this_file: src/dmpfem/loaders/mesh_loader.py

from collections.abc import Iterator
from pathlib import Path

from dmpfem.api.exceptions import MeshParseError
from dmpfem.core.mesh import Mesh
from dmpfem.utils.logging import logger
from dmpfem.utils.paths import read_text, write_text

MAGIC = "meshfmt 1"


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _parse_float(token: str, number: int) -> float:
    try:
        return float(token)
    except ValueError as e:
        raise MeshParseError(number, f"'{token}' is not a number") from e


def _parse_int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError as e:
        raise MeshParseError(number, f"'{token}' is not an integer") from e


def read_mesh(text: str) -> Mesh:
    """Parse a mesh from ``meshfmt 1`` text.

    Raises:
        MeshParseError: On a malformed line; carries the 1-based line number.
        MeshValidationError: If the parsed mesh violates the mesh invariants
            (for example a clockwise triangle).
    """
    lines = _content_lines(text)

    first = next(lines, None)
    if first is None:
        raise MeshParseError(1, "empty mesh file")
    number, tokens = first
    if " ".join(tokens) != MAGIC:
        raise MeshParseError(number, f"expected '{MAGIC}' header")

    counts = next(lines, None)
    if counts is None:
        raise MeshParseError(number + 1, "missing '<N_v> <N>' line")
    number, tokens = counts
    if len(tokens) != 2:
        raise MeshParseError(number, "expected '<N_v> <N>'")
    n_v, n_t = (_parse_int(tok, number) for tok in tokens)
    if n_v < 0 or n_t < 0:
        raise MeshParseError(number, "counts must be non-negative")

    vertices: list[tuple[float, float]] = []
    triangles: list[tuple[int, int, int]] = []
    last = number
    for number, tokens in lines:
        last = number
        if len(vertices) < n_v:
            if tokens[0] != "v" or len(tokens) != 3:
                raise MeshParseError(number, "expected 'v <x> <y>'")
            vertices.append((_parse_float(tokens[1], number), _parse_float(tokens[2], number)))
        elif len(triangles) < n_t:
            if tokens[0] != "t" or len(tokens) != 4:
                raise MeshParseError(number, "expected 't <i> <j> <k>'")
            i, j, k = (_parse_int(tok, number) for tok in tokens[1:])
            triangles.append((i, j, k))
        else:
            raise MeshParseError(number, "unexpected content after the last triangle")

    if len(vertices) < n_v or len(triangles) < n_t:
        raise MeshParseError(
            last + 1,
            f"file ends early: {len(vertices)}/{n_v} vertices, {len(triangles)}/{n_t} triangles",
        )
    return Mesh(vertices, triangles)


def write_mesh(m: Mesh) -> str:
    """Serialize a mesh; coordinates use the shortest round-tripping float repr."""
    out = [MAGIC, f"{m.n_vertices} {m.n_triangles}"]
    out.extend(f"v {x!r} {y!r}" for x, y in m.vertices.tolist())
    out.extend(f"t {i} {j} {k}" for i, j, k in m.triangles.tolist())
    return "\n".join(out) + "\n"


def load_mesh(path: str | Path) -> Mesh:
    """Read a mesh file."""
    mesh = read_mesh(read_text(path))
    logger.info(f"Read mesh {path}: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles")
    return mesh


def save_mesh(m: Mesh, path: str | Path) -> Path:
    """Write a mesh file, creating parent directories."""
    out = write_text(path, write_mesh(m))
    logger.info(f"Wrote mesh {out}: {m.n_vertices} vertices, {m.n_triangles} triangles")
    return out
