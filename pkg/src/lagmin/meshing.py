"""Grid meshing of parametrized surfaces and ASCII OBJ output.

Vertices come from a regular parameter grid with the surface's guard
mask applied; any grid cell touching a guarded or non-finite vertex is
dropped rather than emitted as NaN.  OBJ output is plain `v`/`f` with
optional `l` polylines and is written atomically (temp file + rename)
so a crashed run never leaves a half-written mesh behind.
"""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np


def thread_count() -> int:
    """Parallelism cap from LAGMIN_THREADS (default 1)."""
    raw = os.environ.get("LAGMIN_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


@dataclass
class Mesh:
    vertices: np.ndarray            # (n, 3) valid vertices, row-major grid order
    faces: list                     # quads as 0-based vertex index 4-tuples
    valid: np.ndarray               # (rows, cols) bool mask
    shape: tuple                    # (cols, rows) = grid N x M
    window: tuple = (0.0, 0.0, 0.0, 0.0)
    index: np.ndarray = field(default=None, repr=False)  # grid -> vertex id, -1 invalid


def grid_axes(window, shape):
    u0, u1, v0, v1 = (float(t) for t in window)
    nu, nv = int(shape[0]), int(shape[1])
    if nu < 2 or nv < 2:
        raise ValueError("grid must be at least 2x2")
    return np.linspace(u0, u1, nu), np.linspace(v0, v1, nv)


def _eval_points(surface, uu, vv, ok):
    pts = np.full(ok.shape + (3,), np.nan)
    flat_u = uu[ok]
    flat_v = vv[ok]
    if flat_u.size == 0:
        return pts
    workers = thread_count()
    if workers <= 1 or flat_u.size < 4 * workers:
        pts[ok] = surface.frame(flat_u, flat_v, order=0).r
        return pts
    chunks = np.array_split(np.arange(flat_u.size), workers)
    out = np.empty((flat_u.size, 3))

    def run(idx):
        out[idx] = surface.frame(flat_u[idx], flat_v[idx], order=0).r

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, chunks))
    pts[ok] = out
    return pts


def mesh_from_grid(pts, ok, window, shape) -> Mesh:
    """Assemble a Mesh from grid-shaped points and a validity mask.

    A quad is emitted only when all four corners are valid and finite.
    """
    ok = ok & np.all(np.isfinite(pts), axis=-1)
    index = np.full(ok.shape, -1, dtype=int)
    index[ok] = np.arange(int(ok.sum()))
    faces = []
    cell = ok[:-1, :-1] & ok[:-1, 1:] & ok[1:, 1:] & ok[1:, :-1]
    for i, j in zip(*np.nonzero(cell)):
        faces.append(
            (
                int(index[i, j]),
                int(index[i, j + 1]),
                int(index[i + 1, j + 1]),
                int(index[i + 1, j]),
            )
        )
    return Mesh(pts[ok], faces, ok, tuple(int(s) for s in shape), tuple(window), index)


def surface_mesh(surface, window=None, shape=(100, 100)) -> Mesh:
    """Evaluate the surface on an N x M grid and assemble valid quads."""
    if window is None:
        window = surface.default_window
    u, v = grid_axes(window, shape)
    uu, vv = np.meshgrid(u, v)
    ok = np.broadcast_to(surface.is_safe(uu, vv), uu.shape).copy()
    pts = _eval_points(surface, uu, vv, ok)
    return mesh_from_grid(pts, ok, window, shape)


def field_graph_mesh(fieldobj, window=(-2.0, 2.0, -2.0, 2.0), shape=(100, 100)) -> Mesh:
    """Mesh of the graph (x, y, F(x, y)) with the field's own guards."""
    u, v = grid_axes(window, shape)
    uu, vv = np.meshgrid(u, v)
    ok = np.broadcast_to(fieldobj.is_safe(uu, vv), uu.shape).copy()
    pts = np.full(ok.shape + (3,), np.nan)
    if ok.any():
        vals = np.asarray(fieldobj.value(uu[ok], vv[ok]), dtype=float)
        pts[ok] = np.stack([uu[ok], vv[ok], vals], axis=-1)
    return mesh_from_grid(pts, ok, window, shape)


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def obj_text(mesh: Mesh, polylines=(), comment: str = "") -> str:
    """ASCII OBJ body: v / f plus l records for extra polylines."""
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append("# " + part)
    for p in mesh.vertices:
        lines.append("v %s %s %s" % (_fmt(p[0]), _fmt(p[1]), _fmt(p[2])))
    extra_base = len(mesh.vertices)
    poly_records = []
    for poly in polylines:
        poly = np.asarray(poly, dtype=float)
        if not np.all(np.isfinite(poly)):
            raise ValueError("polyline contains non-finite coordinates")
        ids = []
        for p in poly:
            lines.append("v %s %s %s" % (_fmt(p[0]), _fmt(p[1]), _fmt(p[2])))
            extra_base += 1
            ids.append(extra_base)
        poly_records.append(ids)
    for quad in mesh.faces:
        lines.append("f %d %d %d %d" % tuple(i + 1 for i in quad))
    for ids in poly_records:
        lines.append("l " + " ".join(str(i) for i in ids))
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text: str):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_obj(mesh: Mesh, path, polylines=(), comment: str = ""):
    atomic_write_text(path, obj_text(mesh, polylines, comment))
