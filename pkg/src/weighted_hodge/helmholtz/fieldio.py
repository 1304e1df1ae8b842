"""Plain-text serialization of grid fields.

Format::

    # r0=1,R=32,n_r=64,n_ang=8,version=1
    # columns=r,phi,theta,vx,vy,vz
    1,0,-1.4106,0.1,0.2,0.3
    ...

One row per node in grid order. Scalar files use the columns
``r,phi,theta,u``. Numbers are written with 17 significant digits so a
round trip is exact.
"""
from __future__ import annotations

import io
from typing import Tuple, Union

import numpy as np

from ..errors import FieldFileError, GridError
from .grid import ShellGrid

__all__ = ["FORMAT_VERSION", "write_grid_field", "read_grid_field", "format_grid_field"]

FORMAT_VERSION = 1
_VECTOR_COLS = "r,phi,theta,vx,vy,vz"
_SCALAR_COLS = "r,phi,theta,u"


def format_grid_field(grid: ShellGrid, values) -> str:
    values = np.asarray(values, float)
    if values.shape == (grid.size,):
        cols, data = _SCALAR_COLS, values[:, None]
    elif values.shape == (grid.size, 3):
        cols, data = _VECTOR_COLS, values
    else:
        raise GridError(f"cannot serialize samples of shape {values.shape}")
    out = io.StringIO()
    out.write(f"# r0={grid.r0!r},R={grid.R!r},n_r={grid.n_r},n_ang={grid.n_ang},"
              f"version={FORMAT_VERSION}\n")
    out.write(f"# columns={cols}\n")
    table = np.column_stack([grid.node_r, grid.node_phi, grid.node_theta, data])
    for row in table:
        out.write(",".join(f"{v:.17g}" for v in row))
        out.write("\n")
    return out.getvalue()


def write_grid_field(path, grid: ShellGrid, values) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_grid_field(grid, values))


def _parse_header(line: str):
    if not line.startswith("#"):
        raise FieldFileError(1, "missing metadata header")
    meta = {}
    for item in line[1:].strip().split(","):
        if "=" not in item:
            raise FieldFileError(1, f"malformed header entry {item!r}")
        k, v = item.split("=", 1)
        meta[k.strip()] = v.strip()
    for key in ("r0", "R", "n_r", "n_ang", "version"):
        if key not in meta:
            raise FieldFileError(1, f"header lacks {key}")
    try:
        version = int(meta["version"])
        grid = ShellGrid(float(meta["r0"]), float(meta["R"]), int(meta["n_r"]), int(meta["n_ang"]))
    except (ValueError, GridError) as exc:
        raise FieldFileError(1, f"bad header value: {exc}") from None
    if version != FORMAT_VERSION:
        raise FieldFileError(1, f"unsupported version {version}")
    return grid


def read_grid_field(source: Union[str, io.TextIOBase]) -> Tuple[ShellGrid, np.ndarray]:
    """Parse a field file; raises :class:`FieldFileError` with a line number."""
    if isinstance(source, str):
        with open(source, "r", encoding="ascii", errors="replace") as fh:
            lines = fh.read().splitlines()
    else:
        lines = source.read().splitlines()
    if not lines:
        raise FieldFileError(1, "empty file")
    grid = _parse_header(lines[0])
    n_cols = None
    rows = []
    line_no = 1
    for line_no, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            if text[1:].strip().startswith("columns="):
                cols = text[1:].strip()[len("columns="):]
                if cols not in (_VECTOR_COLS, _SCALAR_COLS):
                    raise FieldFileError(line_no, f"unknown column layout {cols!r}")
                n_cols = len(cols.split(","))
            continue
        parts = text.split(",")
        if n_cols is None:
            if len(parts) not in (4, 7):
                raise FieldFileError(line_no, f"expected 4 or 7 columns, got {len(parts)}")
            n_cols = len(parts)
        if len(parts) != n_cols:
            raise FieldFileError(line_no, f"expected {n_cols} columns, got {len(parts)}")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise FieldFileError(line_no, "non-numeric entry") from None
        if not all(np.isfinite(vals)):
            raise FieldFileError(line_no, "non-finite entry")
        k = len(rows)
        if k >= grid.size:
            raise FieldFileError(line_no, f"more rows than the {grid.size} grid nodes")
        node = (grid.node_r[k], grid.node_phi[k], grid.node_theta[k])
        if not np.allclose(vals[:3], node, rtol=1e-9, atol=1e-12):
            raise FieldFileError(line_no, f"node coordinates do not match grid node {k}")
        rows.append(vals[3:])
    if len(rows) != grid.size:
        raise FieldFileError(line_no + 1, f"expected {grid.size} rows, found {len(rows)}")
    data = np.array(rows)
    return grid, (data[:, 0] if data.shape[1] == 1 else data)
