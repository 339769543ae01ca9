"""File formats: matrix/tensor CSV, point-cloud CSV, SVG scatter, JSON helpers.

Matrix and tensor files carry a ``# shape: n1,n2[,n3...]`` header followed by
the values in vec (column-major, first index fastest) order, one per line.
Floats are written in shortest round-trip form; complex entries use the
``re+imi`` syntax.  Point clouds are one ``x,y[,z]`` row per point with an
optional ``# label:`` header.
"""

from __future__ import annotations

import json
from typing import TextIO

import numpy as np

from .linalg import unvec, vec


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips to the same double."""
    if not np.isfinite(x):
        raise ValueError("non-finite data")
    return repr(float(x))


def format_scalar(z: complex | float, force_complex: bool = False) -> str:
    """Format a value; complex ones as ``re+imi``."""
    z = complex(z)
    if z.imag == 0.0 and not force_complex:
        return format_float(z.real)
    re = format_float(z.real)
    im = format_float(abs(z.imag))
    sign = "+" if z.imag >= 0 else "-"
    return f"{re}{sign}{im}i"


def parse_scalar(token: str) -> complex | float:
    """Parse a real or ``re+imi`` token."""
    tok = token.strip()
    if not tok:
        raise ValueError("empty scalar token")
    if tok[-1] in "iI":
        body = tok[:-1]
        # Split at the sign of the imaginary part: the last +/- not part of
        # an exponent and not leading.
        for k in range(len(body) - 1, 0, -1):
            ch = body[k]
            if ch in "+-" and body[k - 1] not in "eE":
                re_part = body[:k]
                im_part = body[k:]
                break
        else:
            # Pure imaginary like "2i" or "-0.5i".
            re_part = "0"
            im_part = body if body not in ("", "+", "-") else body + "1"
        if im_part in ("+", "-"):
            im_part += "1"
        return complex(float(re_part), float(im_part))
    return float(tok)


def _open_out(path_or_file) -> tuple[TextIO, bool]:
    if hasattr(path_or_file, "write"):
        return path_or_file, False
    return open(path_or_file, "w", encoding="utf-8"), True


def write_matrix_csv(path_or_file, a: np.ndarray) -> None:
    """Write a matrix or tensor in the shape-header vec-order format."""
    a = np.asarray(a)
    if not np.all(np.isfinite(np.abs(a))):
        raise ValueError("non-finite data")
    fh, owned = _open_out(path_or_file)
    try:
        fh.write("# shape: " + ",".join(str(n) for n in a.shape) + "\n")
        force = bool(np.iscomplexobj(a))
        for value in vec(a):
            fh.write(format_scalar(value, force_complex=force) + "\n")
    finally:
        if owned:
            fh.close()


def _read_text(path_or_file) -> str:
    if hasattr(path_or_file, "read"):
        return path_or_file.read()
    with open(path_or_file, "r", encoding="utf-8") as fh:
        return fh.read()


def read_matrix_csv(path_or_file) -> np.ndarray:
    """Read a matrix or tensor written by :func:`write_matrix_csv`."""
    text = _read_text(path_or_file)
    shape = None
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("shape:"):
                if shape is not None:
                    raise ValueError("duplicate shape header")
                shape = tuple(int(s) for s in body[len("shape:") :].split(",") if s.strip())
            continue
        tokens.extend(t for t in line.replace(",", " ").split() if t)
    if shape is None:
        raise ValueError("missing '# shape:' header")
    values = [parse_scalar(t) for t in tokens]
    if len(values) != int(np.prod(shape)):
        raise ValueError(f"expected {int(np.prod(shape))} values for shape {shape}, got {len(values)}")
    if any(isinstance(v, complex) for v in values):
        arr = np.array([complex(v) for v in values], dtype=np.complex128)
    else:
        arr = np.array(values, dtype=np.float64)
    return unvec(arr, shape)


def write_points_csv(path_or_file, points: np.ndarray, label: str | None = None) -> None:
    """Write a point cloud, one x,y[,z] row per point."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be 2-D")
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite data")
    fh, owned = _open_out(path_or_file)
    try:
        if label is not None:
            fh.write(f"# label: {label}\n")
        for row in pts:
            fh.write(",".join(format_float(x) for x in row) + "\n")
    finally:
        if owned:
            fh.close()


def read_points_csv(path_or_file) -> tuple[np.ndarray, str | None]:
    """Read a point cloud; returns (points, label-or-None)."""
    text = _read_text(path_or_file)
    label = None
    rows = []
    width = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("label:"):
                label = body[len("label:") :].strip()
            continue
        parts = [p for p in line.split(",") if p.strip()]
        if width is None:
            width = len(parts)
            if width not in (2, 3):
                raise ValueError(f"points must have 2 or 3 coordinates, got {width}")
        elif len(parts) != width:
            raise ValueError("ragged point rows")
        rows.append([float(p) for p in parts])
    if not rows:
        raise ValueError("no points in file")
    return np.array(rows, dtype=float), label


def write_svg_scatter(path_or_file, points: np.ndarray, size: int = 512, radius: float = 2.0) -> None:
    """Render a fixed-size SVG scatter of 2-D points with a 5% margin."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("svg scatter expects (n, 2) points")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    margin = 0.05 * size
    scale = (size - 2 * margin) / span.max()
    offset = margin + 0.5 * ((size - 2 * margin) - scale * span)

    fh, owned = _open_out(path_or_file)
    try:
        fh.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">\n'
        )
        fh.write(f'<rect width="{size}" height="{size}" fill="white"/>\n')
        for x, y in pts:
            cx = offset[0] + scale * (x - lo[0])
            # SVG y axis points down.
            cy = size - (offset[1] + scale * (y - lo[1]))
            fh.write(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius}" fill="black"/>\n')
        fh.write("</svg>\n")
    finally:
        if owned:
            fh.close()


def array_payload(a: np.ndarray) -> dict:
    """JSON payload for an array: shape plus vec-order values."""
    a = np.asarray(a)
    if np.iscomplexobj(a):
        values: list = [format_scalar(z, force_complex=True) for z in vec(a)]
    else:
        values = [float(x) for x in vec(a)]
    return {"shape": [int(n) for n in a.shape], "values": values}


def to_jsonable(obj):
    """Recursively convert numpy containers for deterministic JSON encoding."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return array_payload(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return format_scalar(complex(obj), force_complex=True)
    return obj


def dump_json(payload: dict, fh: TextIO | None = None) -> str:
    """Deterministic JSON encoding (sorted keys, no timestamps)."""
    text = json.dumps(to_jsonable(payload), sort_keys=True, indent=2)
    if fh is not None:
        fh.write(text + "\n")
    return text
