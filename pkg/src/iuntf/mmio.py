"""Matrix Market coordinate files plus a JSON sidecar for frame metadata.

Values are written with Python's shortest round-trip float repr, so
write -> read -> write reproduces the file byte for byte.  Entries are
listed column by column, rows ascending within a column.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FrameIOError, ParseError
from .frame import StructuredFrame
from .finite_field import field_of_order

SIDECAR_FORMAT = "iuntf-frame"

CONVENTIONS = {
    "element_order": "GF(p^e) element index = base-p coefficient vector, c_0 least significant; f_1 = 0",
    "evaluation_points": "first k elements f_1..f_k",
    "polynomial_order": "coefficient vectors (c_1..c_r) lexicographic, c_1 most significant",
    "basis_order": "polynomial tuples (P_1..P_t) lexicographic, first factor slowest",
    "composition": "block position u_i*n_B + w_i (0-based), left operand column slowest",
    "column_order": "within a basis: skeleton column j slowest, unitary column l fastest",
    "row_assignment": "the 1 in block i is replaced by row i of U",
    "indices": "Matrix Market rows/columns are 1-based",
}


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_matrix_market(path, rows, cols, values, shape, comment: str | None = None) -> None:
    """Write a coordinate file.  ``rows``/``cols`` are 0-based."""
    values = np.asarray(values)
    is_complex = np.iscomplexobj(values) and np.any(values.imag)
    field = "complex" if is_complex else "real"
    lines = [f"%%MatrixMarket matrix coordinate {field} general"]
    if comment:
        lines.extend(f"% {line}" for line in comment.splitlines())
    lines.append(f"{shape[0]} {shape[1]} {len(values)}")
    if is_complex:
        for i, j, v in zip(rows, cols, values):
            lines.append(f"{i + 1} {j + 1} {_fmt(v.real)} {_fmt(v.imag)}")
    else:
        for i, j, v in zip(rows, cols, np.real(values)):
            lines.append(f"{i + 1} {j + 1} {_fmt(v)}")
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise FrameIOError(f"cannot write {path}: {exc}") from exc


def read_matrix_market(path):
    """Return ``(shape, rows, cols, values)`` with 0-based indices."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FrameIOError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise ParseError(f"{path}: missing %%MatrixMarket header")
    header = lines[0].split()
    if len(header) != 5 or header[1].lower() != "matrix" or header[2].lower() != "coordinate":
        raise ParseError(f"{path}: only 'matrix coordinate' files are supported")
    field, symmetry = header[3].lower(), header[4].lower()
    if field not in ("real", "complex", "integer") or symmetry != "general":
        raise ParseError(f"{path}: unsupported field/symmetry {field}/{symmetry}")
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError(f"{path}: missing size line")
    try:
        nr, nc, nnz = (int(t) for t in body[0].split())
        width = 4 if field == "complex" else 3
        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        values = np.empty(nnz, dtype=np.complex128 if field == "complex" else np.float64)
        if len(body) - 1 != nnz:
            raise ParseError(f"{path}: expected {nnz} entries, found {len(body) - 1}")
        for n, ln in enumerate(body[1:]):
            tok = ln.split()
            if len(tok) != width:
                raise ParseError(f"{path}: malformed entry line {ln!r}")
            rows[n] = int(tok[0]) - 1
            cols[n] = int(tok[1]) - 1
            values[n] = complex(float(tok[2]), float(tok[3])) if width == 4 else float(tok[2])
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if nnz and (rows.min() < 0 or rows.max() >= nr or cols.min() < 0 or cols.max() >= nc):
        raise ParseError(f"{path}: index out of range")
    return (nr, nc), rows, cols, values


def frame_sidecar(F: StructuredFrame) -> dict:
    meta = {"format": SIDECAR_FORMAT, "tool_version": __version__, "kind": "structured"}
    meta.update(F.metadata())
    meta["moduli"] = {
        str(q): list(field_of_order(q).modulus) for q in F.factors
    }
    meta["conventions"] = CONVENTIONS
    return meta


def save_frame(F: StructuredFrame, path) -> tuple[Path, Path]:
    """Write ``path`` (.mtx) and its JSON sidecar."""
    path = Path(path)
    cols = np.repeat(np.arange(F.n_columns), F.nnz_per_column)
    values = F.values.ravel()
    if F.is_real:
        values = values.real
    comment = f"iuntf {__version__}: m={F.m} k={F.k} r={F.r} unitary={F.unitary_kind}"
    write_matrix_market(path, F.rows.ravel(), cols, values, F.shape, comment)
    side = sidecar_path(path)
    _write_json(side, frame_sidecar(F))
    return path, side


def save_dense(A, path, meta: dict | None = None) -> tuple[Path, Path]:
    """Write a dense matrix (e.g. a Gaussian baseline) with all entries listed."""
    path = Path(path)
    A = np.asarray(A)
    nr, nc = A.shape
    rows = np.tile(np.arange(nr), nc)
    cols = np.repeat(np.arange(nc), nr)
    values = A.T.ravel()
    write_matrix_market(path, rows, cols, values, A.shape, f"iuntf {__version__}: dense")
    side = sidecar_path(path)
    payload = {"format": SIDECAR_FORMAT, "tool_version": __version__, "kind": "dense",
               "d": nr, "M": nc}
    payload.update(meta or {})
    _write_json(side, payload)
    return path, side


def _write_json(path, obj) -> None:
    try:
        Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise FrameIOError(f"cannot write {path}: {exc}") from exc


def read_sidecar(path) -> dict | None:
    side = sidecar_path(path)
    if not side.exists():
        return None
    try:
        meta = json.loads(side.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"bad sidecar {side}: {exc}") from exc
    if meta.get("format") != SIDECAR_FORMAT:
        raise ParseError(f"{side} is not an {SIDECAR_FORMAT} sidecar")
    return meta


def load_frame(path):
    """Load a frame file.

    Returns a :class:`StructuredFrame` when a structured sidecar is present,
    otherwise the dense matrix.
    """
    (nr, nc), rows, cols, values = read_matrix_market(path)
    meta = read_sidecar(path)
    if meta is None or meta.get("kind") != "structured":
        A = np.zeros((nr, nc), dtype=values.dtype)
        A[rows, cols] = values
        return A
    order = np.lexsort((rows, cols))
    rows, cols, values = rows[order], cols[order], values[order]
    k = meta["k"]
    if len(values) != k * nc or np.any(np.bincount(cols, minlength=nc) != k):
        raise ParseError(f"{path}: expected exactly {k} entries per column")
    return StructuredFrame(
        rows.reshape(nc, k),
        values.reshape(nc, k),
        d=nr,
        Q=meta["Q"],
        m=meta["m"],
        k=k,
        r=meta["r"],
        factors=tuple(meta.get("factors", ())),
        unitary_kind=meta.get("unitary", "custom"),
        alpha=meta.get("alpha", float("nan")),
    )
