"""Reading and writing complex matrices as JSON or CSV.

JSON layout::

    {"rows": m, "cols": m, "entries": [[re, im], ...]}   # row-major

CSV layout: one line per matrix row, columns alternate ``re, im``.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .exceptions import MatrixFormatError


def matrix_to_dict(A):
    A = np.asarray(A, dtype=np.complex128)
    rows, cols = A.shape
    entries = [[float(z.real), float(z.imag)] for z in A.ravel()]
    return {"rows": rows, "cols": cols, "entries": entries}


def matrix_from_dict(data):
    if not isinstance(data, dict):
        raise MatrixFormatError("matrix document must be a JSON object", field=None)
    for key in ("rows", "cols", "entries"):
        if key not in data:
            raise MatrixFormatError(f"missing field '{key}'", field=key)
    rows, cols = data["rows"], data["cols"]
    for key, val in (("rows", rows), ("cols", cols)):
        if not isinstance(val, int) or isinstance(val, bool) or val <= 0:
            raise MatrixFormatError(f"field '{key}' must be a positive integer", field=key)
    entries = data["entries"]
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise MatrixFormatError(
            f"field 'entries' must list rows*cols = {rows * cols} pairs", field="entries"
        )
    values = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(entries):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise MatrixFormatError(f"entries[{k}] must be a [re, im] pair", field=f"entries[{k}]")
        if not all(math.isfinite(x) for x in pair):
            raise MatrixFormatError(f"entries[{k}] is not finite", field=f"entries[{k}]")
        values[k] = complex(pair[0], pair[1])
    return values.reshape(rows, cols)


def matrix_to_csv(A):
    A = np.asarray(A, dtype=np.complex128)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in A:
        writer.writerow([repr(float(v)) for z in row for v in (z.real, z.imag)])
    return buf.getvalue()


def matrix_from_csv(text):
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise MatrixFormatError("CSV matrix is empty", field="rows")
    width = len(rows[0])
    if width % 2:
        raise MatrixFormatError("CSV rows need an even number of re,im columns", field="cols")
    out = np.empty((len(rows), width // 2), dtype=np.complex128)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise MatrixFormatError(f"CSV row {i} has {len(row)} columns, expected {width}", field=f"row[{i}]")
        try:
            vals = [float(x) for x in row]
        except ValueError as exc:
            raise MatrixFormatError(f"CSV row {i}: {exc}", field=f"row[{i}]") from exc
        if not all(math.isfinite(v) for v in vals):
            raise MatrixFormatError(f"CSV row {i} has non-finite values", field=f"row[{i}]")
        out[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    return out


def read_matrix(path):
    """Load a matrix from ``.json`` or ``.csv``; raises ``MatrixFormatError``."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return matrix_from_csv(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc})", field=None) from exc
    return matrix_from_dict(data)


def write_matrix(path, A):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(matrix_to_csv(A))
    else:
        path.write_text(json.dumps(matrix_to_dict(A)) + "\n")
