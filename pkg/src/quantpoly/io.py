"""CSV and JSON readers/writers for samples, curves, matrices and models."""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .exceptions import ParameterError


class DataFormatError(ParameterError):
    """A CSV input could not be parsed; carries the 1-based row and column."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


def _fmt(v):
    v = float(v)
    return "" if not math.isfinite(v) else repr(v)


def read_sample_csv(path):
    """Read one numeric value per line; a non-numeric first row is a header.

    Only the first column is used if a row has several.
    """
    values = []
    with open(path, newline="") as fh:
        for rownum, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            cell = row[0].strip()
            try:
                v = float(cell)
            except ValueError:
                if rownum == 1:
                    continue
                raise DataFormatError(
                    f"{path}: row {rownum}, column 1: non-numeric value {cell!r}",
                    rownum, 1) from None
            if not math.isfinite(v):
                raise DataFormatError(
                    f"{path}: row {rownum}, column 1: non-finite value {cell!r}",
                    rownum, 1)
            values.append(v)
    return np.asarray(values, dtype=np.float64)


def write_sample_csv(path, sample, header="x"):
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for v in sample:
            fh.write(_fmt(v) + "\n")


def write_columns_csv(path, columns):
    """Write ``columns`` (an ordered mapping name -> 1-D array) as CSV."""
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=np.float64) for n in names]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*arrays):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_curve_csv(path, x, pdf, cdf):
    write_columns_csv(path, {"x": x, "pdf": pdf, "cdf": cdf})


def matrix_csv(matrix, nb_list, nm_list):
    """Rows ``N_B``, columns ``N_M``; flagged (NaN) cells are left blank."""
    matrix = np.asarray(matrix, dtype=np.float64)
    lines = ["N_B," + ",".join(f"N_M={m}" for m in nm_list)]
    for nb, row in zip(nb_list, matrix):
        lines.append(f"{nb}," + ",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_matrix_csv(path, matrix, nb_list, nm_list):
    with open(path, "w", newline="") as fh:
        fh.write(matrix_csv(matrix, nb_list, nm_list))


def read_matrix_csv(path):
    """Inverse of :func:`write_matrix_csv`: ``(matrix, nb_list, nm_list)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    nm_list = [int(h.split("=", 1)[1]) for h in rows[0][1:]]
    nb_list = [int(r[0]) for r in rows[1:]]
    matrix = np.array([[float(v) if v else np.nan for v in r[1:]] for r in rows[1:]])
    return matrix, nb_list, nm_list


def jsonable(obj):
    """Replace non-finite floats by ``None`` and numpy scalars by Python ones."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dump_json(obj, path=None):
    text = json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
