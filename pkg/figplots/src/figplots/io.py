"""Schema-validating readers for the simulator's CSV outputs."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Input CSV does not match the documented schema."""


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    with path.open(newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row") from None
        rows = [row for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows after the header")
    return header, rows


def _parse_cell(token: str, path: Path) -> float:
    try:
        return float(token)  # the "nan" sentinel parses to float('nan')
    except ValueError:
        raise SchemaError(f"{path}: non-numeric cell {token!r}") from None


def read_table(path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Read a column-oriented CSV; raise SchemaError naming any missing column.

    Returns a dict of float arrays keyed by header name, all columns included.
    """
    path = Path(path)
    header, rows = _read_rows(path)
    for name in required:
        if name not in header:
            raise SchemaError(
                f"{path}: missing required column {name!r} (found {header})"
            )
    data = np.array([[_parse_cell(tok, path) for tok in row] for row in rows])
    if data.shape[1] != len(header):
        raise SchemaError(f"{path}: row width does not match header width")
    return {name: data[:, j] for j, name in enumerate(header)}


def read_heatmap(path) -> tuple[np.ndarray, np.ndarray, np.ma.MaskedArray]:
    """Read a sweep CSV (first column dtheta, remaining columns one per dphi).

    Returns (dphi_axis, dtheta_axis, values) with "nan" cells masked.
    """
    path = Path(path)
    header, rows = _read_rows(path)
    if not header or header[0] != "dtheta":
        raise SchemaError(
            f"{path}: missing required column 'dtheta' (found {header[:1] or 'nothing'})"
        )
    if len(header) < 2:
        raise SchemaError(f"{path}: sweep file has no dphi columns")
    dphi = np.array([_parse_cell(tok, path) for tok in header[1:]])
    dtheta = np.array([_parse_cell(row[0], path) for row in rows])
    values = np.array([[_parse_cell(tok, path) for tok in row[1:]] for row in rows])
    if values.shape != (dtheta.size, dphi.size):
        raise SchemaError(f"{path}: ragged sweep matrix")
    return dphi, dtheta, np.ma.masked_invalid(values)
