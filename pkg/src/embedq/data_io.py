"""Synthetic benchmark datasets and CSV ingestion.

Generators are pure functions of (n, noise, seed); floats are written with
17 significant digits so CSV round-trips are bit-exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .takens import TimeSeries

DATASET_KINDS = ("s-curve", "swiss-roll", "csv-series", "csv-matrix")


class CsvFormatError(ValueError):
    """A CSV file violates the expected layout (with the offending row)."""


@dataclass(frozen=True)
class DatasetSpec:
    """Description of a dataset: a generator or a CSV source."""

    kind: str
    n: int = 2000
    noise: float = 0.0
    seed: int = 0
    path: str | None = None
    column: str | int | None = None
    log_transform: bool = False

    def __post_init__(self) -> None:
        if self.kind not in DATASET_KINDS:
            raise ValueError(f"unknown dataset kind {self.kind!r}; expected one of {DATASET_KINDS}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not np.isfinite(self.noise) or self.noise < 0:
            raise ValueError(f"noise must be finite and nonnegative, got {self.noise}")
        if self.kind.startswith("csv") and not self.path:
            raise ValueError(f"dataset kind {self.kind!r} requires a path")


def s_curve(n: int, noise: float = 0.0, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """The S-curve benchmark: n points on (sin t, u, sign(t)(cos t - 1)).

    t is uniform on [-3pi/2, 3pi/2], the height u uniform on [0, 2];
    isotropic Gaussian noise of the given scale is added on top.  Returns
    the (n, 3) points and the (n, 2) ground-truth parameters (t, u).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if noise < 0:
        raise ValueError(f"noise must be nonnegative, got {noise}")
    rng = np.random.default_rng(seed)
    t = rng.uniform(-1.5 * np.pi, 1.5 * np.pi, size=n)
    u = rng.uniform(0.0, 2.0, size=n)
    points = np.column_stack([np.sin(t), u, np.sign(t) * (np.cos(t) - 1.0)])
    if noise > 0:
        points = points + noise * rng.standard_normal((n, 3))
    return points, np.column_stack([t, u])


def swiss_roll(n: int, noise: float = 0.0, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """The swiss-roll benchmark: (t cos t, u, t sin t) with t on
    [3pi/2, 9pi/2] and height u on [0, 21]."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if noise < 0:
        raise ValueError(f"noise must be nonnegative, got {noise}")
    rng = np.random.default_rng(seed)
    t = 1.5 * np.pi * (1.0 + 2.0 * rng.uniform(size=n))
    u = rng.uniform(0.0, 21.0, size=n)
    points = np.column_stack([t * np.cos(t), u, t * np.sin(t)])
    if noise > 0:
        points = points + noise * rng.standard_normal((n, 3))
    return points, np.column_stack([t, u])


def _read_rows(path) -> list[list[str]]:
    p = Path(path)
    if not p.exists():
        raise CsvFormatError(f"{p}: file not found")
    with p.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)]
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise CsvFormatError(f"{p}: file is empty")
    return rows


def _is_numeric_row(row: list[str]) -> bool:
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return False
    return True


def load_series_csv(path, column: str | int | None = None, header: str = "auto") -> TimeSeries:
    """Load one column of a CSV file as a time series, in file order.

    ``column`` is a name (requires a header row) or a 0-based index;
    ``header`` is one of ``auto`` (detect a non-numeric first row),
    ``present`` or ``absent``.  Blank or non-numeric cells raise
    :class:`CsvFormatError` naming the offending file row.
    """
    if header not in ("auto", "present", "absent"):
        raise ValueError(f"header must be 'auto', 'present' or 'absent', got {header!r}")
    rows = _read_rows(path)
    has_header = header == "present" or (header == "auto" and not _is_numeric_row(rows[0]))
    names = rows[0] if has_header else None
    data_rows = rows[1:] if has_header else rows
    first_line = 2 if has_header else 1
    if not data_rows:
        raise CsvFormatError(f"{path}: no data rows")

    if column is None:
        col = 0
    elif isinstance(column, int) or (isinstance(column, str) and column.lstrip("-").isdigit()):
        col = int(column)
    else:
        if names is None:
            raise CsvFormatError(f"{path}: column {column!r} requested but the file has no header row")
        stripped = [c.strip() for c in names]
        if column not in stripped:
            raise CsvFormatError(f"{path}: column {column!r} not found; available: {stripped}")
        col = stripped.index(column)

    values = np.empty(len(data_rows))
    for i, row in enumerate(data_rows):
        line = first_line + i
        if col >= len(row):
            raise CsvFormatError(f"{path}: row {line} has {len(row)} cells, column {col} is missing")
        cell = row[col].strip()
        if not cell:
            raise CsvFormatError(f"{path}: row {line} has a blank cell in column {col}")
        try:
            values[i] = float(cell)
        except ValueError:
            raise CsvFormatError(f"{path}: row {line} has a non-numeric cell {cell!r} in column {col}") from None
    label = names[col].strip() if names is not None else Path(path).stem
    return TimeSeries(values=values, label=label)


def load_matrix_csv(path) -> np.ndarray:
    """Load a rectangular numeric CSV as an (n, d) matrix, rows as points.

    A single non-numeric first row is skipped as a header; ragged or
    non-numeric data rows raise :class:`CsvFormatError` with the row number.
    """
    rows = _read_rows(path)
    has_header = not _is_numeric_row(rows[0])
    data_rows = rows[1:] if has_header else rows
    first_line = 2 if has_header else 1
    if not data_rows:
        raise CsvFormatError(f"{path}: no data rows")
    width = len(data_rows[0])
    out = np.empty((len(data_rows), width))
    for i, row in enumerate(data_rows):
        line = first_line + i
        if len(row) != width:
            raise CsvFormatError(f"{path}: row {line} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if not cell:
                raise CsvFormatError(f"{path}: row {line} has a blank cell in column {j}")
            try:
                out[i, j] = float(cell)
            except ValueError:
                raise CsvFormatError(f"{path}: row {line} has a non-numeric cell {cell!r} in column {j}") from None
    return out


def format_float(x: float) -> str:
    """17-significant-digit rendering; round-trips float64 exactly."""
    return format(x, ".17g")


def write_matrix_csv(path, matrix, header: list[str] | None = None) -> None:
    """Write an (n, d) matrix with bit-exact float formatting."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header is not None:
            writer.writerow(header)
        for row in m:
            writer.writerow([format_float(v) for v in row])
