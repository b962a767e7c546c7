"""Deterministic CSV emission for plot data."""

import csv
import math
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from .logging import logger

FLOAT_FORMAT = ".17g"


def format_value(value: Any) -> str:
    """Format one cell. Floats use 17 significant digits so they re-parse bit-exactly."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return format(number, FLOAT_FORMAT)
    return str(value)


def emit_plot_data(
    series: Mapping[str, Sequence[Any] | np.ndarray],
    path: Path,
    *,
    header_comment: str | None = None,
) -> Path:
    """Write column series to CSV with a header row and LF line endings.

    Args:
        series: Ordered mapping of column name to equally long column values
        path: Destination file
        header_comment: Optional text written as a leading ``# ...`` line

    Returns:
        The written path

    Raises:
        ValueError: If the series is empty or columns differ in length
        OSError: If the file cannot be written
    """
    if not series:
        raise ValueError("Cannot emit an empty series")

    columns = list(series.keys())
    lengths = {name: len(series[name]) for name in columns}
    n_rows = lengths[columns[0]]
    if n_rows == 0:
        raise ValueError("Cannot emit a series without rows")
    if any(length != n_rows for length in lengths.values()):
        raise ValueError(f"Column lengths differ: {lengths}")

    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        if header_comment:
            handle.write(f"# {header_comment}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for i in range(n_rows):
            writer.writerow([format_value(series[name][i]) for name in columns])

    logger.debug(f"Wrote {n_rows} rows x {len(columns)} columns to {path}")
    return path


def read_plot_data(path: Path) -> dict[str, list[str]]:
    """Read a CSV written by :func:`emit_plot_data`, skipping comment lines."""
    with path.open(encoding="utf-8", newline="") as handle:
        lines = [line for line in handle if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    columns: dict[str, list[str]] = {name: [] for name in header}
    for row in reader:
        for name, cell in zip(header, row, strict=True):
            columns[name].append(cell)
    return columns
