"""Deterministic CSV output and gnuplot script stubs."""

from __future__ import annotations

import csv
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Floats with 17 significant digits; None as an empty cell."""
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def write_csv(path: Path | str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    Write a header plus one line per row.

    Rows are written in the order given; lines end in '\\n' on every platform.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    count = 0
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"Row has {len(row)} cells, header has {len(columns)}")
            writer.writerow([format_value(v) for v in row])
            count += 1

    logger.info(f"Wrote {count} rows to {path}")
    return path


def write_gnuplot_stub(csv_path: Path | str, x_column: str, y_columns: Sequence[str], log_x: bool = False) -> Path:
    """
    Write <csv>.gp plotting y_columns against x_column from the CSV.
    """
    csv_path = Path(csv_path)
    with open(csv_path) as f:
        header = f.readline().strip().split(",")

    def index(name: str) -> int:
        return header.index(name) + 1

    plots = ", \\\n     ".join(
        f"'{csv_path.name}' using {index(x_column)}:{index(y)} with linespoints title '{y}'"
        for y in y_columns
    )
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{x_column}'",
        "set ylabel 'normalized rate'",
    ]
    if log_x:
        lines.append("set logscale x")
    lines.append(f"plot {plots}")

    script = csv_path.with_suffix(".gp")
    script.write_text("\n".join(lines) + "\n")
    logger.info(f"Wrote gnuplot stub {script}")
    return script
