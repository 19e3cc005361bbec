"""
Writers for sweep tables (CSV, JSON) and line charts (SVG), plus schema detection for plot
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, Optional, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from errors import SchemaMismatchError  # noqa: E402
from models import ModelKind  # noqa: E402
from sweep import COLUMNS, OUTPUT_COLUMNS  # noqa: E402

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "geometric-phase-qpt"

DEFAULT_AXES: Dict[ModelKind, Tuple[str, str]] = {
    ModelKind.XY: ("lambda", "dbeta_dlambda"),
    ModelKind.DICKE: ("alpha", "beta_over_n"),
    ModelKind.LMG: ("h", "beta_g"),
    ModelKind.PROBE: ("lambda", "dbeta_dlambda"),
}


def to_csv_text(frame: pd.DataFrame) -> str:
    """Header plus rows, 17 significant digits, empty field for NaN"""
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def _json_value(column: str, value):
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if column == "n":
            return "inf" if math.isinf(value) else int(value)
    return value


def to_json_text(frame: pd.DataFrame) -> str:
    """List of row objects, keys sorted, NaN as null and the limit size as "inf" """
    records = [
        {column: _json_value(column, value) for column, value in row.items()}
        for row in frame.to_dict(orient="records")
    ]
    return json.dumps(records, sort_keys=True, indent=2) + "\n"


def detect_schema(frame: pd.DataFrame) -> ModelKind:
    """Model whose sweep columns match the table header exactly"""
    for model, columns in COLUMNS.items():
        if list(frame.columns) == columns:
            return model
    raise SchemaMismatchError(f"columns {list(frame.columns)} do not match any sweep output")


def read_sweep_csv(path: Path) -> Tuple[ModelKind, pd.DataFrame]:
    """Load a sweep CSV for plotting

    Raises:
        SchemaMismatchError: unknown header, or no data rows
    """
    path = Path(path)
    if not path.exists():
        raise SchemaMismatchError(f"CSV file not found: {path}")
    try:
        frame = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise SchemaMismatchError(f"{path} is empty")
    model = detect_schema(frame)
    if frame.empty:
        raise SchemaMismatchError(f"{path} has a header but no data rows")
    logger.info("Loaded %d %s rows from %s", len(frame), model.value, path)
    return model, frame


def _series_label(keys, names) -> str:
    if not isinstance(keys, tuple):
        keys = (keys,)
    parts = []
    for name, value in zip(names, keys):
        if name == "n":
            parts.append("N=inf" if math.isinf(value) else f"N={int(value)}")
        else:
            parts.append(f"{name}={value:g}")
    return ", ".join(parts)


def write_svg(frame: pd.DataFrame, path: Path, model: Optional[ModelKind] = None,
              y: Optional[str] = None) -> Path:
    """One line per series; series are the distinct values of every other input column"""
    model = model or detect_schema(frame)
    if frame.empty:
        raise SchemaMismatchError("no data rows to plot")
    x_column, y_column = DEFAULT_AXES[model]
    if y is not None:
        if y not in OUTPUT_COLUMNS[model]:
            raise SchemaMismatchError(f"'{y}' is not an output column of {model.value}: {OUTPUT_COLUMNS[model]}")
        y_column = y
    inputs = [column for column in COLUMNS[model] if column not in OUTPUT_COLUMNS[model]]
    group_columns = [column for column in inputs if column != x_column]

    plt.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    fig, ax = plt.subplots(figsize=(8, 5))
    if group_columns:
        for keys, group in frame.groupby(group_columns, sort=True):
            ax.plot(group[x_column], group[y_column], linewidth=1.2,
                    label=_series_label(keys, group_columns))
        ax.legend(fontsize=8)
    else:
        ax.plot(frame[x_column], frame[y_column], linewidth=1.2)
    ax.set_xlabel(x_column)
    ax.set_ylabel(y_column)
    ax.set_title(f"{model.value}: {y_column} vs {x_column}")
    ax.grid(True, alpha=0.3)

    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info("Chart saved: %s", path)
    return path
