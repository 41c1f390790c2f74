"""CSV and JSON output. Every file is written to a temporary sibling and renamed."""

import json
import logging
import os
import tempfile
from pathlib import Path
import numpy as np
import pandas as pd
from app import __version__
from app.interfaces import RunConfig
from app.models.reports import RunReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"


def run_metadata(config: RunConfig) -> dict[str, str]:
    return {
        "seed": str(config.seed),
        "units": config.unit_system,
        "command": config.command,
        "version": __version__,
    }


def _write_atomic(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    logger.info(f"Wrote {path}")
    return path


def to_frame(result) -> pd.DataFrame:
    """Tabular view of any emitted result."""
    if isinstance(result, pd.DataFrame):
        return result
    if isinstance(result, RunReport):
        return pd.DataFrame([check.model_dump() for check in result.checks])
    if hasattr(result, "to_frame"):
        return result.to_frame()
    raise TypeError(f"cannot tabulate {type(result).__name__}")


def _json_ready(value):
    if isinstance(value, float) and not np.isfinite(value):
        return None
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return _json_ready(value.item())
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    return value


def render_csv(result, metadata: dict[str, str]) -> str:
    header = "# " + " ".join(f"{key}={value}" for key, value in metadata.items())
    body = to_frame(result).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return header + "\n" + body


def render_json(result, metadata: dict[str, str]) -> str:
    if isinstance(result, RunReport):
        payload = result.model_dump(mode="json")
        payload["passed"] = result.passed
        payload["exit_code"] = int(result.exit_code)
        payload["max_residuals"] = result.max_residuals
    else:
        payload = {"records": to_frame(result).to_dict(orient="records")}
    return json.dumps({"metadata": metadata, **_json_ready(payload)}, indent=2) + "\n"


def emit(result, fmt: str, path: str | Path, metadata: dict[str, str]) -> Path:
    """Write a curve, estimate, trajectory, table or report as CSV or JSON."""
    if fmt == "csv":
        return _write_atomic(path, render_csv(result, metadata))
    if fmt == "json":
        return _write_atomic(path, render_json(result, metadata))
    raise ValueError(f"unknown format {fmt}")


def emit_config(config: RunConfig, path: str | Path) -> Path:
    """Write a RunConfig as JSON readable by parse_config(--config)."""
    return _write_atomic(path, config.model_dump_json(indent=2) + "\n")
