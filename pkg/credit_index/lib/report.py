#!/usr/bin/env python3
"""
Run Reports
===========

Builds the standardized JSON report every CLI mode emits and writes it after
validating against schemas/report-schema.json.
"""

import json
import math
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import pandas as pd

from . import __version__, console
from .dataset_io import atomic_write_text
from .discriminant import DiscriminantModel
from .errors import DataIOError, SchemaError, ValidationFailure
from .lmom import LMomentSet
from .pearson3 import P3Params
from .schema_validator import REPORT_SCHEMA, get_validator

SCHEMA_VERSION = "1.0.0"
TOOL_NAME = "credit-index"


def jsonable(value: Any) -> Any:
    """Recursively convert to JSON types; non-finite floats become null."""
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, pd.DataFrame):
        return jsonable(value.to_dict(orient="index"))
    if hasattr(value, "to_dict"):
        return jsonable(value.to_dict())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def fits_section(fits: Mapping[int, P3Params],
                 lmoments: Optional[Mapping[int, LMomentSet]] = None) -> List[Dict[str, Any]]:
    """Per-industry P3 parameters (and L-moments when available), ordered by industry."""
    rows = []
    for industry in sorted(fits):
        row = {"industry": int(industry), **fits[industry].to_dict()}
        if lmoments and industry in lmoments:
            row["lmoments"] = lmoments[industry].to_dict()
        rows.append(row)
    return rows


def model_section(model: DiscriminantModel, ratio_columns: Optional[List[str]] = None) -> Dict[str, Any]:
    section = model.to_dict()
    if ratio_columns is not None:
        section["ratio_columns"] = list(ratio_columns)
    return section


def create_report(mode: str, results: Dict[str, Any], duration_ms: Optional[float] = None,
                  status: str = "success", issues: Optional[List[str]] = None,
                  warnings: Optional[List[str]] = None, info: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    Create the standardized report envelope.

    Args:
        mode: CLI mode that produced the results
        results: mode-specific result sections
        duration_ms: wall-clock duration of the run
        status: success, partial or failed
    """
    if not results:
        raise SchemaError("A report needs at least one result section")
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL_NAME, "version": __version__, "mode": mode},
        "execution": {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "status": status,
        },
        "results": jsonable(results),
        "findings": {
            "issues": list(issues or []),
            "warnings": list(warnings or []),
            "info": list(info or []),
        },
    }
    if duration_ms is not None:
        report["execution"]["duration_ms"] = round(float(duration_ms), 3)
    return report


def render_report(report: Dict[str, Any]) -> str:
    get_validator().validate_and_raise(report, REPORT_SCHEMA, error_type=ValidationFailure)
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def emit_report(report: Dict[str, Any], path: Union[str, Path]):
    """Validate and atomically write a report."""
    atomic_write_text(path, render_report(report))
    console.log("WRITE", f"Report written to {path}")


def load_report(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a report written by emit_report.

    Raises:
        DataIOError: file missing, unreadable or not JSON
    """
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise DataIOError(f"Report not found: {path}") from None
    except (OSError, UnicodeDecodeError) as e:
        raise DataIOError(f"Cannot read report {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise DataIOError(f"Report {path} is not valid JSON: {e.msg} at line {e.lineno}") from None
