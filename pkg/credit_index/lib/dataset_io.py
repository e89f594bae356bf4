#!/usr/bin/env python3
"""
Dataset I/O
===========

CSV ingestion of ratio datasets, CSV emission of scored records and the YAML
model artifact (discriminant weights + per-industry P3 fits).

Every file is written atomically: a temporary file in the target directory is
renamed over the destination.
"""

import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd
import yaml

from . import console
from .discriminant import DiscriminantModel
from .errors import ConfigurationError, DataIOError, DimensionError, DomainError, ParseError, SchemaError
from .pearson3 import P3Params
from .pipeline import ScoredRecord
from .schema_validator import DATASET_SCHEMA, MODEL_SCHEMA, get_validator
from .transform import RatingGrade, RatioRecord

DEFAULT_RATIO_COLUMNS = ("WC_TA", "RE_TA", "EBIT_TA", "MVE_BVTD", "S_TA")
ARTIFACT_VERSION = 1
DECIMALS = 6

PathLike = Union[str, Path]


@dataclass(frozen=True)
class DatasetSchema:
    """Column layout of a ratio CSV file."""
    ratio_columns: Tuple[str, ...] = DEFAULT_RATIO_COLUMNS
    industry_column: str = "industry"
    year_column: str = "year"
    rating_column: str = "rating"
    delimiter: str = ","

    def __post_init__(self):
        object.__setattr__(self, "ratio_columns", tuple(str(c) for c in self.ratio_columns))
        if not self.ratio_columns:
            raise ConfigurationError("Dataset schema needs at least one ratio column")
        if len(set(self.ratio_columns)) != len(self.ratio_columns):
            raise ConfigurationError(f"Duplicate ratio columns in {list(self.ratio_columns)}")
        labels = (self.industry_column, self.year_column, self.rating_column)
        if len(set(labels)) != 3:
            raise ConfigurationError(f"Label columns must be distinct, got {list(labels)}")
        overlap = set(self.ratio_columns) & set(labels)
        if overlap:
            raise ConfigurationError(f"Ratio columns overlap label columns: {sorted(overlap)}")
        if len(self.delimiter) != 1:
            raise ConfigurationError(f"Delimiter must be a single character, got {self.delimiter!r}")

    @property
    def t(self) -> int:
        return len(self.ratio_columns)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ratio_columns": list(self.ratio_columns),
            "industry_column": self.industry_column,
            "year_column": self.year_column,
            "rating_column": self.rating_column,
            "delimiter": self.delimiter,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DatasetSchema":
        get_validator().validate_and_raise(dict(data), DATASET_SCHEMA)
        defaults = cls()
        return cls(
            ratio_columns=tuple(data.get("ratio_columns", defaults.ratio_columns)),
            industry_column=data.get("industry_column", defaults.industry_column),
            year_column=data.get("year_column", defaults.year_column),
            rating_column=data.get("rating_column", defaults.rating_column),
            delimiter=data.get("delimiter", defaults.delimiter),
        )


def atomic_write_text(path: PathLike, text: str):
    """Write text to path through a temporary file and os.replace."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    except OSError as e:
        raise DataIOError(f"Cannot write {path}: {e.strerror or e}") from None


# --- ingest ----------------------------------------------------------------

def _parse_float(cell: str, row: int, column: str) -> float:
    try:
        value = float(cell)
    except (TypeError, ValueError):
        raise ParseError(f"Cannot parse '{cell}' as a number", row=row, column=column) from None
    if not math.isfinite(value):
        raise DomainError(f"Non-finite ratio value {cell}", row=row, column=column)
    return value


def _parse_int(cell: str, row: int, column: str) -> int:
    try:
        value = float(cell)
    except (TypeError, ValueError):
        raise ParseError(f"Cannot parse '{cell}' as an integer", row=row, column=column) from None
    if not math.isfinite(value) or value != int(value):
        raise ParseError(f"Cannot parse '{cell}' as an integer", row=row, column=column)
    return int(value)


def _parse_grade(cell: str, row: int) -> Optional[RatingGrade]:
    if cell is None or str(cell).strip() == "":
        return None
    try:
        return RatingGrade.parse(cell)
    except ValueError as e:
        raise type(e)(f"{e} (row {row})") from None


def ingest(path: PathLike, schema: Optional[DatasetSchema] = None) -> List[RatioRecord]:
    """
    Read a ratio CSV into records.

    Row numbers count data rows from 1 (the header is row 0). The rating
    column is optional; empty rating cells yield ungraded records.

    Raises:
        DataIOError: file missing or unreadable
        SchemaError: a required column is missing, or the file is not valid UTF-8
        ParseError: a cell cannot be parsed
        EnumerationError: unknown grade string
    """
    schema = schema or DatasetSchema()
    path = Path(path)
    try:
        frame = pd.read_csv(path, sep=schema.delimiter, dtype=str, keep_default_na=False,
                            skipinitialspace=True, encoding="utf-8")
    except FileNotFoundError:
        raise DataIOError(f"Input file not found: {path}") from None
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path} has no header row") from None
    except UnicodeDecodeError as e:
        raise SchemaError(f"{path} is not valid UTF-8: {e.reason} at byte {e.start}") from None
    except OSError as e:
        raise DataIOError(f"Cannot read {path}: {e.strerror or e}") from None
    except pd.errors.ParserError as e:
        raise SchemaError(f"{path} is not a well-formed CSV file: {e}") from None

    frame.columns = [str(c).strip() for c in frame.columns]
    required = list(schema.ratio_columns) + [schema.industry_column, schema.year_column]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise SchemaError(f"{path} is missing column(s): {', '.join(missing)}")
    has_rating = schema.rating_column in frame.columns

    records = []
    for offset, values in enumerate(frame.to_dict("records")):
        row_number = offset + 1
        ratios = tuple(_parse_float(values[c], row_number, c) for c in schema.ratio_columns)
        records.append(RatioRecord(
            ratios=ratios,
            industry=_parse_int(values[schema.industry_column], row_number, schema.industry_column),
            year=_parse_int(values[schema.year_column], row_number, schema.year_column),
            grade=_parse_grade(values[schema.rating_column], row_number) if has_rating else None,
            row=row_number,
        ))
    console.log("INGEST", f"Read {len(records)} records from {path}")
    return records


def records_to_frame(records: Sequence[RatioRecord], schema: Optional[DatasetSchema] = None) -> pd.DataFrame:
    """Input columns of records as a frame (grades as strings, empty when ungraded)."""
    schema = schema or DatasetSchema()
    rows = []
    for record in records:
        if record.t != schema.t:
            raise DimensionError(f"Record has {record.t} ratios, schema has {schema.t}")
        row = dict(zip(schema.ratio_columns, record.ratios))
        row[schema.industry_column] = record.industry
        row[schema.year_column] = record.year
        row[schema.rating_column] = record.grade.value if record.grade is not None else ""
        rows.append(row)
    columns = list(schema.ratio_columns) + [schema.industry_column, schema.year_column, schema.rating_column]
    return pd.DataFrame(rows, columns=columns)


def write_dataset(records: Sequence[RatioRecord], path: PathLike, schema: Optional[DatasetSchema] = None):
    schema = schema or DatasetSchema()
    frame = records_to_frame(records, schema)
    atomic_write_text(path, frame.to_csv(index=False, sep=schema.delimiter, float_format=f"%.{DECIMALS}f",
                                         lineterminator="\n"))
    console.log("WRITE", f"Wrote {len(frame)} records to {path}")


def emit_scored(records: Sequence[ScoredRecord], path: PathLike, schema: Optional[DatasetSchema] = None):
    """
    Write scored records: input columns plus z_m, v, h, grade, b_predicted
    (and z_a, z_u, zone for five-ratio data). Reals use 6 decimals.
    """
    if not records:
        raise SchemaError("No scored records to write")
    schema = schema or DatasetSchema()
    frame = records_to_frame([r.input for r in records], schema)
    frame["z_m"] = [r.z_m for r in records]
    frame["v"] = [r.v for r in records]
    frame["h"] = [r.h for r in records]
    frame["grade"] = [r.grade.value for r in records]
    frame["b_predicted"] = [r.b_predicted for r in records]
    if all(r.z_a is not None for r in records):
        frame["z_a"] = [r.z_a for r in records]
        frame["z_u"] = [r.z_u for r in records]
        frame["zone"] = [r.zone.value for r in records]
    atomic_write_text(path, frame.to_csv(index=False, sep=schema.delimiter, float_format=f"%.{DECIMALS}f",
                                         lineterminator="\n"))
    console.log("WRITE", f"Wrote {len(frame)} scored records to {path}")


# --- model artifact --------------------------------------------------------

def model_to_document(model: DiscriminantModel, fits: Mapping[int, P3Params],
                      ratio_columns: Sequence[str]) -> Dict[str, Any]:
    if len(ratio_columns) != model.t:
        raise DimensionError(f"Model has {model.t} weights but {len(ratio_columns)} ratio columns")
    return {
        "format_version": ARTIFACT_VERSION,
        "t": model.t,
        "ratio_columns": list(ratio_columns),
        "normalization": model.normalization,
        "weights": list(model.weights),
        "mean_solvent": None if model.mean_solvent is None else list(model.mean_solvent),
        "mean_bankrupt": None if model.mean_bankrupt is None else list(model.mean_bankrupt),
        "cutoff": model.cutoff,
        "n_solvent": model.n_solvent,
        "n_bankrupt": model.n_bankrupt,
        "fits": {int(industry): params.to_dict() for industry, params in sorted(fits.items())},
    }


def save_model(path: PathLike, model: DiscriminantModel, fits: Mapping[int, P3Params],
               ratio_columns: Sequence[str]):
    document = model_to_document(model, fits, ratio_columns)
    get_validator().validate_and_raise(_json_keys(document), MODEL_SCHEMA)
    atomic_write_text(path, yaml.safe_dump(document, sort_keys=False, default_flow_style=False))
    console.log("WRITE", f"Model artifact written to {path}")


def _json_keys(document: Dict[str, Any]) -> Dict[str, Any]:
    """Copy with industry keys as strings, the form JSON schemas describe."""
    copy = dict(document)
    copy["fits"] = {str(k): v for k, v in document.get("fits", {}).items()}
    return copy


def load_model(path: PathLike) -> Tuple[DiscriminantModel, Dict[int, P3Params], Tuple[str, ...]]:
    """
    Read a model artifact.

    Returns:
        (discriminant model, fits by industry, ratio column names)

    Raises:
        DataIOError: file missing or unreadable
        ConfigurationError: malformed artifact
    """
    path = Path(path)
    try:
        document = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataIOError(f"Model artifact not found: {path}") from None
    except OSError as e:
        raise DataIOError(f"Cannot read {path}: {e.strerror or e}") from None
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Model artifact {path} is not valid YAML: {e}") from None
    if not isinstance(document, dict):
        raise ConfigurationError(f"Model artifact {path} must be a mapping")

    get_validator().validate_and_raise(_json_keys(document), MODEL_SCHEMA)
    model = DiscriminantModel.from_dict(document)
    fits = {int(industry): P3Params.from_dict(params) for industry, params in document["fits"].items()}
    columns = tuple(document["ratio_columns"])
    if len(columns) != model.t:
        raise ConfigurationError(f"Model artifact lists {len(columns)} columns for t={model.t}")
    console.log("INGEST", f"Loaded model artifact with {len(fits)} industry fits from {path}")
    return model, fits, columns
