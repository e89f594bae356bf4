#!/usr/bin/env python3
"""
Run Configuration
=================

Loads run settings, threshold tables and dataset schemas from YAML. A config
file is either pure YAML (.yaml, .yml) or an MD file with YAML frontmatter;
the MD body is kept as free-text notes.

Relative paths inside a config file are resolved against the file's folder.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from . import console
from .dataset_io import DatasetSchema, atomic_write_text
from .errors import ConfigurationError, DataIOError
from .pearson3 import ThresholdTable
from .schema_validator import THRESHOLDS_SCHEMA, get_validator

MODES = ("fit", "score", "evaluate", "sweep", "toy", "synthesize")

PathLike = Union[str, Path]


def load_document(path: PathLike) -> Tuple[Dict[str, Any], str]:
    """
    Load a YAML document or the YAML frontmatter of an MD file.

    Returns:
        (mapping, notes) where notes is the MD body ("" for YAML files)

    Raises:
        DataIOError: file missing or unreadable
        ConfigurationError: invalid YAML, missing frontmatter, not a mapping
    """
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataIOError(f"Config file not found: {path}") from None
    except OSError as e:
        raise DataIOError(f"Cannot read {path}: {e.strerror or e}") from None

    notes = ""
    try:
        if path.suffix == ".md":
            if not content.startswith("---"):
                raise ConfigurationError(f"{path}: MD config must start with YAML frontmatter (---)")
            parts = content.split("---", 2)
            if len(parts) < 3:
                raise ConfigurationError(f"{path}: frontmatter is not closed with ---")
            document = yaml.safe_load(parts[1])
            notes = parts[2].strip()
        else:
            document = yaml.safe_load(content)
    except yaml.YAMLError as e:
        raise ConfigurationError(f"{path} is not valid YAML: {e}") from None

    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigurationError(f"{path} must hold a mapping at the top level")
    return document, notes


def thresholds_from_document(document: Dict[str, Any], source: str = "<document>") -> List[ThresholdTable]:
    """A single table, or {variants: [table, ...]}, validated against the thresholds schema."""
    get_validator().validate_and_raise(_json_ready(document), THRESHOLDS_SCHEMA)
    entries = document["variants"] if "variants" in document else [document]
    tables = [ThresholdTable.from_dict(entry) for entry in entries]
    names = [t.name for t in tables]
    if len(set(names)) != len(names):
        raise ConfigurationError(f"{source}: threshold variant names must be unique, got {names}")
    return tables


def _json_ready(document: Any) -> Any:
    """Replace +inf cutoffs by null, the schema's encoding of an open upper bound."""
    if isinstance(document, dict):
        return {k: _json_ready(v) for k, v in document.items()}
    if isinstance(document, list):
        return [_json_ready(v) for v in document]
    if isinstance(document, float) and document == float("inf"):
        return None
    return document


def load_thresholds(path: PathLike) -> List[ThresholdTable]:
    document, _ = load_document(path)
    tables = thresholds_from_document(document, str(path))
    console.log("CONFIG", f"Loaded {len(tables)} threshold table(s) from {path}")
    return tables


def load_dataset_schema(path: PathLike) -> DatasetSchema:
    document, _ = load_document(path)
    return DatasetSchema.from_dict(document)


@dataclass
class RunConfig:
    """Settings of one CLI run; command-line flags override file values."""
    mode: str = "toy"
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    model_path: Optional[Path] = None
    report_path: Optional[Path] = None
    thresholds: List[ThresholdTable] = field(default_factory=list)
    schema: DatasetSchema = field(default_factory=DatasetSchema)
    seed: int = 0
    holdout_fraction: float = 0.7
    workers: int = 1
    quiet: bool = False
    notes: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"Unknown mode '{self.mode}'; expected one of {', '.join(MODES)}")
        if not 0.0 < float(self.holdout_fraction) < 1.0:
            raise ConfigurationError(f"holdout_fraction must lie in (0, 1), got {self.holdout_fraction}")
        if int(self.workers) < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")
        for name in ("input_path", "output_path", "model_path", "report_path"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, Path(value))

    @property
    def active_thresholds(self) -> ThresholdTable:
        """First configured table, or the default scheme."""
        return self.thresholds[0] if self.thresholds else ThresholdTable.default()

    @classmethod
    def from_file(cls, path: PathLike, **overrides) -> "RunConfig":
        """
        Build a config from a YAML / MD file.

        Keys: mode, input, output, model, report, thresholds (path, list of
        paths, or inline table), schema (path or inline mapping), seed,
        holdout_fraction, workers, quiet. Overrides that are not None win.
        """
        path = Path(path)
        console.log("CONFIG", f"Loading from {path}")
        document, notes = load_document(path)
        base = path.parent

        def _path(key):
            value = document.get(key)
            return None if value is None else _resolve(base, value)

        values: Dict[str, Any] = {
            "mode": document.get("mode", "toy"),
            "input_path": _path("input"),
            "output_path": _path("output"),
            "model_path": _path("model"),
            "report_path": _path("report"),
            "thresholds": _thresholds_entry(document.get("thresholds"), base),
            "schema": _schema_entry(document.get("schema"), base),
            "seed": int(document.get("seed", 0)),
            "holdout_fraction": float(document.get("holdout_fraction", 0.7)),
            "workers": int(document.get("workers", 1)),
            "quiet": bool(document.get("quiet", False)),
            "notes": notes,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        def _str(p):
            return None if p is None else str(p)

        return {
            "mode": self.mode,
            "input": _str(self.input_path),
            "output": _str(self.output_path),
            "model": _str(self.model_path),
            "report": _str(self.report_path),
            "thresholds": [t.to_dict() for t in self.thresholds],
            "schema": self.schema.to_dict(),
            "seed": self.seed,
            "holdout_fraction": self.holdout_fraction,
            "workers": self.workers,
            "quiet": self.quiet,
        }

    def export(self, output_path: PathLike, format: str = "yaml"):
        """
        Write the effective configuration.

        Args:
            output_path: Where to save the config
            format: 'yaml' or 'md' (MD with YAML frontmatter)
        """
        config_dict = self.to_dict()
        body = yaml.safe_dump(config_dict, sort_keys=False, default_flow_style=False)
        if format == "md":
            notes = self.notes or f"Credit index run configuration ({self.mode} mode)."
            atomic_write_text(output_path, f"---\n{body}---\n\n{notes}\n")
        elif format == "yaml":
            atomic_write_text(output_path, body)
        else:
            raise ConfigurationError(f"Unknown export format '{format}'")
        console.log("WRITE", f"Config exported to {output_path}")


def _resolve(base: Path, value: Any) -> Path:
    p = Path(str(value))
    return p if p.is_absolute() else base / p


def _thresholds_entry(entry: Any, base: Path) -> List[ThresholdTable]:
    if entry is None:
        return []
    if isinstance(entry, dict):
        return thresholds_from_document(entry)
    if isinstance(entry, (str, Path)):
        return load_thresholds(_resolve(base, entry))
    if isinstance(entry, list):
        tables: List[ThresholdTable] = []
        for item in entry:
            tables.extend(_thresholds_entry(item, base))
        return tables
    raise ConfigurationError(f"Unsupported thresholds entry: {entry!r}")


def _schema_entry(entry: Any, base: Path) -> DatasetSchema:
    if entry is None:
        return DatasetSchema()
    if isinstance(entry, dict):
        return DatasetSchema.from_dict(entry)
    if isinstance(entry, (str, Path)):
        return load_dataset_schema(_resolve(base, entry))
    raise ConfigurationError(f"Unsupported schema entry: {entry!r}")
