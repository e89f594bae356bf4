#!/usr/bin/env python3
"""
JSON Schema Validator
=====================

Validates run reports, model artifacts and configuration documents against
the JSON schemas shipped in ../schemas.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type

from jsonschema import Draft7Validator

from .errors import ConfigurationError, DataIOError, ValidationFailure

REPORT_SCHEMA = "report-schema.json"
MODEL_SCHEMA = "model-artifact-schema.json"
THRESHOLDS_SCHEMA = "thresholds-schema.json"
DATASET_SCHEMA = "dataset-schema.json"


class SchemaValidator:
    """Validates documents against JSON schemas."""

    def __init__(self, schemas_dir: Optional[Path] = None):
        """
        Initialize validator with schemas directory.

        Args:
            schemas_dir: Path to directory containing JSON schemas
        """
        if schemas_dir is None:
            schemas_dir = Path(__file__).parent.parent / "schemas"

        self.schemas_dir = Path(schemas_dir)
        self.schemas_cache: Dict[str, Draft7Validator] = {}

    def load_schema(self, schema_name: str) -> Draft7Validator:
        """
        Load (and cache) a JSON schema.

        Raises:
            DataIOError: schema file missing or unreadable
        """
        if schema_name in self.schemas_cache:
            return self.schemas_cache[schema_name]

        schema_path = self.schemas_dir / schema_name
        try:
            with open(schema_path) as f:
                schema = json.load(f)
        except OSError as e:
            raise DataIOError(f"Schema not found: {schema_path} ({e.strerror})") from None
        Draft7Validator.check_schema(schema)

        validator = Draft7Validator(schema)
        self.schemas_cache[schema_name] = validator
        return validator

    def validate(self, document: Dict[str, Any], schema_name: str = REPORT_SCHEMA) -> Tuple[bool, List[str]]:
        """
        Validate a document.

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        validator = self.load_schema(schema_name)
        errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
        return not errors, [self._format_error(e) for e in errors]

    @staticmethod
    def _format_error(error) -> str:
        path = ".".join(str(p) for p in error.absolute_path) or "<root>"
        return f"Validation error at '{path}': {error.message}"

    def validate_and_raise(self, document: Dict[str, Any], schema_name: str = REPORT_SCHEMA,
                           error_type: Type[ValidationFailure] = ConfigurationError):
        """
        Validate and raise error_type listing every violation.
        """
        is_valid, errors = self.validate(document, schema_name)
        if not is_valid:
            raise error_type(f"{schema_name}: " + "; ".join(errors))


_validator: Optional[SchemaValidator] = None


def get_validator() -> SchemaValidator:
    """Get the shared validator instance."""
    global _validator
    if _validator is None:
        _validator = SchemaValidator()
    return _validator


def validate_document(document: Dict[str, Any], schema_name: str = REPORT_SCHEMA) -> Tuple[bool, List[str]]:
    return get_validator().validate(document, schema_name)
