#!/usr/bin/env python3
"""
Credit Index Errors
===================

Exception hierarchy shared by the library and the command-line front-end.
Every class carries the process exit code the CLI reports for it:

    1 - validation failure (bad input, bad config, golden-check mismatch)
    2 - I/O failure
    3 - numerical / fit failure
"""

from typing import Iterable, Optional


class CreditIndexError(Exception):
    """Base class for all credit index errors."""

    exit_code = 1


class ValidationFailure(CreditIndexError):
    """Input or configuration did not pass validation."""

    exit_code = 1


class DomainError(ValidationFailure, ValueError):
    """A value is outside the domain of an operation (e.g. a non-finite ratio)."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class DimensionError(ValidationFailure, ValueError):
    """Vector lengths do not agree."""


class SchemaError(ValidationFailure):
    """Dataset does not match the expected schema."""


class ParseError(SchemaError):
    """A cell could not be parsed."""

    def __init__(self, message: str, row: int, column: str):
        super().__init__(f"{message} (row {row}, column '{column}')")
        self.row = row
        self.column = column


class EnumerationError(SchemaError, ValueError):
    """A value is not a member of a closed enumeration (e.g. a rating grade)."""


class ConfigurationError(ValidationFailure):
    """Configuration (threshold table, run config, schema file) is malformed."""


class UnknownIndustryError(ValidationFailure, KeyError):
    """A record belongs to an industry with no fitted distribution."""

    def __init__(self, industry: int):
        super().__init__(f"No fitted distribution for industry {industry}")
        self.industry = industry

    def __str__(self) -> str:
        return self.args[0]


class GoldenCheckFailure(ValidationFailure):
    """A worked-example quantity did not match its published value."""

    def __init__(self, quantity: str, expected: float, actual, tolerance: float):
        super().__init__(
            f"Golden check failed at {quantity}: expected {expected} ± {tolerance}, got {actual}"
        )
        self.quantity = quantity


class DataIOError(CreditIndexError, OSError):
    """A file could not be read or written."""

    exit_code = 2


class NumericalError(CreditIndexError, ArithmeticError):
    """A numerical procedure failed (e.g. singular scatter matrix)."""

    exit_code = 3

    def __init__(self, message: str, columns: Iterable[str] = ()):
        columns = list(columns)
        if columns:
            message = f"{message}; offending columns: {', '.join(columns)}"
        super().__init__(message)
        self.columns = columns


class FitError(NumericalError):
    """A model could not be fitted to the given data."""


class InsufficientSampleError(FitError):
    """Too few observations for the requested estimate."""


class DegenerateSampleError(FitError):
    """The sample has no spread (or no skew) where one is required."""


class InvalidRatioError(FitError):
    """An L-moment ratio lies outside its admissible range."""


class IndustryFitError(FitError):
    """The per-industry distribution fit failed."""

    def __init__(self, industry: int, reason: str):
        super().__init__(f"Industry {industry}: {reason}")
        self.industry = industry
