#!/usr/bin/env python3
"""
Ratio Transform
===============

Raw-data types for firm-year observations, the signed-log transform applied to
financial ratios before scoring, the rating -> bankruptcy index collapse and the
moment statistics used to show that the transform brings ratios closer to
normality.

Kurtosis is reported RAW (a normal sample gives 3), not as excess kurtosis.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .errors import DegenerateSampleError, DimensionError, DomainError, EnumerationError, InsufficientSampleError


@total_ordering
class RatingGrade(Enum):
    """Seven-level rating scale, highest safety first."""
    AAA = "AAA"
    AA = "AA"
    A = "A"
    BBB = "BBB"
    BB = "BB"
    B = "B"
    CCC = "CCC"

    @property
    def safety(self) -> int:
        """Rank on the safety scale: CCC = 0 ... AAA = 6."""
        return _SAFETY[self]

    def __lt__(self, other):
        if not isinstance(other, RatingGrade):
            return NotImplemented
        return self.safety < other.safety

    @classmethod
    def parse(cls, text: str) -> "RatingGrade":
        """Parse a grade case-insensitively ("bbb" -> BBB)."""
        key = str(text).strip().upper()
        try:
            return cls(key)
        except ValueError:
            raise EnumerationError(
                f"Unknown rating grade '{text}'; expected one of {', '.join(g.value for g in cls)}"
            ) from None

    @classmethod
    def ascending(cls) -> Tuple["RatingGrade", ...]:
        """Grades from the riskiest (CCC) to the safest (AAA)."""
        return tuple(sorted(cls, key=lambda g: g.safety))


_SAFETY = {
    RatingGrade.CCC: 0,
    RatingGrade.B: 1,
    RatingGrade.BB: 2,
    RatingGrade.BBB: 3,
    RatingGrade.A: 4,
    RatingGrade.AA: 5,
    RatingGrade.AAA: 6,
}

BANKRUPT_GRADES = frozenset({RatingGrade.B, RatingGrade.BB, RatingGrade.BBB, RatingGrade.CCC})


@dataclass(frozen=True)
class RatioRecord:
    """One firm-year observation."""
    ratios: Tuple[float, ...]
    industry: int
    year: int
    grade: Optional[RatingGrade] = None
    row: Optional[int] = None  # source row number, for error messages

    def __post_init__(self):
        ratios = tuple(float(x) for x in self.ratios)
        if not ratios:
            raise DimensionError("A record needs at least one ratio")
        for k, x in enumerate(ratios):
            if not math.isfinite(x):
                raise DomainError(f"Non-finite ratio value {x}", row=self.row, column=f"x{k + 1}")
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "industry", int(self.industry))
        object.__setattr__(self, "year", int(self.year))

    @property
    def t(self) -> int:
        return len(self.ratios)

    @property
    def bankruptcy(self) -> Optional[int]:
        """Agency bankruptcy index, or None for an ungraded record."""
        return None if self.grade is None else bankruptcy_index(self.grade)


@dataclass(frozen=True)
class TransformedRecord:
    """Signed-log transformed ratios with the labels carried through."""
    values: Tuple[float, ...]
    bankruptcy: Optional[int]
    industry: int
    year: int


class MomentStats(NamedTuple):
    skewness: float
    kurtosis: float


def signed_log(x: float, row: Optional[int] = None, column: Optional[str] = None) -> float:
    """
    Signed-log transform of one ratio value.

    ln(x + 1) for x > 0 and -ln(1 - x) for x <= 0. Odd, strictly increasing,
    defined for every finite x.

    Raises:
        DomainError: x is NaN or infinite
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"Cannot transform non-finite ratio {x}", row=row, column=column)
    if x > 0:
        return math.log1p(x)
    return -math.log1p(-x) + 0.0


def signed_log_array(values) -> np.ndarray:
    """Vectorized signed_log over an array of finite values."""
    x = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("Cannot transform non-finite ratio values")
    magnitude = np.log1p(np.abs(x))
    # + 0.0 maps -0.0 to 0.0
    return np.where(x > 0, magnitude, -magnitude) + 0.0


def inverse_signed_log(values) -> np.ndarray:
    """Map transformed values back to raw ratios."""
    y = np.asarray(values, dtype=float)
    return np.sign(y) * np.expm1(np.abs(y))


def bankruptcy_index(grade: RatingGrade) -> int:
    """1 for BBB and below, 0 for A and above."""
    return 1 if grade in BANKRUPT_GRADES else 0


def transform_record(record: RatioRecord) -> TransformedRecord:
    values = tuple(
        signed_log(x, row=record.row, column=f"x{k + 1}") for k, x in enumerate(record.ratios)
    )
    return TransformedRecord(
        values=values,
        bankruptcy=record.bankruptcy,
        industry=record.industry,
        year=record.year,
    )


def transform_records(records: Iterable[RatioRecord]) -> Tuple[TransformedRecord, ...]:
    return tuple(transform_record(r) for r in records)


def moment_stats(values: Sequence[float]) -> MomentStats:
    """
    Sample skewness and raw kurtosis (population-moment estimators).

    Raises:
        InsufficientSampleError: fewer than 3 values
        DegenerateSampleError: zero variance
    """
    x = np.asarray(values, dtype=float)
    if x.size < 3:
        raise InsufficientSampleError(f"Moment statistics need at least 3 values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DomainError("Moment statistics need finite values")
    if np.ptp(x) == 0 or np.var(x) == 0:
        raise DegenerateSampleError("Zero variance: skewness and kurtosis are undefined")
    skewness = float(stats.skew(x, bias=True))
    kurtosis = float(stats.kurtosis(x, fisher=False, bias=True))
    return MomentStats(skewness, kurtosis)
