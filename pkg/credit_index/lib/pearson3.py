#!/usr/bin/env python3
"""
Pearson Type 3 Credit Index
===========================

Fits a Pearson type 3 (shifted gamma) distribution to a set of Z_M scores from
its L-moments, converts a score into the equi-probability credit index H with
the Wilson-Hilferty cube-root approximation, and maps H onto the seven-grade
rating scale.

The scale convention is used throughout: mean = c + alpha*eta and
variance = alpha^2 * eta. A negatively skewed sample is handled by fitting the
mirrored sample -Z and reflecting the index: H(z) = -H_mirror(-z).
"""

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special, stats

from .errors import ConfigurationError, DegenerateSampleError, DomainError, InvalidRatioError
from .lmom import LMomentSet
from .transform import RatingGrade

TAU3_FLOOR = 1e-6
BRANCH_SEAM = 1.0 / 3.0

# rational approximations of the shape parameter in terms of L-skewness
_SMALL_SKEW = (0.2906, 0.1882, 0.0442)
_LARGE_SKEW = (0.36067, -0.5967, 0.2536, -2.78861, 2.56096, -0.77045)

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class P3Params:
    """Location c, scale alpha and shape eta of a fitted distribution."""
    location_c: float
    scale_alpha: float
    shape_eta: float
    mirrored: bool = False  # fitted to the negated sample

    def __post_init__(self):
        if not (self.scale_alpha > 0 and math.isfinite(self.scale_alpha)):
            raise ConfigurationError(f"P3 scale must be positive, got {self.scale_alpha}")
        if not (self.shape_eta > 0 and math.isfinite(self.shape_eta)):
            raise ConfigurationError(f"P3 shape must be positive, got {self.shape_eta}")
        if not math.isfinite(self.location_c):
            raise ConfigurationError(f"P3 location must be finite, got {self.location_c}")

    @property
    def mean(self) -> float:
        """Mean on the original (unmirrored) score axis."""
        m = self.location_c + self.scale_alpha * self.shape_eta
        return -m if self.mirrored else m

    def to_dict(self) -> Dict[str, Any]:
        return {
            "location_c": self.location_c,
            "scale_alpha": self.scale_alpha,
            "shape_eta": self.shape_eta,
            "mirrored": self.mirrored,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "P3Params":
        return cls(
            location_c=float(data["location_c"]),
            scale_alpha=float(data["scale_alpha"]),
            shape_eta=float(data["shape_eta"]),
            mirrored=bool(data.get("mirrored", False)),
        )


def eta_small_skew(t3: float) -> float:
    """Shape from L-skewness on the branch 0 < t3 < 1/3."""
    c1, c2, c3 = _SMALL_SKEW
    delta = 3.0 * math.pi * t3 * t3
    return (1.0 + c1 * delta) / (delta + c2 * delta ** 2 + c3 * delta ** 3)


def eta_large_skew(t3: float) -> float:
    """Shape from L-skewness on the branch 1/3 <= t3 < 1."""
    d1, d2, d3, d4, d5, d6 = _LARGE_SKEW
    zeta = 1.0 - t3
    return (d1 * zeta + d2 * zeta ** 2 + d3 * zeta ** 3) / (1.0 + d4 * zeta + d5 * zeta ** 2 + d6 * zeta ** 3)


def eta_from_tau3(t3: float) -> float:
    t3 = abs(t3)
    return eta_small_skew(t3) if t3 < BRANCH_SEAM else eta_large_skew(t3)


def eta_seam_gap() -> float:
    """Jump of the shape estimate where the two branches meet."""
    return abs(eta_small_skew(BRANCH_SEAM) - eta_large_skew(BRANCH_SEAM))


def fit_p3(lmom: LMomentSet) -> P3Params:
    """
    Estimate P3 parameters from L-moments.

    Raises:
        DegenerateSampleError: theta_2 <= 0, or |tau_3| below TAU3_FLOOR
        InvalidRatioError: |tau_3| >= 1
    """
    theta1, theta2, _ = lmom.theta
    if theta2 <= 0:
        raise DegenerateSampleError(f"L-scale must be positive, got {theta2}")
    t3 = abs(lmom.tau3)
    if not t3 < 1.0:
        raise InvalidRatioError(f"L-skewness must lie in (-1, 1), got {lmom.tau3}")
    if t3 < TAU3_FLOOR:
        raise DegenerateSampleError(f"L-skewness {lmom.tau3} is effectively zero: shape diverges")

    eta = eta_from_tau3(t3)
    alpha = math.sqrt(math.pi) * theta2 * math.exp(special.gammaln(eta) - special.gammaln(eta + 0.5))
    mirrored = lmom.tau3 < 0
    location = (-theta1 if mirrored else theta1) - alpha * eta
    return P3Params(location_c=location, scale_alpha=alpha, shape_eta=eta, mirrored=mirrored)


def _scalar_or_array(result: np.ndarray, like: ArrayLike):
    return float(result) if np.ndim(like) == 0 else result


def standardize(params: P3Params, z: ArrayLike):
    """v = (z - c) / alpha on the fitted (possibly mirrored) axis."""
    x = np.asarray(z, dtype=float)
    if params.mirrored:
        x = -x
    return _scalar_or_array((x - params.location_c) / params.scale_alpha, z)


def _wilson_hilferty(v: np.ndarray, eta: float) -> np.ndarray:
    return (np.cbrt(v / eta) + 1.0 / (9.0 * eta) - 1.0) * math.sqrt(9.0 * eta)


def credit_index(params: P3Params, z: ArrayLike):
    """
    Equi-probability credit index H of a score.

    Uses the signed cube root so that scores below the location bound still
    map to a real, monotone index.
    """
    x = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("Credit index needs finite scores")
    v = np.asarray(standardize(params, x))
    h = _wilson_hilferty(v, params.shape_eta)
    if params.mirrored:
        h = -h
    return _scalar_or_array(h, z)


def p3_pdf(params: P3Params, xi: ArrayLike):
    """Shifted-gamma density; zero outside the support."""
    x = np.asarray(xi, dtype=float)
    if params.mirrored:
        x = -x
    density = stats.gamma.pdf(x, a=params.shape_eta, loc=params.location_c, scale=params.scale_alpha)
    return _scalar_or_array(density, xi)


def p3_sample(params: P3Params, size: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Draw c + alpha * Gamma(eta, 1) variates (negated when mirrored)."""
    rng = rng or np.random.default_rng()
    draws = params.location_c + params.scale_alpha * rng.gamma(params.shape_eta, 1.0, size=size)
    return -draws if params.mirrored else draws


@dataclass(frozen=True)
class ThresholdTable:
    """
    Interval scheme mapping H to a grade.

    boundaries holds (upper cutoff, grade) pairs from the riskiest grade to the
    safest; the last cutoff is +inf. A value equal to a cutoff belongs to the
    lower grade.
    """
    boundaries: Tuple[Tuple[float, RatingGrade], ...]
    name: str = "default"

    def __post_init__(self):
        try:
            pairs = tuple((float(upper), grade if isinstance(grade, RatingGrade) else RatingGrade.parse(grade))
                          for upper, grade in self.boundaries)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Threshold table '{self.name}' is malformed: {e}") from None
        object.__setattr__(self, "boundaries", pairs)

        grades = tuple(grade for _, grade in pairs)
        if grades != RatingGrade.ascending():
            raise ConfigurationError(
                f"Threshold table '{self.name}' must list all seven grades from CCC to AAA, got "
                f"{[g.value for g in grades]}"
            )
        cutoffs = self.cutoffs
        if cutoffs[-1] != math.inf:
            raise ConfigurationError(f"Threshold table '{self.name}': AAA must be unbounded above")
        if not all(math.isfinite(c) for c in cutoffs[:-1]):
            raise ConfigurationError(f"Threshold table '{self.name}': inner cutoffs must be finite")
        if any(lo >= hi for lo, hi in zip(cutoffs, cutoffs[1:])):
            raise ConfigurationError(f"Threshold table '{self.name}': cutoffs must increase strictly")

    @property
    def cutoffs(self) -> Tuple[float, ...]:
        return tuple(upper for upper, _ in self.boundaries)

    def assign(self, h: float) -> RatingGrade:
        if not math.isfinite(h):
            raise DomainError(f"Cannot grade non-finite index {h}")
        return self.boundaries[bisect_left(self.cutoffs, h)][1]

    @classmethod
    def default(cls) -> "ThresholdTable":
        return cls(DEFAULT_BOUNDARIES, name="default")

    def with_bbb_upper(self, upper: float, name: Optional[str] = None) -> "ThresholdTable":
        """Move the BBB/A boundary, leaving every other cutoff unchanged."""
        pairs = tuple((upper if grade is RatingGrade.BBB else cutoff, grade) for cutoff, grade in self.boundaries)
        return ThresholdTable(pairs, name=name or f"bbb_upper_{upper:g}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "boundaries": [
                {"grade": grade.value, "upper": None if math.isinf(upper) else upper}
                for upper, grade in self.boundaries
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ThresholdTable":
        try:
            entries = data["boundaries"]
            pairs = tuple(
                (math.inf if entry.get("upper") is None else entry["upper"], entry["grade"])
                for entry in entries
            )
        except (KeyError, TypeError, AttributeError) as e:
            raise ConfigurationError(f"Threshold table is malformed: {e}") from None
        return cls(pairs, name=str(data.get("name", "unnamed")))


DEFAULT_BOUNDARIES = (
    (-2.0, RatingGrade.CCC),
    (-1.5, RatingGrade.B),
    (-1.0, RatingGrade.BB),
    (0.0, RatingGrade.BBB),
    (1.5, RatingGrade.A),
    (2.0, RatingGrade.AA),
    (math.inf, RatingGrade.AAA),
)


def assign_grade(h: float, table: Optional[ThresholdTable] = None) -> RatingGrade:
    return (table or ThresholdTable.default()).assign(h)
