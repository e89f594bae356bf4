#!/usr/bin/env python3
"""
L-Moments
=========

Sample probability-weighted moments (unbiased order-statistic estimator) and
the first three L-moments / L-moment ratios of a vector of scores.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateSampleError, DomainError, InsufficientSampleError

MAX_ORDER = 2


@dataclass(frozen=True)
class LMomentSet:
    """PWMs, L-moments and L-moment ratios of one sample."""
    beta: Tuple[float, float, float]
    theta: Tuple[float, float, float]
    tau2: Optional[float]  # None when theta_1 == 0
    tau3: float
    n: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "beta": list(self.beta),
            "theta": list(self.theta),
            "tau2": self.tau2,
            "tau3": self.tau3,
        }


def _sorted_sample(values: Sequence[float]) -> np.ndarray:
    x = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise DomainError("L-moment estimation needs finite values")
    return np.sort(x, kind="stable")


def _pwm_weights(n: int, r: int) -> np.ndarray:
    """(i-1)(i-2)...(i-r) / ((n-1)(n-2)...(n-r)) for i = 1..n."""
    i = np.arange(1, n + 1, dtype=float)
    weights = np.ones(n)
    for k in range(1, r + 1):
        weights *= (i - k) / (n - k)
    return weights


def _pwm_sorted(x: np.ndarray, r: int) -> float:
    return float(np.sum(x * _pwm_weights(x.size, r)) / x.size)


def sample_pwm(values: Sequence[float], r: int) -> float:
    """
    Unbiased sample probability-weighted moment beta_r.

    Raises:
        InsufficientSampleError: n <= r
    """
    if r not in range(MAX_ORDER + 1):
        raise ValueError(f"PWM order must be 0, 1 or 2, got {r}")
    x = _sorted_sample(values)
    if x.size <= r:
        raise InsufficientSampleError(f"beta_{r} needs more than {r} values, got {x.size}")
    return _pwm_sorted(x, r)


def l_moments(values: Sequence[float]) -> LMomentSet:
    """
    First three sample L-moments and the ratios tau_2, tau_3.

    Raises:
        InsufficientSampleError: fewer than 3 values
        DegenerateSampleError: all values equal (theta_2 == 0)
    """
    x = _sorted_sample(values)
    if x.size < 3:
        raise InsufficientSampleError(f"L-moments need at least 3 values, got {x.size}")

    b0, b1, b2 = (_pwm_sorted(x, r) for r in range(3))
    theta1 = b0
    theta2 = 2.0 * b1 - b0
    theta3 = 6.0 * b2 - 6.0 * b1 + b0
    if x[0] == x[-1] or theta2 <= 0.0:
        raise DegenerateSampleError("All values are equal: L-scale is zero")

    return LMomentSet(
        beta=(b0, b1, b2),
        theta=(theta1, theta2, theta3),
        tau2=None if theta1 == 0.0 else theta2 / theta1,
        tau3=theta3 / theta2,
        n=int(x.size),
    )
