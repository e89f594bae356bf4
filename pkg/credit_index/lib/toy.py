#!/usr/bin/env python3
"""
Worked Example
==============

Ten-record, single-industry example with published intermediate values.
Running the pipeline on it with the published weights and comparing every
intermediate quantity is the repository's executable regression anchor.

Published values are quoted at their printed precision. theta_3 and tau_3 are
printed from rounded PWMs; the unrounded chain gives 0.3975 and 0.2764, so
those two checks carry wider tolerances.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

from .discriminant import DiscriminantModel
from .errors import GoldenCheckFailure
from .pearson3 import ThresholdTable
from .pipeline import run_pipeline
from .transform import RatingGrade, RatioRecord

RATIO_COLUMNS = ("WC_TA", "RE_TA", "EBIT_TA", "MVE_BVTD", "S_TA")

TOY_RATIOS = (
    (0.121, 0.263, 0.046, 1.219, 0.286),
    (-0.046, -0.164, 0.027, 0.218, 0.103),
    (0.481, 0.696, 0.099, 3.969, 0.532),
    (0.351, 0.238, 0.07, 1.023, 0.237),
    (0.217, 0.326, 0.045, 2.522, 0.295),
    (0.105, 0.236, 0.053, 1.566, 0.216),
    (0.078, 0.157, 0.041, 1.402, 0.335),
    (0.189, 0.437, 0.059, 5.043, 0.452),
    (0.043, -0.047, 0.041, 0.287, 0.114),
    (0.17, 0.702, 0.089, 23.002, 1.183),
)
TOY_GRADES = ("BBB", "B", "AAA", "BBB", "AA", "BBB", "BBB", "AAA", "B", "AAA")
TOY_INDUSTRY = 1

PUBLISHED_WEIGHTS = (1.841, -0.856, -1.087, 3.390, -1.649)

EXPECTED_TRANSFORMED = (
    (0.114, 0.233, 0.045, 0.797, 0.252),
    (-0.045, -0.152, 0.027, 0.197, 0.098),
    (0.393, 0.528, 0.094, 1.603, 0.427),
    (0.301, 0.213, 0.068, 0.705, 0.213),
    (0.196, 0.282, 0.044, 1.259, 0.259),
    (0.1, 0.212, 0.052, 0.942, 0.196),
    (0.075, 0.146, 0.04, 0.876, 0.289),
    (0.173, 0.363, 0.057, 1.799, 0.373),
    (0.042, -0.046, 0.04, 0.252, 0.108),
    (0.157, 0.532, 0.085, 3.178, 0.781),
)
EXPECTED_Z_M = (2.249, 0.525, 4.900, 2.335, 3.914, 2.818, 2.464, 5.429, 0.750, 9.228)
EXPECTED_BETA = (3.461, 2.449, 1.939)
EXPECTED_THETA = (3.461, 1.437, 0.401)
EXPECTED_TAU2 = 0.415
EXPECTED_TAU3 = 0.279
EXPECTED_DELTA = 0.7202
EXPECTED_ETA = 1.449
EXPECTED_ALPHA = 2.3042
EXPECTED_C = 0.121
EXPECTED_V1 = 0.9232
EXPECTED_H = (-0.227, -1.549, 0.735, -0.186, 0.433, 0.028, -0.126, 0.880, -1.265, 1.711)
EXPECTED_W = ("BBB", "B", "A", "BBB", "A", "A", "BBB", "A", "BB", "AA")

TOLERANCES = {
    "D": 5e-4,
    "Z_M": 2e-3,
    "beta": 2e-3,
    "theta": 2e-3,
    "theta_3": 4e-3,
    "tau_2": 2e-3,
    "tau_3": 3e-3,
    "p3": 3e-3,
    "v": 3e-3,
    "H_1": 3e-3,
    "H": 5e-3,
}


def toy_records() -> List[RatioRecord]:
    """The ten worked-example records: industry 1, years 1..10."""
    return [
        RatioRecord(ratios=ratios, industry=TOY_INDUSTRY, year=year, grade=RatingGrade.parse(grade), row=year)
        for year, (ratios, grade) in enumerate(zip(TOY_RATIOS, TOY_GRADES), start=1)
    ]


@dataclass(frozen=True)
class GoldenCheck:
    quantity: str
    expected: Union[float, str]
    actual: Union[float, str]
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        if isinstance(self.expected, str):
            return self.expected == self.actual
        return abs(float(self.actual) - float(self.expected)) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "expected": self.expected,
            "actual": self.actual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def run_toy_checks(weights: Sequence[float] = PUBLISHED_WEIGHTS,
                   thresholds: Optional[ThresholdTable] = None) -> List[GoldenCheck]:
    """
    Run the pipeline on the worked example and compare every intermediate.

    Checks are returned in pipeline order, so the first failing entry names
    the earliest quantity that went wrong.
    """
    result = run_pipeline(toy_records(), model=DiscriminantModel.from_weights(weights), thresholds=thresholds)
    lmom = result.lmoments[TOY_INDUSTRY]
    fit = result.fits[TOY_INDUSTRY]
    tol = TOLERANCES
    checks: List[GoldenCheck] = []

    for i, (record, expected_row) in enumerate(zip(result.records, EXPECTED_TRANSFORMED), start=1):
        for k, expected in enumerate(expected_row, start=1):
            checks.append(GoldenCheck(f"D[{i},{k}]", expected, record.transformed.values[k - 1], tol["D"]))
    for i, (record, expected) in enumerate(zip(result.records, EXPECTED_Z_M), start=1):
        checks.append(GoldenCheck(f"Z_M[{i}]", expected, record.z_m, tol["Z_M"]))

    for r, expected in enumerate(EXPECTED_BETA):
        checks.append(GoldenCheck(f"beta_{r}", expected, lmom.beta[r], tol["beta"]))
    for r, expected in enumerate(EXPECTED_THETA, start=1):
        checks.append(GoldenCheck(f"theta_{r}", expected, lmom.theta[r - 1],
                                  tol["theta_3"] if r == 3 else tol["theta"]))
    checks.append(GoldenCheck("tau_2", EXPECTED_TAU2, lmom.tau2, tol["tau_2"]))
    checks.append(GoldenCheck("tau_3", EXPECTED_TAU3, lmom.tau3, tol["tau_3"]))

    delta = 3.0 * math.pi * lmom.tau3 ** 2
    checks.append(GoldenCheck("delta", EXPECTED_DELTA, delta, tol["p3"]))
    checks.append(GoldenCheck("eta", EXPECTED_ETA, fit.shape_eta, tol["p3"]))
    checks.append(GoldenCheck("alpha", EXPECTED_ALPHA, fit.scale_alpha, tol["p3"]))
    checks.append(GoldenCheck("c", EXPECTED_C, fit.location_c, tol["p3"]))
    checks.append(GoldenCheck("v[1]", EXPECTED_V1, result.records[0].v, tol["v"]))

    for i, (record, expected) in enumerate(zip(result.records, EXPECTED_H), start=1):
        checks.append(GoldenCheck(f"H[{i}]", expected, record.h, tol["H_1"] if i == 1 else tol["H"]))
    for i, (record, expected) in enumerate(zip(result.records, EXPECTED_W), start=1):
        checks.append(GoldenCheck(f"W[{i}]", expected, record.grade.value))
    return checks


def first_failure(checks: Sequence[GoldenCheck]) -> Optional[GoldenCheck]:
    return next((c for c in checks if not c.passed), None)


def verify_toy(weights: Sequence[float] = PUBLISHED_WEIGHTS,
               thresholds: Optional[ThresholdTable] = None) -> List[GoldenCheck]:
    """Run the checks and raise GoldenCheckFailure at the first mismatch."""
    checks = run_toy_checks(weights, thresholds)
    failed = first_failure(checks)
    if failed is not None:
        raise GoldenCheckFailure(failed.quantity, failed.expected, failed.actual, failed.tolerance)
    return checks
