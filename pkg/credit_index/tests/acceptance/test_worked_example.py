#!/usr/bin/env python3
"""
Acceptance: Worked Example
==========================

The ten-record example with published weights must reproduce every
published intermediate, and a perturbed weight must be caught at the first
quantity it moves.
"""

import time
import pytest
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from lib.errors import GoldenCheckFailure
from lib.pearson3 import ThresholdTable
from lib.toy import EXPECTED_H, EXPECTED_W, PUBLISHED_WEIGHTS, first_failure, run_toy_checks, verify_toy


class TestWorkedExample:
    """Golden values of the worked example."""

    def test_every_check_passes(self):
        """Test all intermediates match within tolerance."""
        checks = run_toy_checks()
        failed = [c.quantity for c in checks if not c.passed]

        assert failed == []
        assert len(checks) == 50 + 10 + 3 + 3 + 2 + 4 + 1 + 10 + 10

    def test_grades(self):
        """Test the final grades."""
        checks = {c.quantity: c for c in run_toy_checks()}

        assert [checks[f"W[{i}]"].actual for i in range(1, 11)] == list(EXPECTED_W)

    def test_index_values(self):
        """Test every H within 5e-3 and the first within 3e-3."""
        checks = {c.quantity: c for c in run_toy_checks()}

        assert checks["H[1]"].actual == pytest.approx(EXPECTED_H[0], abs=3e-3)
        for i, expected in enumerate(EXPECTED_H, start=1):
            assert checks[f"H[{i}]"].actual == pytest.approx(expected, abs=5e-3)

    def test_runtime(self):
        """Test the example runs in well under a second."""
        started = time.perf_counter()
        verify_toy()

        assert time.perf_counter() - started < 1.0

    @pytest.mark.parametrize("k", range(5))
    def test_perturbed_weight_fails_at_first_score(self, k):
        """Test a +0.1 change in any weight is first caught at Z_M[1]."""
        weights = list(PUBLISHED_WEIGHTS)
        weights[k] += 0.1
        failed = first_failure(run_toy_checks(weights))

        assert failed is not None
        assert failed.quantity == "Z_M[1]"

    def test_verify_raises(self):
        """Test verify_toy raises GoldenCheckFailure naming the quantity."""
        weights = list(PUBLISHED_WEIGHTS)
        weights[0] += 0.1

        with pytest.raises(GoldenCheckFailure) as exc_info:
            verify_toy(weights)

        assert exc_info.value.quantity == "Z_M[1]"

    def test_perturbed_thresholds_fail_at_grades(self):
        """Test moving the BBB cutoff passes every number but fails at W[6]."""
        checks = run_toy_checks(thresholds=ThresholdTable.default().with_bbb_upper(0.25))
        failed = first_failure(checks)

        assert failed is not None
        assert failed.quantity == "W[6]"
        assert [c.quantity for c in checks if not c.passed] == ["W[6]"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
