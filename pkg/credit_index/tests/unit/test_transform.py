#!/usr/bin/env python3
"""
Unit Tests for the Ratio Transform
==================================

Signed-log transform, grade handling and moment statistics.
"""

import math
import pytest
import sys
from pathlib import Path

import numpy as np

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from lib.errors import (
    DegenerateSampleError,
    DimensionError,
    DomainError,
    EnumerationError,
    InsufficientSampleError,
)
from lib.transform import (
    RatingGrade,
    RatioRecord,
    bankruptcy_index,
    inverse_signed_log,
    moment_stats,
    signed_log,
    signed_log_array,
    transform_record,
)


class TestSignedLog:
    """Test the scalar and vectorized signed-log transform."""

    def test_positive_value(self):
        """Test a positive ratio maps to ln(1 + x)."""
        assert signed_log(0.121) == pytest.approx(0.114, abs=5e-4)

    def test_negative_value(self):
        """Test a negative ratio maps to -ln(1 - x)."""
        assert signed_log(-0.046) == pytest.approx(-0.045, abs=5e-4)

    def test_zero(self):
        """Test zero maps to zero."""
        assert signed_log(0.0) == 0.0

    def test_nan_raises_with_location(self):
        """Test NaN input raises DomainError naming row and column."""
        with pytest.raises(DomainError) as exc_info:
            signed_log(float("nan"), row=3, column="RE_TA")

        assert "row 3" in str(exc_info.value)
        assert "RE_TA" in str(exc_info.value)
        assert exc_info.value.row == 3

    def test_infinity_raises(self):
        """Test infinite input raises DomainError."""
        with pytest.raises(DomainError):
            signed_log(math.inf)

    def test_array_matches_scalar(self):
        """Test the vectorized form agrees with the scalar form to rounding."""
        values = [-5.0, -0.3, 0.0, 0.2, 23.002]
        expected = [signed_log(x) for x in values]

        np.testing.assert_allclose(signed_log_array(values), expected, rtol=1e-15, atol=0)

    @pytest.mark.parametrize("zero", [0.0, -0.0])
    def test_zero_is_positive_zero(self, zero):
        """Test both forms map zero to +0.0."""
        assert math.copysign(1.0, signed_log(zero)) == 1.0
        assert math.copysign(1.0, signed_log_array([zero])[0]) == 1.0

    def test_array_rejects_nan(self):
        """Test the vectorized form rejects NaN."""
        with pytest.raises(DomainError):
            signed_log_array([1.0, float("nan")])

    def test_inverse(self):
        """Test inverse_signed_log undoes the transform."""
        values = np.array([-12.5, -0.01, 0.0, 0.5, 40.0])

        np.testing.assert_allclose(inverse_signed_log(signed_log_array(values)), values, rtol=1e-12, atol=1e-15)


class TestRatingGrade:
    """Test grade ordering, parsing and the bankruptcy collapse."""

    def test_order(self):
        """Test AAA is the safest and CCC the riskiest grade."""
        assert RatingGrade.AAA > RatingGrade.AA > RatingGrade.A > RatingGrade.BBB
        assert RatingGrade.BBB > RatingGrade.BB > RatingGrade.B > RatingGrade.CCC
        assert RatingGrade.ascending()[0] is RatingGrade.CCC
        assert RatingGrade.ascending()[-1] is RatingGrade.AAA

    def test_inclusive_comparisons(self):
        """Test <= and >= agree with the safety rank."""
        assert RatingGrade.BBB <= RatingGrade.BBB <= RatingGrade.A
        assert RatingGrade.AAA >= RatingGrade.AAA >= RatingGrade.CCC
        assert not RatingGrade.B >= RatingGrade.BB
        assert max(RatingGrade) is RatingGrade.AAA

    def test_compare_with_other_types(self):
        """Test ordering against a non-grade raises TypeError."""
        with pytest.raises(TypeError):
            RatingGrade.AAA < "AA"

    def test_parse_case_insensitive(self):
        """Test lower-case grades parse."""
        assert RatingGrade.parse("bbb") is RatingGrade.BBB
        assert RatingGrade.parse(" aa ") is RatingGrade.AA

    def test_parse_unknown(self):
        """Test an unknown grade raises EnumerationError."""
        with pytest.raises(EnumerationError):
            RatingGrade.parse("XYZ")

    @pytest.mark.parametrize("grade,expected", [
        (RatingGrade.AAA, 0),
        (RatingGrade.AA, 0),
        (RatingGrade.A, 0),
        (RatingGrade.BBB, 1),
        (RatingGrade.BB, 1),
        (RatingGrade.B, 1),
        (RatingGrade.CCC, 1),
    ])
    def test_bankruptcy_index(self, grade, expected):
        """Test BBB and below collapse to 1, A and above to 0."""
        assert bankruptcy_index(grade) == expected


class TestRatioRecord:
    """Test record validation and transformation."""

    def test_non_finite_ratio_rejected(self):
        """Test a non-finite ratio raises DomainError."""
        with pytest.raises(DomainError):
            RatioRecord(ratios=(0.1, float("inf")), industry=1, year=2001, row=7)

    def test_empty_ratios_rejected(self):
        """Test a record without ratios raises DimensionError."""
        with pytest.raises(DimensionError):
            RatioRecord(ratios=(), industry=1, year=2001)

    def test_ungraded_bankruptcy_is_none(self):
        """Test an ungraded record has no bankruptcy index."""
        record = RatioRecord(ratios=(0.1,), industry=1, year=2001)

        assert record.bankruptcy is None

    def test_transform_preserves_sign_and_labels(self):
        """Test transformed values keep the sign of the raw ratios."""
        record = RatioRecord(ratios=(-0.046, -0.164, 0.027, 0.218, 0.103), industry=4, year=2003,
                             grade=RatingGrade.B)
        transformed = transform_record(record)

        assert [np.sign(v) for v in transformed.values] == [np.sign(x) for x in record.ratios]
        assert transformed.bankruptcy == 1
        assert transformed.industry == 4
        assert transformed.year == 2003


class TestMomentStats:
    """Test skewness and raw kurtosis."""

    def test_symmetric_sample(self):
        """Test a symmetric sample has zero skewness."""
        result = moment_stats([-1.0, 0.0, 1.0])

        assert result.skewness == pytest.approx(0.0, abs=1e-12)
        assert result.kurtosis == pytest.approx(1.5)

    def test_translation_invariant(self):
        """Test adding a constant leaves both statistics unchanged."""
        rng = np.random.default_rng(3)
        x = rng.gamma(2.0, 1.0, size=500)
        base = moment_stats(x)
        shifted = moment_stats(x + 100.0)

        assert shifted.skewness == pytest.approx(base.skewness, abs=1e-8)
        assert shifted.kurtosis == pytest.approx(base.kurtosis, abs=1e-8)

    def test_normal_kurtosis_is_raw(self):
        """Test a normal sample gives kurtosis near 3, not 0."""
        rng = np.random.default_rng(11)
        result = moment_stats(rng.normal(size=100_000))

        assert result.kurtosis == pytest.approx(3.0, abs=0.1)

    def test_too_few_values(self):
        """Test fewer than 3 values raises InsufficientSampleError."""
        with pytest.raises(InsufficientSampleError):
            moment_stats([1.0, 2.0])

    def test_constant_sample(self):
        """Test a zero-variance sample raises DegenerateSampleError."""
        with pytest.raises(DegenerateSampleError):
            moment_stats([2.0, 2.0, 2.0, 2.0])

    def test_lognormal_skewness(self):
        """Test skewness of a lognormal sample against its analytic value."""
        sigma = 0.25
        raw = np.random.default_rng(11).lognormal(mean=0.0, sigma=sigma, size=100_000)
        analytic = (math.exp(sigma ** 2) + 2.0) * math.sqrt(math.exp(sigma ** 2) - 1.0)

        assert moment_stats(raw).skewness == pytest.approx(analytic, rel=0.05)

    def test_transform_reduces_skewness(self):
        """Test the transform pulls a heavy right tail in."""
        rng = np.random.default_rng(5)
        raw = rng.lognormal(mean=0.0, sigma=1.0, size=10_000)

        assert moment_stats(signed_log_array(raw)).skewness < moment_stats(raw).skewness


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
