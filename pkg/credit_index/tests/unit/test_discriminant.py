#!/usr/bin/env python3
"""
Unit Tests for Discriminant Scores
==================================

Fixed-weight Z-scores, the Fisher discriminant fit and its invariances.
"""

import pytest
import sys
from pathlib import Path

import numpy as np

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from lib.discriminant import (
    INJECTED,
    NORMALIZATION,
    AltmanZone,
    DiscriminantModel,
    ZScoreKind,
    ZScoreVariant,
    altman_zone,
    fit_mda,
    z_score,
)
from lib.errors import ConfigurationError, DimensionError, FitError, NumericalError
from lib.toy import PUBLISHED_WEIGHTS, TOY_RATIOS, toy_records
from lib.transform import transform_record


def two_clouds(n=200, seed=0):
    """Two spherical Gaussian classes separated along the first axis."""
    rng = np.random.default_rng(seed)
    solvent = rng.normal(size=(n, 3)) + np.array([2.0, 0.0, 0.0])
    bankrupt = rng.normal(size=(n, 3)) - np.array([2.0, 0.0, 0.0])
    values = np.vstack([solvent, bankrupt])
    labels = np.array([0] * n + [1] * n)
    return values, labels


class TestFixedWeightScores:
    """Test Z_A, Z_U and injected Z_M weights."""

    def test_altman_unit_vector(self):
        """Test Z_A of (1,0,0,0,0) is the first Altman weight."""
        assert z_score(ZScoreVariant.altman(), [1, 0, 0, 0, 0]) == pytest.approx(1.2)

    def test_updated_unit_vector(self):
        """Test Z_U of e5 is the fifth updated weight."""
        assert z_score(ZScoreVariant.updated(), [0, 0, 0, 0, 1]) == pytest.approx(1.0)

    def test_injected_weights_on_raw_ratios(self):
        """Test published weights reproduce the worked-example Z_M values."""
        model = DiscriminantModel.from_weights(PUBLISHED_WEIGHTS)

        assert z_score(model, TOY_RATIOS[0]) == pytest.approx(2.249, abs=2e-3)
        assert z_score(model, TOY_RATIOS[9]) == pytest.approx(9.228, abs=2e-3)
        assert model.normalization == INJECTED

    def test_dimension_mismatch(self):
        """Test a short ratio vector raises DimensionError."""
        with pytest.raises(DimensionError):
            z_score(ZScoreVariant.altman(), [0.1, 0.2, 0.3])

    def test_altman_rejects_transformed_input(self):
        """Test Altman scores refuse transformed ratios."""
        with pytest.raises(ConfigurationError):
            z_score(ZScoreVariant.altman(), [0.1] * 5, transformed=True)

    def test_altman_weights_are_fixed(self):
        """Test an Altman variant with other weights is rejected."""
        with pytest.raises(ConfigurationError):
            ZScoreVariant(ZScoreKind.ALTMAN, (1.0, 1.0, 1.0, 1.0, 1.0))

    @pytest.mark.parametrize("z,zone", [
        (3.5, AltmanZone.SAFE),
        (2.99, AltmanZone.SAFE),
        (2.5, AltmanZone.GREY),
        (1.81, AltmanZone.GREY),
        (0.0, AltmanZone.DISTRESS),
    ])
    def test_altman_zone(self, z, zone):
        """Test the Altman zone cut-offs."""
        assert altman_zone(z) is zone


class TestFitMda:
    """Test the two-group discriminant fit."""

    def test_recovers_separating_axis(self):
        """Test the fitted direction is the mean-difference axis."""
        values, labels = two_clouds()
        model = fit_mda(values, labels)
        w = np.asarray(model.weights)

        assert abs(w[0]) / np.linalg.norm(w) > 0.99
        assert model.normalization == NORMALIZATION

    def test_solvent_scores_higher(self):
        """Test non-bankrupt firms score higher on average."""
        values, labels = two_clouds()
        model = fit_mda(values, labels)
        scores = values @ np.asarray(model.weights)

        assert scores[labels == 0].mean() > scores[labels == 1].mean()
        assert scores[labels == 0].mean() > model.cutoff > scores[labels == 1].mean()

    def test_unit_pooled_variance(self):
        """Test w'Sw equals one."""
        values, labels = two_clouds()
        model = fit_mda(values, labels)
        w = np.asarray(model.weights)
        scatter = np.asarray(model.pooled_scatter)

        assert float(w @ scatter @ w) == pytest.approx(1.0, abs=1e-6)

    def test_toy_set_is_separated(self):
        """Test a fit on the worked example separates its two classes."""
        transformed = [transform_record(r) for r in toy_records()]
        values = [tr.values for tr in transformed]
        labels = [tr.bankruptcy for tr in transformed]
        model = fit_mda(values, labels)
        scores = np.asarray([model.score(v) for v in values])
        labels = np.asarray(labels)

        assert scores[labels == 0].min() > scores[labels == 1].max()

    def test_row_permutation(self):
        """Test shuffling rows leaves the weights unchanged."""
        values, labels = two_clouds()
        order = np.random.default_rng(9).permutation(len(labels))
        base = fit_mda(values, labels)
        shuffled = fit_mda(values[order], labels[order])

        np.testing.assert_allclose(shuffled.weights, base.weights, rtol=1e-10, atol=1e-12)

    def test_duplicated_rows_keep_direction(self):
        """Test duplicating every record keeps the weight direction."""
        values, labels = two_clouds(n=50)
        base = np.asarray(fit_mda(values, labels).weights)
        doubled = np.asarray(fit_mda(np.vstack([values, values]), np.concatenate([labels, labels])).weights)

        np.testing.assert_allclose(doubled / np.linalg.norm(doubled), base / np.linalg.norm(base), atol=1e-10)

    def test_affine_equivariance(self):
        """Test weights transform by A^-T and scores are unchanged when features go through A."""
        values, labels = two_clouds(n=100, seed=4)
        A = np.random.default_rng(4).normal(size=(3, 3)) + 3.0 * np.eye(3)
        base = fit_mda(values, labels, ridge=0.0)
        mapped = fit_mda(values @ A.T, labels, ridge=0.0)

        np.testing.assert_allclose(mapped.weights, np.linalg.inv(A).T @ np.asarray(base.weights), atol=1e-8)
        np.testing.assert_allclose((values @ A.T) @ np.asarray(mapped.weights),
                                   values @ np.asarray(base.weights), atol=1e-8)

    def test_collinear_columns_are_regularized(self):
        """Test a linearly dependent column does not break the fit."""
        values, labels = two_clouds(n=100, seed=2)
        collinear = np.column_stack([values, 2.0 * values[:, 0]])
        model = fit_mda(collinear, labels)
        scores = collinear @ np.asarray(model.weights)

        assert np.all(np.isfinite(model.weights))
        assert scores[labels == 0].mean() > scores[labels == 1].mean()

    def test_zero_variance_column_named(self):
        """Test a constant column raises NumericalError naming it."""
        values, labels = two_clouds(n=20)
        values[:, 2] = 0.5

        with pytest.raises(NumericalError) as exc_info:
            fit_mda(values, labels, column_names=["WC_TA", "RE_TA", "EBIT_TA"])

        assert exc_info.value.columns == ["EBIT_TA"]
        assert "EBIT_TA" in str(exc_info.value)

    def test_single_class_rejected(self):
        """Test all-solvent labels raise FitError."""
        values, _ = two_clouds(n=10)

        with pytest.raises(FitError):
            fit_mda(values, np.zeros(len(values), dtype=int))

    def test_one_record_in_class_rejected(self):
        """Test a class with a single record raises FitError."""
        values, labels = two_clouds(n=10)
        labels = np.zeros(len(values), dtype=int)
        labels[0] = 1

        with pytest.raises(FitError):
            fit_mda(values, labels)

    def test_label_length_mismatch(self):
        """Test mismatched label count raises DimensionError."""
        values, labels = two_clouds(n=10)

        with pytest.raises(DimensionError):
            fit_mda(values, labels[:-1])

    def test_predict_bankrupt(self):
        """Test scores below the cutoff are classified bankrupt."""
        values, labels = two_clouds()
        model = fit_mda(values, labels)

        assert model.predict_bankrupt(model.cutoff - 1.0) == 1
        assert model.predict_bankrupt(model.cutoff + 1.0) == 0

    def test_injected_model_has_no_cutoff(self):
        """Test classifying with injected weights raises ConfigurationError."""
        with pytest.raises(ConfigurationError):
            DiscriminantModel.from_weights(PUBLISHED_WEIGHTS).predict_bankrupt(0.0)

    def test_dict_round_trip(self):
        """Test to_dict/from_dict keeps weights, means and cutoff."""
        values, labels = two_clouds()
        model = fit_mda(values, labels)
        restored = DiscriminantModel.from_dict(model.to_dict())

        assert restored.weights == model.weights
        assert restored.cutoff == model.cutoff
        assert restored.group_means == model.group_means
        assert restored.n_solvent == model.n_solvent == 200

    def test_from_dict_dimension_check(self):
        """Test a declared t that disagrees with the weights is rejected."""
        with pytest.raises(DimensionError):
            DiscriminantModel.from_dict({"t": 4, "weights": [1.0, 2.0]})


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
