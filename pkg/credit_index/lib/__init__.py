#!/usr/bin/env python3
"""
Credit Index Library
====================

Nonlinear Z-score, L-moment / Pearson type 3 credit index, seven-grade
ratings and the evaluation suite.
"""

__version__ = "1.0.0"

from .errors import CreditIndexError
from .transform import RatingGrade, RatioRecord, TransformedRecord, bankruptcy_index, moment_stats, signed_log
from .discriminant import DiscriminantModel, ZScoreVariant, altman_zone, fit_mda, z_score
from .lmom import LMomentSet, l_moments, sample_pwm
from .pearson3 import P3Params, ThresholdTable, assign_grade, credit_index, fit_p3, p3_pdf
from .pipeline import PipelineResult, ScoredRecord, run_pipeline, score_new
from .evaluate import (
    ClassificationMatrix,
    LogisticFit,
    compare_scores_table,
    confusion,
    f_test_variance,
    fit_logistic,
    rating_to_binary_prediction,
    spearman_rho,
    threshold_sweep,
)
from .schema_validator import SchemaValidator, get_validator

__all__ = [
    'CreditIndexError',
    'RatingGrade',
    'RatioRecord',
    'TransformedRecord',
    'bankruptcy_index',
    'moment_stats',
    'signed_log',
    'DiscriminantModel',
    'ZScoreVariant',
    'altman_zone',
    'fit_mda',
    'z_score',
    'LMomentSet',
    'l_moments',
    'sample_pwm',
    'P3Params',
    'ThresholdTable',
    'assign_grade',
    'credit_index',
    'fit_p3',
    'p3_pdf',
    'PipelineResult',
    'ScoredRecord',
    'run_pipeline',
    'score_new',
    'ClassificationMatrix',
    'LogisticFit',
    'compare_scores_table',
    'confusion',
    'f_test_variance',
    'fit_logistic',
    'rating_to_binary_prediction',
    'spearman_rho',
    'threshold_sweep',
    'SchemaValidator',
    'get_validator',
]
