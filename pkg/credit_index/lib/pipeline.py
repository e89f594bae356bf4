#!/usr/bin/env python3
"""
Rating Pipeline
===============

End-to-end rating of a dataset:

    1. signed-log transform every ratio
    2. derive the bankruptcy index from the agency grade
    3. fit (or accept) the discriminant weights
    4. compute Z_M for every record
    5. per industry: L-moments and P3 fit over that industry's Z_M values,
       then v, H and grade for each record of the industry

The global discriminant fit happens before grouping; per-industry fits are
independent and may run on a thread pool. score_new applies fitted artifacts
to unseen records without refitting.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import console
from .discriminant import (
    ALTMAN_WEIGHTS,
    AltmanZone,
    DiscriminantModel,
    ZScoreVariant,
    altman_zone,
    fit_mda,
    z_score,
)
from .errors import DimensionError, FitError, IndustryFitError, SchemaError, UnknownIndustryError
from .lmom import LMomentSet, l_moments
from .pearson3 import P3Params, ThresholdTable, credit_index, fit_p3, standardize
from .transform import RatingGrade, RatioRecord, TransformedRecord, bankruptcy_index, transform_record

MIN_INDUSTRY_SIZE = 3


@dataclass(frozen=True)
class ScoredRecord:
    """A record with its scores, index and model-assigned grade."""
    input: RatioRecord
    transformed: TransformedRecord
    z_m: float
    industry_fit: P3Params
    v: float
    h: float
    grade: RatingGrade
    z_a: Optional[float] = None
    z_u: Optional[float] = None
    zone: Optional[AltmanZone] = None

    @property
    def b_predicted(self) -> int:
        return bankruptcy_index(self.grade)

    @property
    def b_actual(self) -> Optional[int]:
        return self.input.bankruptcy


@dataclass(frozen=True)
class PipelineResult:
    records: Tuple[ScoredRecord, ...]
    model: DiscriminantModel
    fits: Dict[int, P3Params]
    lmoments: Dict[int, LMomentSet]
    thresholds: ThresholdTable

    def grades(self) -> List[RatingGrade]:
        return [r.grade for r in self.records]


def _check_dimensions(records: Sequence[RatioRecord], expected_t: Optional[int] = None) -> int:
    t = expected_t if expected_t is not None else records[0].t
    for record in records:
        if record.t != t:
            where = f" (row {record.row})" if record.row is not None else ""
            raise DimensionError(f"Record has {record.t} ratios, expected {t}{where}")
    return t


def _score_record(record: RatioRecord, transformed: TransformedRecord, z_m: float,
                  fit: P3Params, thresholds: ThresholdTable) -> ScoredRecord:
    h = credit_index(fit, z_m)
    z_a = z_u = None
    zone = None
    if record.t == len(ALTMAN_WEIGHTS):
        z_a = z_score(ZScoreVariant.altman(), record.ratios)
        z_u = z_score(ZScoreVariant.updated(), record.ratios)
        zone = altman_zone(z_a)
    return ScoredRecord(
        input=record,
        transformed=transformed,
        z_m=z_m,
        industry_fit=fit,
        v=standardize(fit, z_m),
        h=h,
        grade=thresholds.assign(h),
        z_a=z_a,
        z_u=z_u,
        zone=zone,
    )


def fit_industry(industry: int, scores: Sequence[float]) -> Tuple[LMomentSet, P3Params]:
    """
    L-moments and P3 parameters of one industry's Z_M values.

    Raises:
        IndustryFitError: fewer than MIN_INDUSTRY_SIZE records, or the fit failed
    """
    if len(scores) < MIN_INDUSTRY_SIZE:
        raise IndustryFitError(industry, f"needs at least {MIN_INDUSTRY_SIZE} records, got {len(scores)}")
    try:
        lmom = l_moments(scores)
        return lmom, fit_p3(lmom)
    except FitError as e:
        raise IndustryFitError(industry, str(e)) from e


def _group_by_industry(records: Iterable[RatioRecord], scores: Sequence[float]) -> Dict[int, List[float]]:
    groups: Dict[int, List[float]] = {}
    for record, z in zip(records, scores):
        groups.setdefault(record.industry, []).append(z)
    return {industry: groups[industry] for industry in sorted(groups)}


def run_pipeline(dataset: Sequence[RatioRecord], model: Optional[DiscriminantModel] = None,
                 thresholds: Optional[ThresholdTable] = None, workers: int = 1,
                 column_names: Optional[Sequence[str]] = None) -> PipelineResult:
    """
    Rate every record of a dataset.

    Args:
        dataset: records sharing the same number of ratios
        model: injected discriminant weights; fitted from the data when None
        thresholds: H -> grade table (default thresholds when None)
        workers: thread count for the per-industry fits
        column_names: ratio names used in fit error messages

    Returns:
        PipelineResult with records in input order

    Raises:
        SchemaError: empty dataset, or ungraded records when fitting weights
        IndustryFitError: an industry subset is too small or degenerate
    """
    records = list(dataset)
    if not records:
        raise SchemaError("Dataset is empty")
    thresholds = thresholds or ThresholdTable.default()
    t = _check_dimensions(records, model.t if model is not None else None)

    transformed = [transform_record(r) for r in records]

    if model is None:
        ungraded = [r.row if r.row is not None else i + 1 for i, r in enumerate(records) if r.grade is None]
        if ungraded:
            preview = ", ".join(str(row) for row in ungraded[:5])
            raise SchemaError(f"Fitting weights needs a grade on every record; {len(ungraded)} ungraded (rows {preview})")
        model = fit_mda([tr.values for tr in transformed], [tr.bankruptcy for tr in transformed],
                        column_names=column_names)
        console.log("FIT", f"Discriminant fitted on {len(records)} records (t={t}), "
                           f"weights={[round(w, 4) for w in model.weights]}")

    scores = [model.score(tr.values) for tr in transformed]
    groups = _group_by_industry(records, scores)

    if workers > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            fitted = list(executor.map(lambda item: fit_industry(*item), groups.items()))
    else:
        fitted = [fit_industry(industry, z) for industry, z in groups.items()]

    lmoments = {industry: lmom for industry, (lmom, _) in zip(groups, fitted)}
    fits = {industry: params for industry, (_, params) in zip(groups, fitted)}
    console.log("P3", f"Fitted {len(fits)} industr{'y' if len(fits) == 1 else 'ies'}")

    scored = tuple(
        _score_record(record, tr, z, fits[record.industry], thresholds)
        for record, tr, z in zip(records, transformed, scores)
    )
    console.log("SCORE", f"Rated {len(scored)} records with table '{thresholds.name}'")
    return PipelineResult(records=scored, model=model, fits=fits, lmoments=lmoments, thresholds=thresholds)


def score_new(records: Sequence[RatioRecord], model: DiscriminantModel, fits: Mapping[int, P3Params],
              thresholds: Optional[ThresholdTable] = None) -> Tuple[ScoredRecord, ...]:
    """
    Rate records against previously fitted artifacts.

    Raises:
        UnknownIndustryError: a record's industry has no fit
        DimensionError: ratio count differs from the model
    """
    records = list(records)
    thresholds = thresholds or ThresholdTable.default()
    if not records:
        return ()
    _check_dimensions(records, model.t)
    for record in records:
        if record.industry not in fits:
            raise UnknownIndustryError(record.industry)

    scored = []
    for record in records:
        tr = transform_record(record)
        scored.append(_score_record(record, tr, model.score(tr.values), fits[record.industry], thresholds))
    return tuple(scored)


def regrade(scored: Iterable[ScoredRecord], thresholds: ThresholdTable) -> List[RatingGrade]:
    """Grades of already-scored records under another threshold table."""
    return [thresholds.assign(record.h) for record in scored]
