#!/usr/bin/env python3
"""
Evaluation Suite
================

Measures how well the ratings separate bankrupt from non-bankrupt firms:

- classification matrix, accuracy and Type I / Type II error rates
- logistic regression of the bankruptcy index on a score, with Wald statistics
- F-test on the standard deviations of two scores
- Spearman rank correlation
- threshold sensitivity sweeps over alternative H -> grade tables
- descriptive statistics of the Z-score family
- skewness / kurtosis before and after the ratio transform
- stratified hold-out evaluation of the discriminant and of the full pipeline

Type I error is a bankrupt firm classified as non-bankrupt; Type II is a
non-bankrupt firm classified as bankrupt.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import special, stats

from . import console
from .discriminant import ALTMAN_WEIGHTS, ZScoreVariant, fit_mda, z_score
from .errors import ConfigurationError, DegenerateSampleError, DimensionError, DomainError, FitError, SchemaError
from .pearson3 import ThresholdTable
from .pipeline import MIN_INDUSTRY_SIZE, ScoredRecord, regrade, run_pipeline, score_new
from .transform import RatingGrade, RatioRecord, bankruptcy_index, moment_stats, signed_log_array, transform_records

LOGISTIC_MAX_ITER = 100
LOGISTIC_TOL = 1e-8
MAX_STEP_HALVINGS = 30
WALD_CRITICAL_5PCT = 3.84
QUANTILE_METHOD = "linear"


def _rate(numerator: int, denominator: int) -> Optional[float]:
    return numerator / denominator if denominator else None


@dataclass(frozen=True)
class ClassificationMatrix:
    """
    Hit/miss counts of a binary bankruptcy classifier.

    n1: bankrupt predicted bankrupt      m1: bankrupt predicted non-bankrupt
    m2: non-bankrupt predicted bankrupt  n2: non-bankrupt predicted non-bankrupt
    """
    n1: int
    m1: int
    m2: int
    n2: int

    def __post_init__(self):
        if min(self.n1, self.m1, self.m2, self.n2) < 0:
            raise DomainError("Classification counts must be non-negative")

    @property
    def total(self) -> int:
        return self.n1 + self.m1 + self.m2 + self.n2

    @property
    def accuracy(self) -> Optional[float]:
        return _rate(self.n1 + self.n2, self.total)

    @property
    def type_i(self) -> Optional[float]:
        """Share of actual bankrupt firms classified as non-bankrupt (None if there are none)."""
        return _rate(self.m1, self.n1 + self.m1)

    @property
    def type_ii(self) -> Optional[float]:
        """Share of actual non-bankrupt firms classified as bankrupt (None if there are none)."""
        return _rate(self.m2, self.n2 + self.m2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n1": self.n1,
            "m1": self.m1,
            "m2": self.m2,
            "n2": self.n2,
            "accuracy": self.accuracy,
            "type_i": self.type_i,
            "type_ii": self.type_ii,
        }


def _binary(values: Sequence[int], name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be a vector")
    if not np.isin(arr, (0, 1)).all():
        raise DomainError(f"{name} must contain only 0/1 labels")
    return arr.astype(int)


def confusion(actual: Sequence[int], predicted: Sequence[int]) -> ClassificationMatrix:
    """Build the classification matrix (1 = bankrupt)."""
    a = _binary(actual, "actual")
    p = _binary(predicted, "predicted")
    if a.size != p.size:
        raise DimensionError(f"{a.size} actual labels but {p.size} predictions")
    if a.size == 0:
        raise DimensionError("Cannot build a classification matrix from no labels")
    return ClassificationMatrix(
        n1=int(np.sum((a == 1) & (p == 1))),
        m1=int(np.sum((a == 1) & (p == 0))),
        m2=int(np.sum((a == 0) & (p == 1))),
        n2=int(np.sum((a == 0) & (p == 0))),
    )


def rating_to_binary_prediction(grades: Sequence[RatingGrade]) -> List[int]:
    return [bankruptcy_index(g) for g in grades]


def _actual_labels(scored: Sequence[ScoredRecord]) -> List[int]:
    labels = [r.b_actual for r in scored]
    missing = sum(1 for b in labels if b is None)
    if missing:
        raise SchemaError(f"Evaluation needs agency grades; {missing} scored records are ungraded")
    return labels


# --- logistic regression ---------------------------------------------------

@dataclass(frozen=True)
class LogisticFit:
    """Bernoulli-logit fit of b on (1, z)."""
    intercept: float
    slope: float
    wald_intercept: float
    wald_slope: float
    converged: bool
    iterations: int
    se_intercept: float = float("nan")
    se_slope: float = float("nan")
    log_likelihood: float = float("nan")
    gradient_norm: float = float("nan")
    n: int = 0

    @property
    def slope_significant(self) -> bool:
        return self.wald_slope > WALD_CRITICAL_5PCT

    def to_dict(self) -> Dict[str, Any]:
        return {
            "intercept": self.intercept,
            "slope": self.slope,
            "se_intercept": self.se_intercept,
            "se_slope": self.se_slope,
            "wald_intercept": self.wald_intercept,
            "wald_slope": self.wald_slope,
            "log_likelihood": self.log_likelihood,
            "converged": self.converged,
            "iterations": self.iterations,
            "n": self.n,
        }


def _separated(z: np.ndarray, b: np.ndarray) -> bool:
    """True when a single cut on z splits the classes (no finite MLE)."""
    z0, z1 = z[b == 0], z[b == 1]
    return z1.max() <= z0.min() or z0.max() <= z1.min()


def _log_likelihood(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> float:
    eta = X @ beta
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def fit_logistic(z: Sequence[float], b: Sequence[int], max_iter: int = LOGISTIC_MAX_ITER,
                 tol: float = LOGISTIC_TOL) -> LogisticFit:
    """
    Maximum-likelihood logistic regression by iteratively reweighted least squares.

    Convergence is declared when the log-likelihood gradient norm drops below
    tol. Separated data never converge: the loop stops at max_iter with
    converged=False.

    Raises:
        FitError: only one class present, or fewer than 3 observations
    """
    x = np.asarray(z, dtype=float)
    y = _binary(b, "labels").astype(float)
    if x.shape != y.shape:
        raise DimensionError(f"{x.size} scores but {y.size} labels")
    if x.size < 3:
        raise FitError(f"Logistic regression needs at least 3 observations, got {x.size}")
    if y.min() == y.max():
        raise FitError("Logistic regression needs both classes in the labels")
    if not np.all(np.isfinite(x)):
        raise DomainError("Logistic regression needs finite scores")

    separated = _separated(x, y)
    X = np.column_stack([np.ones_like(x), x])
    beta = np.zeros(2)
    converged = False
    iterations = 0
    grad_norm = float("inf")

    for iterations in range(1, max_iter + 1):
        p = special.expit(X @ beta)
        g = X.T @ (y - p)
        grad_norm = float(np.linalg.norm(g))
        if grad_norm < tol and not separated:
            converged = True
            break
        W = np.clip(p * (1.0 - p), 1e-9, None)
        H = (X.T * W) @ X
        try:
            step = np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = np.linalg.solve(H + 1e-6 * np.eye(2), g)
        if not np.all(np.isfinite(step)):
            break
        current = _log_likelihood(X, y, beta)
        for _ in range(MAX_STEP_HALVINGS):
            if _log_likelihood(X, y, beta + step) >= current:
                break
            step = step / 2.0
        beta = beta + step

    p = special.expit(X @ beta)
    W = np.clip(p * (1.0 - p), 1e-9, None)
    info = (X.T * W) @ X
    try:
        cov = np.linalg.inv(info)
        se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    except np.linalg.LinAlgError:
        se = np.full(2, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        wald = np.where(se > 0, (beta / se) ** 2, np.inf)
    log_lik = _log_likelihood(X, y, beta)

    if not converged:
        reason = "classes are separated by the score" if separated else f"no convergence in {max_iter} iterations"
        console.log("WARNING", f"Logistic fit stopped: {reason}")

    return LogisticFit(
        intercept=float(beta[0]),
        slope=float(beta[1]),
        wald_intercept=float(wald[0]),
        wald_slope=float(wald[1]),
        converged=converged,
        iterations=iterations,
        se_intercept=float(se[0]),
        se_slope=float(se[1]),
        log_likelihood=log_lik,
        gradient_norm=grad_norm,
        n=int(x.size),
    )


def score_columns(scored: Sequence[ScoredRecord]) -> Dict[str, List[float]]:
    """Z_A, Z_M and Z_U columns of scored records (Z_A/Z_U only for five-ratio data)."""
    columns = {"Z_M": [r.z_m for r in scored]}
    if scored and all(r.z_a is not None for r in scored):
        columns["Z_A"] = [r.z_a for r in scored]
        columns["Z_U"] = [r.z_u for r in scored]
    return {name: columns[name] for name in ("Z_A", "Z_M", "Z_U") if name in columns}


def compare_logistic(scored: Sequence[ScoredRecord]) -> Dict[str, LogisticFit]:
    """Regress the agency bankruptcy index on each available score."""
    labels = _actual_labels(scored)
    fits = {name: fit_logistic(values, labels) for name, values in score_columns(scored).items()}
    for name, fit in fits.items():
        console.log("EVAL", f"Logistic {name}: slope={fit.slope:.4f} wald={fit.wald_slope:.2f}")
    return fits


# --- variance and rank tests -----------------------------------------------

@dataclass(frozen=True)
class FTestResult:
    f: float
    reject: bool
    critical_value: float
    df_numerator: int
    df_denominator: int
    alpha: float = 0.01

    def to_dict(self) -> Dict[str, Any]:
        return {
            "f": self.f,
            "reject": self.reject,
            "critical_value": self.critical_value,
            "df_numerator": self.df_numerator,
            "df_denominator": self.df_denominator,
            "alpha": self.alpha,
        }


def f_test_variance(a: Sequence[float], b: Sequence[float], alpha: float = 0.01) -> FTestResult:
    """
    Two-sided variance-ratio test: F = larger sample variance / smaller.

    Raises:
        InsufficientSampleError: either sample has fewer than 2 values
        DegenerateSampleError: either sample has zero variance
    """
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.size < 2 or y.size < 2:
        raise DimensionError("F-test needs at least 2 values per sample")
    var_x, var_y = float(np.var(x, ddof=1)), float(np.var(y, ddof=1))
    if var_x == 0.0 or var_y == 0.0:
        raise DegenerateSampleError("F-test is undefined for a zero-variance sample")

    if var_x >= var_y:
        f_value, df_num, df_den = var_x / var_y, x.size - 1, y.size - 1
    else:
        f_value, df_num, df_den = var_y / var_x, y.size - 1, x.size - 1
    critical = float(stats.f.ppf(1.0 - alpha / 2.0, df_num, df_den))
    return FTestResult(f=f_value, reject=f_value > critical, critical_value=critical,
                       df_numerator=df_num, df_denominator=df_den, alpha=alpha)


def spearman_rho(a: Sequence[float], b: Sequence[float]) -> float:
    """Pearson correlation of average ranks."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.size != y.size:
        raise DimensionError(f"Vectors differ in length ({x.size} vs {y.size})")
    if x.size < 3:
        raise DimensionError("Rank correlation needs at least 3 pairs")
    rx = stats.rankdata(x, method="average")
    ry = stats.rankdata(y, method="average")
    dx, dy = rx - rx.mean(), ry - ry.mean()
    denom = np.sqrt(np.sum(dx * dx) * np.sum(dy * dy))
    if denom == 0.0:
        raise DegenerateSampleError("Rank correlation is undefined for a constant vector")
    return float(np.clip(np.sum(dx * dy) / denom, -1.0, 1.0))


# --- threshold sensitivity -------------------------------------------------

@dataclass(frozen=True)
class SweepEntry:
    table: ThresholdTable
    matrix: ClassificationMatrix

    @property
    def worst_error(self) -> float:
        rates = [r for r in (self.matrix.type_i, self.matrix.type_ii) if r is not None]
        return max(rates) if rates else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.table.name, "thresholds": self.table.to_dict(), "matrix": self.matrix.to_dict()}


@dataclass(frozen=True)
class SweepResult:
    entries: Tuple[SweepEntry, ...]
    best: str  # variant minimizing max(Type I, Type II)

    def to_dict(self) -> Dict[str, Any]:
        return {"variants": [e.to_dict() for e in self.entries], "best": self.best}


def threshold_sweep(scored: Sequence[ScoredRecord], variants: Sequence[ThresholdTable]) -> SweepResult:
    """Re-grade stored H values under each table and tabulate the errors."""
    if not scored:
        raise SchemaError("Threshold sweep needs scored records")
    if not variants:
        raise ConfigurationError("Threshold sweep needs at least one table")
    tables = [v if isinstance(v, ThresholdTable) else ThresholdTable.from_dict(v) for v in variants]
    actual = _actual_labels(scored)

    entries = []
    for table in tables:
        matrix = confusion(actual, rating_to_binary_prediction(regrade(scored, table)))
        entries.append(SweepEntry(table=table, matrix=matrix))
        console.log("SWEEP", f"{table.name}: type I={matrix.type_i}, type II={matrix.type_ii}")

    best = min(entries, key=lambda e: e.worst_error)
    return SweepResult(entries=tuple(entries), best=best.table.name)


# --- descriptive tables ----------------------------------------------------

def compare_scores_table(columns: Mapping[str, Sequence[float]]) -> pd.DataFrame:
    """
    Mean, standard deviation (ddof=1) and quartiles per score.

    Quartiles use linear interpolation between order statistics.
    """
    if not columns or any(len(v) == 0 for v in columns.values()):
        raise DimensionError("Descriptive statistics need at least one value per score")
    frame = pd.DataFrame({name: pd.Series(values, dtype=float) for name, values in columns.items()})
    table = pd.DataFrame({
        "mean": frame.mean(),
        "std": frame.std(ddof=1).fillna(0.0),
        "q25": frame.quantile(0.25, interpolation=QUANTILE_METHOD),
        "q50": frame.quantile(0.50, interpolation=QUANTILE_METHOD),
        "q75": frame.quantile(0.75, interpolation=QUANTILE_METHOD),
    })
    table.index.name = "score"
    return table


def normality_comparison(records: Sequence[RatioRecord], column_names: Sequence[str]) -> pd.DataFrame:
    """Skewness and raw kurtosis of each ratio before and after the signed-log transform."""
    raw = np.asarray([r.ratios for r in records], dtype=float)
    if raw.ndim != 2 or raw.shape[1] != len(column_names):
        raise DimensionError(f"Expected {len(column_names)} ratio columns")
    transformed = signed_log_array(raw)
    rows = []
    for k, name in enumerate(column_names):
        before = moment_stats(raw[:, k])
        after = moment_stats(transformed[:, k])
        rows.append({
            "ratio": name,
            "skewness_raw": before.skewness,
            "kurtosis_raw": before.kurtosis,
            "skewness_transformed": after.skewness,
            "kurtosis_transformed": after.kurtosis,
        })
    return pd.DataFrame(rows).set_index("ratio")


# --- hold-out protocol -----------------------------------------------------

def holdout_split(strata: Sequence[Any], fraction: float = 0.7, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stratified random split: `fraction` of every stratum goes to training.

    Returns sorted (train, test) index arrays.
    """
    if not 0.0 < fraction < 1.0:
        raise ConfigurationError(f"Hold-out fraction must lie in (0, 1), got {fraction}")
    rng = np.random.default_rng(seed)
    keys = list(strata)
    groups: Dict[Any, List[int]] = {}
    for i, key in enumerate(keys):
        groups.setdefault(key, []).append(i)

    train: List[int] = []
    for key in sorted(groups, key=repr):
        members = np.asarray(groups[key])
        shuffled = rng.permutation(members)
        cut = int(round(fraction * len(members)))
        train.extend(shuffled[:cut].tolist())
    train_idx = np.sort(np.asarray(train, dtype=int))
    test_idx = np.setdiff1d(np.arange(len(keys)), train_idx)
    if train_idx.size == 0 or test_idx.size == 0:
        raise ConfigurationError("Hold-out split left an empty training or test set")
    return train_idx, test_idx


@dataclass(frozen=True)
class HoldoutResult:
    matrix: ClassificationMatrix
    n_train: int
    n_test: int
    seed: int
    fraction: float
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "matrix": self.matrix.to_dict(),
            "n_train": self.n_train,
            "n_test": self.n_test,
            "seed": self.seed,
            "fraction": self.fraction,
            **self.details,
        }


def _graded(records: Sequence[RatioRecord]) -> List[RatioRecord]:
    records = list(records)
    if any(r.grade is None for r in records):
        raise SchemaError("Hold-out evaluation needs a grade on every record")
    return records


def _top_up_industries(industries: Sequence[int], train_idx: np.ndarray,
                       test_idx: np.ndarray) -> Tuple[np.ndarray, np.ndarray, List[int]]:
    """Move test rows into training until every industry has MIN_INDUSTRY_SIZE training rows."""
    train = set(train_idx.tolist())
    topped_up = []
    for industry in sorted(set(industries)):
        members = [i for i, k in enumerate(industries) if k == industry]
        short = MIN_INDUSTRY_SIZE - sum(1 for i in members if i in train)
        if short <= 0:
            continue
        borrowed = [i for i in members if i not in train][:short]
        train.update(borrowed)
        topped_up.append(int(industry))
        console.log("WARNING", f"Industry {industry}: {len(borrowed)} test row(s) moved to training "
                               f"to reach {MIN_INDUSTRY_SIZE} training records")
    new_train = np.asarray(sorted(train), dtype=int)
    new_test = np.setdiff1d(test_idx, new_train)
    if new_test.size == 0:
        raise ConfigurationError("Hold-out split left an empty test set after topping up small industries")
    return new_train, new_test, topped_up


def mda_holdout(records: Sequence[RatioRecord], fraction: float = 0.7, seed: int = 0,
                column_names: Optional[Sequence[str]] = None) -> HoldoutResult:
    """Discriminant classifier (midpoint cutoff) fitted on the training split, scored on the test split."""
    records = _graded(records)
    labels = [r.bankruptcy for r in records]
    train_idx, test_idx = holdout_split(labels, fraction, seed)
    transformed = [tr.values for tr in transform_records(records)]

    model = fit_mda([transformed[i] for i in train_idx], [labels[i] for i in train_idx],
                    column_names=column_names)
    predicted = [model.predict_bankrupt(model.score(transformed[i])) for i in test_idx]
    matrix = confusion([labels[i] for i in test_idx], predicted)
    console.log("EVAL", f"MDA hold-out accuracy {matrix.accuracy:.4f} on {len(test_idx)} records")
    return HoldoutResult(matrix=matrix, n_train=len(train_idx), n_test=len(test_idx), seed=seed, fraction=fraction,
                         details={"cutoff": model.cutoff})


def pipeline_holdout(records: Sequence[RatioRecord], thresholds: Optional[ThresholdTable] = None,
                     fraction: float = 0.7, seed: int = 0, workers: int = 1,
                     column_names: Optional[Sequence[str]] = None) -> HoldoutResult:
    """
    Rating-based hold-out: fit weights and per-industry P3 on the training
    split, rate the test split, collapse grades to the bankruptcy index.

    The split is stratified by (bankruptcy index, industry) so every test
    industry has a fit. Industries left with fewer than MIN_INDUSTRY_SIZE
    training rows borrow test rows until they reach it.
    """
    records = _graded(records)
    train_idx, test_idx = holdout_split([(r.bankruptcy, r.industry) for r in records], fraction, seed)
    train_idx, test_idx, topped_up = _top_up_industries([r.industry for r in records], train_idx, test_idx)
    fitted = run_pipeline([records[i] for i in train_idx], thresholds=thresholds, workers=workers,
                          column_names=column_names)
    test = [records[i] for i in test_idx]
    scored = score_new(test, fitted.model, fitted.fits, fitted.thresholds)
    matrix = confusion([r.bankruptcy for r in test], [s.b_predicted for s in scored])
    console.log("EVAL", f"Rating hold-out accuracy {matrix.accuracy:.4f} on {len(test)} records")
    return HoldoutResult(matrix=matrix, n_train=len(train_idx), n_test=len(test_idx), seed=seed, fraction=fraction,
                         details={"thresholds": fitted.thresholds.name, "topped_up_industries": topped_up})


@dataclass(frozen=True)
class ScoreCutoff:
    """Univariate discriminant rule on one score: midpoint of the training class means."""
    cutoff: float
    bankrupt_below: bool

    @classmethod
    def fit(cls, scores: Sequence[float], labels: Sequence[int]) -> "ScoreCutoff":
        z = np.asarray(scores, dtype=float)
        b = _binary(labels, "labels")
        if not (b == 0).any() or not (b == 1).any():
            raise FitError("Score cutoff needs both classes in the training split")
        mean_solvent = float(z[b == 0].mean())
        mean_bankrupt = float(z[b == 1].mean())
        return cls(cutoff=0.5 * (mean_solvent + mean_bankrupt), bankrupt_below=mean_bankrupt <= mean_solvent)

    def predict(self, z: float) -> int:
        return int(z < self.cutoff) if self.bankrupt_below else int(z > self.cutoff)


def score_holdout(records: Sequence[RatioRecord], fraction: float = 0.7, seed: int = 0,
                  column_names: Optional[Sequence[str]] = None) -> Dict[str, HoldoutResult]:
    """
    Classify the bankruptcy index from each score on one seeded split.

    Z_M weights come from the discriminant fit on the training split; Z_A and
    Z_U keep their fixed weights on raw ratios and are only compared when
    the data has five ratios. Every score gets its own midpoint cutoff from
    the training class means.
    """
    records = _graded(records)
    labels = [r.bankruptcy for r in records]
    train_idx, test_idx = holdout_split(labels, fraction, seed)
    transformed = [tr.values for tr in transform_records(records)]
    model = fit_mda([transformed[i] for i in train_idx], [labels[i] for i in train_idx],
                    column_names=column_names)

    variants = {"Z_M": ZScoreVariant.nonlinear(model.weights)}
    if records[0].t == len(ALTMAN_WEIGHTS):
        variants = {"Z_A": ZScoreVariant.altman(), "Z_M": variants["Z_M"], "Z_U": ZScoreVariant.updated()}

    results: Dict[str, HoldoutResult] = {}
    for name, variant in variants.items():
        scores = [z_score(variant, r.ratios) for r in records]
        rule = ScoreCutoff.fit([scores[i] for i in train_idx], [labels[i] for i in train_idx])
        matrix = confusion([labels[i] for i in test_idx], [rule.predict(scores[i]) for i in test_idx])
        results[name] = HoldoutResult(matrix=matrix, n_train=len(train_idx), n_test=len(test_idx), seed=seed,
                                      fraction=fraction,
                                      details={"cutoff": rule.cutoff, "bankrupt_below": rule.bankrupt_below})
    console.log("EVAL", "Score hold-out accuracy " + ", ".join(
        f"{name} {result.matrix.accuracy:.4f}" for name, result in results.items()))
    return results
