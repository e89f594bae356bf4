#!/usr/bin/env python3
"""
Discriminant Scores
===================

Two-group Fisher discriminant fitted on signed-log transformed ratios against
the bankruptcy index, plus the fixed-weight Altman and updated Z-scores.

Normalization convention (recorded in every fitted model):
    weights w = S_pooled^-1 (mu_solvent - mu_bankrupt), scaled so that the
    pooled within-class variance of the scores w'S w equals 1. Solvent firms
    therefore score higher than bankrupt firms on average.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from .errors import ConfigurationError, DimensionError, FitError, NumericalError
from .transform import signed_log

NORMALIZATION = "unit-pooled-variance/solvent-high"
INJECTED = "injected"
RIDGE_FACTOR = 1e-8

ALTMAN_WEIGHTS = (1.2, 1.4, 3.3, 0.6, 0.999)
UPDATED_WEIGHTS = (0.72, 0.85, 3.1, 0.42, 1.0)


class ZScoreKind(Enum):
    ALTMAN = "altman"
    UPDATED = "updated"
    NONLINEAR_M = "nonlinear_m"


class AltmanZone(Enum):
    SAFE = "safe"
    GREY = "grey"
    DISTRESS = "distress"


@dataclass(frozen=True)
class ZScoreVariant:
    """A member of the Z-score family with optional fixed weights."""
    kind: ZScoreKind
    fixed_weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind is ZScoreKind.ALTMAN and tuple(self.fixed_weights or ()) != ALTMAN_WEIGHTS:
            raise ConfigurationError(f"Altman weights are fixed at {ALTMAN_WEIGHTS}")
        if self.kind is ZScoreKind.UPDATED and tuple(self.fixed_weights or ()) != UPDATED_WEIGHTS:
            raise ConfigurationError(f"Updated weights are fixed at {UPDATED_WEIGHTS}")
        if self.fixed_weights is not None:
            object.__setattr__(self, "fixed_weights", tuple(float(w) for w in self.fixed_weights))

    @classmethod
    def altman(cls) -> "ZScoreVariant":
        return cls(ZScoreKind.ALTMAN, ALTMAN_WEIGHTS)

    @classmethod
    def updated(cls) -> "ZScoreVariant":
        return cls(ZScoreKind.UPDATED, UPDATED_WEIGHTS)

    @classmethod
    def nonlinear(cls, weights: Sequence[float]) -> "ZScoreVariant":
        return cls(ZScoreKind.NONLINEAR_M, tuple(weights))

    @property
    def uses_raw_ratios(self) -> bool:
        return self.kind is not ZScoreKind.NONLINEAR_M


@dataclass(frozen=True)
class DiscriminantModel:
    """Weight vector for Z_M plus the fit diagnostics it came from."""
    weights: Tuple[float, ...]
    normalization: str = NORMALIZATION
    mean_solvent: Optional[Tuple[float, ...]] = None
    mean_bankrupt: Optional[Tuple[float, ...]] = None
    pooled_scatter: Optional[Tuple[Tuple[float, ...], ...]] = None
    cutoff: Optional[float] = None
    n_solvent: int = 0
    n_bankrupt: int = 0

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "DiscriminantModel":
        """Wrap externally supplied weights (e.g. published ones)."""
        return cls(weights=tuple(float(w) for w in weights), normalization=INJECTED)

    @property
    def t(self) -> int:
        return len(self.weights)

    @property
    def group_means(self) -> Tuple[Optional[Tuple[float, ...]], Optional[Tuple[float, ...]]]:
        """(non-bankrupt mean, bankrupt mean) of the transformed ratios."""
        return self.mean_solvent, self.mean_bankrupt

    def score(self, transformed_values: Sequence[float]) -> float:
        return z_score(self, transformed_values, transformed=True)

    def predict_bankrupt(self, z_m: float) -> int:
        """MDA classification: bankrupt when the score falls below the cutoff."""
        if self.cutoff is None:
            raise ConfigurationError("Model has no classification cutoff (injected weights)")
        return int(z_m < self.cutoff)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "normalization": self.normalization,
            "weights": list(self.weights),
            "mean_solvent": None if self.mean_solvent is None else list(self.mean_solvent),
            "mean_bankrupt": None if self.mean_bankrupt is None else list(self.mean_bankrupt),
            "cutoff": self.cutoff,
            "n_solvent": self.n_solvent,
            "n_bankrupt": self.n_bankrupt,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DiscriminantModel":
        weights = tuple(float(w) for w in data["weights"])
        if "t" in data and int(data["t"]) != len(weights):
            raise DimensionError(f"Model declares t={data['t']} but has {len(weights)} weights")

        def _vector(key):
            value = data.get(key)
            return None if value is None else tuple(float(v) for v in value)

        cutoff = data.get("cutoff")
        return cls(
            weights=weights,
            normalization=data.get("normalization", NORMALIZATION),
            mean_solvent=_vector("mean_solvent"),
            mean_bankrupt=_vector("mean_bankrupt"),
            cutoff=None if cutoff is None else float(cutoff),
            n_solvent=int(data.get("n_solvent", 0)),
            n_bankrupt=int(data.get("n_bankrupt", 0)),
        )


def fit_mda(values, labels, column_names: Optional[Sequence[str]] = None,
            ridge: float = RIDGE_FACTOR) -> DiscriminantModel:
    """
    Fit the two-group Fisher discriminant.

    Args:
        values: n x t matrix of transformed ratios
        labels: n bankruptcy indices (1 = bankrupt)
        column_names: names used in error messages
        ridge: ridge term as a fraction of trace(S)/t

    Returns:
        DiscriminantModel with the NORMALIZATION convention

    Raises:
        FitError: fewer than 2 records in either class
        NumericalError: pooled scatter singular even after the ridge term
    """
    X = np.asarray(values, dtype=float)
    y = np.asarray(labels, dtype=int)
    if X.ndim != 2 or X.shape[1] < 1:
        raise DimensionError("fit_mda expects an n x t matrix with t >= 1")
    if y.shape != (X.shape[0],):
        raise DimensionError(f"{X.shape[0]} rows but {y.size} labels")
    t = X.shape[1]
    names = list(column_names) if column_names is not None else [f"x{k + 1}" for k in range(t)]

    solvent = X[y == 0]
    bankrupt = X[y == 1]
    if len(solvent) < 2 or len(bankrupt) < 2:
        raise FitError(
            f"MDA needs at least 2 records per class (non-bankrupt={len(solvent)}, bankrupt={len(bankrupt)})"
        )

    mu0 = solvent.mean(axis=0)
    mu1 = bankrupt.mean(axis=0)
    d0 = solvent - mu0
    d1 = bankrupt - mu1
    scatter = (d0.T @ d0 + d1.T @ d1) / (len(X) - 2)
    scatter = (scatter + scatter.T) / 2.0

    dead = [names[k] for k in range(t) if scatter[k, k] <= 0.0]
    if dead:
        raise NumericalError("Pooled scatter is singular: zero within-class variance", columns=dead)

    regularized = scatter + ridge * np.trace(scatter) / t * np.eye(t)
    try:
        factor = linalg.cho_factor(regularized)
    except linalg.LinAlgError:
        eigvals, eigvecs = np.linalg.eigh(regularized)
        loading = np.abs(eigvecs[:, 0])
        offending = [names[k] for k in range(t) if loading[k] > 0.1]
        raise NumericalError("Pooled scatter is singular after regularization", columns=offending) from None

    direction = linalg.cho_solve(factor, mu0 - mu1)
    spread = float(direction @ scatter @ direction)
    if not np.isfinite(spread) or spread <= 0.0:
        raise NumericalError("Discriminant direction has zero pooled variance", columns=names)
    weights = direction / np.sqrt(spread)

    cutoff = 0.5 * (float(mu0 @ weights) + float(mu1 @ weights))
    return DiscriminantModel(
        weights=tuple(float(w) for w in weights),
        normalization=NORMALIZATION,
        mean_solvent=tuple(float(m) for m in mu0),
        mean_bankrupt=tuple(float(m) for m in mu1),
        pooled_scatter=tuple(tuple(float(v) for v in row) for row in scatter),
        cutoff=cutoff,
        n_solvent=len(solvent),
        n_bankrupt=len(bankrupt),
    )


def z_score(model_or_variant: Union[DiscriminantModel, ZScoreVariant],
            ratios: Sequence[float], transformed: bool = False) -> float:
    """
    Score one ratio vector.

    Z_A and Z_U weight RAW ratios. Z_M weights transformed ratios: pass
    transformed=True when the vector is already transformed, otherwise the
    signed-log transform is applied here.

    Raises:
        DimensionError: ratio vector and weights differ in length
    """
    if isinstance(model_or_variant, ZScoreVariant):
        weights = model_or_variant.fixed_weights
        raw_only = model_or_variant.uses_raw_ratios
        if weights is None:
            raise ConfigurationError(f"Z-score variant {model_or_variant.kind.value} has no weights")
    else:
        weights = model_or_variant.weights
        raw_only = False

    values = [float(x) for x in ratios]
    if len(values) != len(weights):
        raise DimensionError(f"Ratio vector has length {len(values)}, weights have length {len(weights)}")
    if raw_only:
        if transformed:
            raise ConfigurationError("Altman-type scores are defined on raw ratios only")
    elif not transformed:
        values = [signed_log(x) for x in values]
    return float(np.dot(np.asarray(values), np.asarray(weights, dtype=float)))


def altman_zone(z: float) -> AltmanZone:
    if z >= 2.99:
        return AltmanZone.SAFE
    if z >= 1.81:
        return AltmanZone.GREY
    return AltmanZone.DISTRESS
