"""Quantify how similar a model's learned strategy is to the physics baseline.

Both models are explained on the same probe rows with the same reference
point; per feature, the Pearson correlation between the two attribution
series measures structural agreement without penalizing absolute offsets.
The weighted sum over features (``r2_phys``) is the model-selection score;
weights default to 0.8 / 0.15 / 0.05 (16:3:1) reflecting the dominant role
of wind speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DataError
from .scada import FeatureMatrix
from .xai import ReferencePoint, attribute_rows

PAPER_WEIGHTS = (0.8, 0.15, 0.05)
_DEGENERATE_STD = 1e-12


def _pearson(a, b):
    if np.array_equal(a, b):
        # Identical series (e.g. a model compared against itself) score an
        # exact 1 rather than a correlation one ulp off.
        return 1.0, False
    sa, sb = float(np.std(a)), float(np.std(b))
    if sa <= _DEGENERATE_STD and sb <= _DEGENERATE_STD:
        return 0.0, True
    if sa <= _DEGENERATE_STD or sb <= _DEGENERATE_STD:
        return 0.0, True
    r = float(np.corrcoef(a, b)[0, 1])
    return min(1.0, max(-1.0, r)), False


def r2_feature(attr_model, attr_physics):
    """Per-feature correlation between two attribution matrices (n, d).

    Returns (correlations, degenerate_flags).  A zero-variance series on
    either side scores 0 and is flagged: a model that ignores a feature has
    no structural agreement with the baseline on it.
    """
    a = np.asarray(attr_model, dtype=float)
    b = np.asarray(attr_physics, dtype=float)
    if a.shape != b.shape:
        raise DataError("attribution matrices must have identical shapes")
    if a.shape[0] < 3:
        raise DataError("need at least 3 probe rows for a correlation")
    correlations, flags = [], []
    for j in range(a.shape[1]):
        r, degenerate = _pearson(a[:, j], b[:, j])
        correlations.append(r)
        flags.append(degenerate)
    return tuple(correlations), tuple(flags)


def r2_phys(correlations, weights=PAPER_WEIGHTS, *, squared: bool = False) -> float:
    """Weighted sum of per-feature strategy correlations.

    ``squared=True`` aggregates squared correlations instead of the plain
    (signed) coefficients.
    """
    corr = np.asarray(correlations, dtype=float)
    w = np.asarray(weights, dtype=float)
    if corr.shape != w.shape:
        raise ConfigurationError("one weight per feature correlation is required")
    if abs(float(w.sum()) - 1.0) > 1e-9:
        raise ConfigurationError("weights must sum to 1")
    if squared:
        corr = corr ** 2
    return float(np.dot(w, corr))


@dataclass(frozen=True)
class StrategyReport:
    """Per-feature strategy correlations plus the weighted similarity score."""

    feature_names: tuple
    correlations: tuple
    degenerate_flags: tuple
    weights: tuple
    r2_phys: float
    probe_size: int
    reference_kind: str
    model_kind: str
    model_metadata: dict = field(default_factory=dict)

    def correlation(self, feature: str) -> float:
        return self.correlations[self.feature_names.index(feature)]


@dataclass(frozen=True)
class SelectionCriterion:
    """Two-criterion gate: a strategy threshold plus a combined score."""

    min_r2_phys: float = 0.95
    rmse_weight: float = 0.5
    strategy_weight: float = 0.5

    def __post_init__(self):
        if self.rmse_weight < 0.0 or self.strategy_weight < 0.0:
            raise ConfigurationError("criterion weights must be non-negative")


@dataclass(frozen=True)
class ModelCandidate:
    """One trained model in the selection pool."""

    model_id: str
    seed: int
    rmse: float
    report: StrategyReport


@dataclass(frozen=True)
class SelectionResult:
    ranked: tuple
    rejected: tuple
    scores: dict


def evaluate_strategy(model, physics, probe: FeatureMatrix,
                      reference: ReferencePoint,
                      weights=PAPER_WEIGHTS) -> StrategyReport:
    """Compare a model's attribution pattern to the physics baseline's.

    Both models are attributed on the same probe rows under the same
    reference point; deterministic models give a deterministic report.
    """
    attr_model = attribute_rows(model, probe, reference)
    attr_phys = attribute_rows(physics, probe, reference)
    correlations, flags = r2_feature(attr_model.values, attr_phys.values)
    score = r2_phys(correlations, weights)
    return StrategyReport(
        feature_names=probe.feature_names,
        correlations=correlations,
        degenerate_flags=flags,
        weights=tuple(float(w) for w in weights),
        r2_phys=score,
        probe_size=probe.n_rows,
        reference_kind=reference.kind,
        model_kind=model.kind,
        model_metadata=model.metadata,
    )


def select_model(candidates, criterion: SelectionCriterion = SelectionCriterion()) \
        -> SelectionResult:
    """Reject candidates below the strategy threshold and rank the rest.

    Survivors are ranked by ``rmse_weight * normalized RMSE -
    strategy_weight * r2_phys`` (lower is better); the RMSE normalization is
    min-max over the candidate pool, so the ranking is invariant under a
    uniform rescaling of all RMSEs.  Ties break toward higher r2_phys, then
    lower seed.  An empty survivor list is a legal outcome.
    """
    candidates = list(candidates)
    if not candidates:
        raise ConfigurationError("candidate list must not be empty")
    rejected = tuple(c for c in candidates
                     if c.report.r2_phys < criterion.min_r2_phys)
    survivors = [c for c in candidates if c.report.r2_phys >= criterion.min_r2_phys]

    rmses = np.array([c.rmse for c in survivors]) if survivors else np.array([])
    if survivors:
        lo, hi = float(rmses.min()), float(rmses.max())
        span = hi - lo
        normalized = (rmses - lo) / span if span > 0.0 else np.zeros_like(rmses)
    scores = {}
    for c, norm in zip(survivors, normalized if survivors else []):
        scores[c.model_id] = (criterion.rmse_weight * float(norm)
                              - criterion.strategy_weight * c.report.r2_phys)
    ranked = tuple(sorted(
        survivors,
        key=lambda c: (scores[c.model_id], -c.report.r2_phys, c.seed),
    ))
    return SelectionResult(ranked=ranked, rejected=rejected, scores=scores)
