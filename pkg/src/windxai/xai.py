"""Exact baseline-replacement Shapley attributions for power curve models.

A feature is "removed" by replacing its value with the reference point, so an
attribution is the average marginal effect of switching that feature from the
reference to the observed value, over all feature subsets.  Attributions are
in kW and sum to ``f(x) - f(reference)`` (completeness).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, ConfigurationError, DataError
from .scada import WIND_SPEED, YAW_MISALIGNMENT, FeatureMatrix, MinMaxScaler

#: 2^N model evaluations per explained row; beyond this a sampling
#: approximation would be needed, which this package does not provide.
MAX_EXACT_FEATURES = 16

REFERENCE_KINDS = ("zeros", "train_minimum", "train_mean", "informed_conditional")


@dataclass(frozen=True)
class Attribution:
    """Per-feature relevance of one explained row."""

    feature_names: tuple
    per_feature: np.ndarray
    model_output: float
    reference_output: float

    @property
    def completeness_residual(self) -> float:
        """Measured violation of sum(R) = f(x) - f(reference), in kW."""
        return float(np.sum(self.per_feature)
                     - (self.model_output - self.reference_output))

    def as_dict(self) -> dict:
        return dict(zip(self.feature_names, self.per_feature.tolist()))


@dataclass(frozen=True)
class AttributionBatch:
    """Attributions of many rows: one row of ``values`` per explained input."""

    feature_names: tuple
    values: np.ndarray
    model_output: np.ndarray
    reference_output: np.ndarray

    @property
    def completeness_residuals(self) -> np.ndarray:
        return self.values.sum(axis=1) - (self.model_output - self.reference_output)

    def __len__(self) -> int:
        return self.values.shape[0]

    def single(self, index: int) -> Attribution:
        return Attribution(
            feature_names=self.feature_names,
            per_feature=self.values[index],
            model_output=float(self.model_output[index]),
            reference_output=float(self.reference_output[index]),
        )


def shapley_values(predict, rows, reference, feature_names=None) -> AttributionBatch:
    """Exact Shapley attributions of ``predict`` for a batch of rows.

    ``reference`` is either one vector (d,) applied to every row or a
    per-row matrix (n, d).  All 2^d feature subsets are evaluated with one
    batched ``predict`` call each.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n, d = rows.shape
    if d > MAX_EXACT_FEATURES:
        raise CapabilityError(
            f"exact Shapley enumerates 2^{d} subsets; more than "
            f"{MAX_EXACT_FEATURES} features would need a sampling approximation")
    reference = np.asarray(reference, dtype=float)
    if reference.ndim == 1:
        reference = np.broadcast_to(reference, rows.shape)
    if reference.shape != rows.shape:
        raise DataError("reference shape must match the explained rows")
    if feature_names is None:
        feature_names = tuple(f"feature_{i}" for i in range(d))

    predictions = np.empty((2 ** d, n))
    for mask in range(2 ** d):
        bits = np.array([(mask >> j) & 1 for j in range(d)], dtype=bool)
        predictions[mask] = predict(np.where(bits[None, :], rows, reference))

    weights = [math.factorial(s) * math.factorial(d - 1 - s) / math.factorial(d)
               for s in range(d)]
    values = np.zeros((n, d))
    for i in range(d):
        bit = 1 << i
        for mask in range(2 ** d):
            if mask & bit:
                continue
            size = bin(mask).count("1")
            values[:, i] += weights[size] * (predictions[mask | bit]
                                             - predictions[mask])

    return AttributionBatch(
        feature_names=tuple(feature_names),
        values=values,
        model_output=predictions[2 ** d - 1],
        reference_output=predictions[0],
    )


# ---------------------------------------------------------------------------
# Reference points


@dataclass(frozen=True)
class ReferencePoint:
    """Baseline input relative to which attributions are computed.

    Static kinds hold one scaled vector; the informed kind resolves a
    per-row reference from conditional-expectation tables E[x_i | v_w]
    (with selected features pinned to fixed values, e.g. zero yaw
    misalignment as the healthy baseline).
    """

    kind: str
    feature_names: tuple
    scaler: MinMaxScaler
    values: np.ndarray | None = None
    table_speeds: np.ndarray | None = None
    table_values: np.ndarray | None = None
    pinned_scaled: dict | None = None

    def resolve(self, rows) -> np.ndarray:
        """Reference rows (scaled space) for the given probe rows."""
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        if self.kind != "informed_conditional":
            return np.broadcast_to(self.values, rows.shape)
        i = self.feature_names.index(WIND_SPEED)
        v_raw = rows[:, i] * (self.scaler.maximums[i] - self.scaler.minimums[i]) \
            + self.scaler.minimums[i]
        out = np.empty_like(rows)
        for j in range(rows.shape[1]):
            out[:, j] = np.interp(v_raw, self.table_speeds, self.table_values[:, j])
        # Conditioning on the measured wind speed leaves the wind speed
        # feature itself at its observed value.
        out[:, i] = rows[:, i]
        for j, value in (self.pinned_scaled or {}).items():
            out[:, j] = value
        return out


def build_reference(kind: str, train: FeatureMatrix, *, bin_width: float = 0.5,
                    pin: dict | None = None) -> ReferencePoint:
    """Construct a reference point from training data.

    ``zeros`` is the origin of the scaled space (the training minimum when
    the scaler was fitted on this data), ``train_minimum``/``train_mean``
    are per-feature statistics, and ``informed_conditional`` bins the
    training rows by wind speed (``bin_width`` m/s) and interpolates the
    per-bin feature means.  ``pin`` maps feature names to fixed values in
    physical units; with a yaw feature present it defaults to zero yaw.
    """
    if kind not in REFERENCE_KINDS:
        raise ConfigurationError(f"unknown reference kind '{kind}'")
    if train.n_rows == 0:
        raise DataError("cannot build a reference from an empty training set")

    if kind == "zeros":
        return ReferencePoint(kind=kind, feature_names=train.feature_names,
                              scaler=train.scaler,
                              values=np.zeros(train.n_features))
    if kind == "train_minimum":
        return ReferencePoint(kind=kind, feature_names=train.feature_names,
                              scaler=train.scaler,
                              values=train.rows.min(axis=0))
    if kind == "train_mean":
        return ReferencePoint(kind=kind, feature_names=train.feature_names,
                              scaler=train.scaler,
                              values=train.rows.mean(axis=0))

    if bin_width <= 0.0:
        raise ConfigurationError("bin width must be positive")
    if pin is None:
        pin = {YAW_MISALIGNMENT: 0.0} if YAW_MISALIGNMENT in train.feature_names \
            else {}
    pinned_scaled = {}
    for name, raw_value in pin.items():
        j = train.feature_names.index(name)
        span = train.scaler.maximums[j] - train.scaler.minimums[j]
        pinned_scaled[j] = (float(raw_value) - train.scaler.minimums[j]) / span

    # Bins are centred on multiples of the bin width, so the table value at
    # a centre is exactly the mean over rows with v in [c - w/2, c + w/2).
    v_raw = train.raw_column(WIND_SPEED)
    k_min = math.floor(float(v_raw.min()) / bin_width + 0.5)
    k_max = math.floor(float(v_raw.max()) / bin_width + 0.5)
    n_bins = k_max - k_min + 1
    index = np.clip(np.floor(v_raw / bin_width + 0.5).astype(int) - k_min,
                    0, n_bins - 1)

    centers = (k_min + np.arange(n_bins)) * bin_width
    sums = np.zeros((n_bins, train.n_features))
    counts = np.zeros(n_bins)
    np.add.at(sums, index, train.rows)
    np.add.at(counts, index, 1.0)
    occupied = counts > 0
    if not np.all(occupied):
        warnings.warn("empty wind speed bins in conditional reference table; "
                      "filled from nearest occupied bins")
        occupied_idx = np.flatnonzero(occupied)
        nearest = occupied_idx[np.argmin(
            np.abs(np.arange(n_bins)[:, None] - occupied_idx[None, :]), axis=1)]
        sums = sums[nearest]
        counts = counts[nearest]
    means = sums / counts[:, None]

    return ReferencePoint(kind=kind, feature_names=train.feature_names,
                          scaler=train.scaler, table_speeds=centers,
                          table_values=means, pinned_scaled=pinned_scaled)


def shapley_exact(model, x, reference: ReferencePoint) -> Attribution:
    """Exact Shapley attribution of one feature row against a reference point."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    batch = shapley_values(model.predict, x, reference.resolve(x),
                           feature_names=reference.feature_names)
    return batch.single(0)


def attribute_rows(model, fm: FeatureMatrix, reference: ReferencePoint) -> AttributionBatch:
    """Attributions of every row of a feature matrix under one reference point."""
    return shapley_values(model.predict, fm.rows, reference.resolve(fm.rows),
                          feature_names=fm.feature_names)


# ---------------------------------------------------------------------------
# Conditional aggregation


@dataclass(frozen=True)
class ConditionalAttributionProfile:
    """Per wind-speed-bin summary of attribution distributions P(R_i | v_w)."""

    feature_names: tuple
    bin_edges: np.ndarray
    counts: np.ndarray
    mean: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray

    def to_rows(self) -> list:
        """Tidy long-format rows (one per bin and feature) for plotting."""
        rows = []
        for b in range(len(self.counts)):
            if self.counts[b] == 0:
                continue
            center = 0.5 * (self.bin_edges[b] + self.bin_edges[b + 1])
            for j, name in enumerate(self.feature_names):
                rows.append({
                    "bin_center": float(center),
                    "feature": name,
                    "count": int(self.counts[b]),
                    "mean": float(self.mean[b, j]),
                    "min": float(self.minimum[b, j]),
                    "max": float(self.maximum[b, j]),
                })
        return rows


def conditional_profile(attributions: AttributionBatch, wind_speeds,
                        bin_width: float = 0.5) -> ConditionalAttributionProfile:
    """Aggregate attributions into wind speed bins (mean/min/max per feature)."""
    v = np.asarray(wind_speeds, dtype=float)
    if v.shape[0] != len(attributions):
        raise DataError("wind speeds and attributions must have equal length")
    if bin_width <= 0.0:
        raise ConfigurationError("bin width must be positive")
    start = math.floor(float(v.min()) / bin_width) * bin_width
    n_bins = max(1, int(math.ceil((float(v.max()) - start) / bin_width)) + 1)
    index = np.clip(((v - start) / bin_width).astype(int), 0, n_bins - 1)
    edges = start + np.arange(n_bins + 1) * bin_width

    d = attributions.values.shape[1]
    counts = np.zeros(n_bins)
    mean = np.full((n_bins, d), np.nan)
    minimum = np.full((n_bins, d), np.nan)
    maximum = np.full((n_bins, d), np.nan)
    for b in range(n_bins):
        members = index == b
        counts[b] = members.sum()
        if counts[b]:
            block = attributions.values[members]
            mean[b] = block.mean(axis=0)
            minimum[b] = block.min(axis=0)
            maximum[b] = block.max(axis=0)
    return ConditionalAttributionProfile(
        feature_names=attributions.feature_names,
        bin_edges=edges, counts=counts, mean=mean,
        minimum=minimum, maximum=maximum,
    )
