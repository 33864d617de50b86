"""Ingest, filter, scale, split and synthesize 10-minute SCADA datasets.

A dataset is a list of immutable :class:`ScadaRecord` values sorted by
timestamp.  All operations here are pure transformations: they never mutate
their inputs and are safe to share across parallel experiment workers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone

import numpy as np
import pandas as pd

from .errors import ConfigurationError, DataError, DomainError, SchemaError
from .physics import (
    NominalPowerCurve,
    air_density,
    phys_base_predict,
    yaw_power_factor,
)

TEN_MINUTES = timedelta(minutes=10)

#: Canonical feature order used by every model in the package.
WIND_SPEED = "wind_speed"
AIR_DENSITY = "air_density"
TURBULENCE = "turbulence_intensity"
YAW_MISALIGNMENT = "yaw_misalignment"
BASE_FEATURES = (WIND_SPEED, AIR_DENSITY, TURBULENCE)

_NUMERIC_FIELDS = (
    "wind_speed_mean", "wind_speed_std", "air_temperature", "air_pressure",
    "rel_humidity", "power_output", "nacelle_direction", "wind_direction",
)


@dataclass(frozen=True)
class ScadaRecord:
    """One 10-minute SCADA sample.

    Temperatures in kelvin, pressure in pascal, humidity as a fraction,
    power in kW, directions in degrees.  ``status_ok`` is the log-derived
    normal-operation flag (curtailments and stoppages are pre-resolved into
    this boolean by the loader).
    """

    timestamp: datetime
    wind_speed_mean: float
    wind_speed_std: float
    air_temperature: float
    air_pressure: float
    rel_humidity: float
    power_output: float
    nacelle_direction: float
    wind_direction: float
    status_ok: bool = True

    def __post_init__(self):
        if self.wind_speed_mean < 0.0 or self.wind_speed_std < 0.0:
            raise DataError("wind speed statistics must be non-negative")
        if self.rel_humidity < 0.0 or self.rel_humidity > 1.0:
            raise DataError("relative humidity must lie in [0, 1]")


def angular_difference(a_deg, b_deg):
    """Smallest absolute angle [deg] between two directions, in [0, 180]."""
    return np.abs((np.asarray(a_deg, dtype=float) - np.asarray(b_deg, dtype=float)
                   + 180.0) % 360.0 - 180.0)


# ---------------------------------------------------------------------------
# CSV ingest / export


@dataclass(frozen=True)
class ColumnSpec:
    """Maps one record field to a CSV column with an affine unit conversion."""

    name: str | None
    scale: float = 1.0
    offset: float = 0.0
    default: float | None = None  # used when the column is absent


@dataclass(frozen=True)
class CsvSchema:
    """Column mapping for a SCADA CSV file.

    ``status_column`` holds raw status values; a row counts as normal
    operation when its value (as text) is in ``status_ok_values``.  Without a
    status column every row is assumed operational.
    """

    timestamp: str
    columns: dict
    status_column: str | None = None
    status_ok_values: tuple = ("1", "true", "True", "OK", "ok")

    @classmethod
    def from_dict(cls, raw: dict) -> "CsvSchema":
        if "timestamp" not in raw:
            raise SchemaError("schema needs a 'timestamp' column name")
        columns = {}
        for fld in _NUMERIC_FIELDS:
            spec = raw.get(fld)
            if spec is None:
                raise SchemaError(f"schema is missing a mapping for '{fld}'")
            if isinstance(spec, str):
                columns[fld] = ColumnSpec(name=spec)
            else:
                columns[fld] = ColumnSpec(
                    name=spec.get("name"),
                    scale=float(spec.get("scale", 1.0)),
                    offset=float(spec.get("offset", 0.0)),
                    default=spec.get("default"),
                )
        return cls(
            timestamp=raw["timestamp"],
            columns=columns,
            status_column=raw.get("status_column"),
            status_ok_values=tuple(str(v) for v in raw.get("status_ok_values",
                                                           cls.status_ok_values)),
        )


GENERIC_SCHEMA = CsvSchema(
    timestamp="timestamp",
    columns={fld: ColumnSpec(name=fld) for fld in _NUMERIC_FIELDS},
    status_column="status_ok",
)

# Open EDP-style turbine signal files: temperatures in Celsius, pressure in
# mbar when a merged met-mast column is present, humidity in percent.  Log
# messages are not part of the signal file, so curtailment filtering relies
# on a pre-merged boolean column when available.
EDP_SCHEMA = CsvSchema(
    timestamp="Timestamp",
    columns={
        "wind_speed_mean": ColumnSpec(name="Amb_WindSpeed_Avg"),
        "wind_speed_std": ColumnSpec(name="Amb_WindSpeed_Std"),
        "air_temperature": ColumnSpec(name="Amb_Temp_Avg", offset=273.15),
        "air_pressure": ColumnSpec(name="Amb_Pressure_Avg", scale=100.0,
                                   default=101325.0),
        "rel_humidity": ColumnSpec(name="Amb_RelHumidity_Avg", scale=0.01,
                                   default=0.5),
        "power_output": ColumnSpec(name="Prod_LatestAvg_TotActPwr"),
        "nacelle_direction": ColumnSpec(name="Nac_Direction_Avg"),
        "wind_direction": ColumnSpec(name="Amb_WindDir_Avg"),
    },
    status_column="status_ok",
)

SCHEMA_PRESETS = {"generic": GENERIC_SCHEMA, "edp": EDP_SCHEMA}


@dataclass(frozen=True)
class LoadResult:
    """Parsed records plus bookkeeping about rejected rows."""

    records: list
    n_rejected: int
    reject_reasons: dict


def load_scada_csv(path, schema: CsvSchema = GENERIC_SCHEMA,
                   where: dict | None = None) -> LoadResult:
    """Parse a SCADA CSV into timestamp-ordered records.

    Rows with unparseable timestamps, missing values, non-physical values or
    duplicate timestamps are dropped and counted per reason.  ``where`` keeps
    only rows whose column values match (e.g. one turbine id in a multi-
    turbine file) before any parsing.
    """
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise DataError(f"{path} is empty")
    if frame.empty:
        raise DataError(f"{path} holds no data rows")
    if where:
        for column, value in where.items():
            if column not in frame.columns:
                raise SchemaError(f"missing filter column '{column}'")
            frame = frame[frame[column].astype(str) == str(value)]
        frame = frame.reset_index(drop=True)
        if frame.empty:
            raise DataError(f"no rows left after filtering on {sorted(where)}")

    if schema.timestamp not in frame.columns:
        raise SchemaError(f"missing timestamp column '{schema.timestamp}'")
    for fld, spec in schema.columns.items():
        if spec.name is not None and spec.name not in frame.columns and spec.default is None:
            raise SchemaError(f"missing column '{spec.name}' (mapped to {fld})")

    reasons = Counter()
    n = len(frame)
    timestamps = pd.to_datetime(frame[schema.timestamp], utc=True, errors="coerce",
                                format="mixed")
    valid = timestamps.notna().to_numpy()
    reasons["bad_timestamp"] = int(n - valid.sum())

    values = {}
    for fld, spec in schema.columns.items():
        if spec.name is None or spec.name not in frame.columns:
            col = np.full(n, float(spec.default))
        else:
            col = pd.to_numeric(frame[spec.name], errors="coerce").to_numpy(dtype=float)
            col = col * spec.scale + spec.offset
            if spec.default is not None:
                col = np.where(np.isfinite(col), col, float(spec.default))
        values[fld] = col

    complete = np.ones(n, dtype=bool)
    for fld in _NUMERIC_FIELDS:
        complete &= np.isfinite(values[fld])
    reasons["missing_value"] = int((valid & ~complete).sum())
    valid &= complete

    physical = (
        (values["wind_speed_mean"] >= 0.0)
        & (values["wind_speed_std"] >= 0.0)
        & (values["rel_humidity"] >= 0.0) & (values["rel_humidity"] <= 1.0)
        & (values["air_temperature"] > 0.0)
        & (values["air_pressure"] > 0.0)
    )
    reasons["non_physical"] = int((valid & ~physical).sum())
    valid &= physical

    if schema.status_column is not None and schema.status_column in frame.columns:
        raw_status = frame[schema.status_column].astype(str).str.strip()
        status = raw_status.isin(schema.status_ok_values).to_numpy()
    else:
        status = np.ones(n, dtype=bool)

    order = np.argsort(timestamps.to_numpy(), kind="stable")
    records = []
    seen_last = None
    duplicates = 0
    for idx in order:
        if not valid[idx]:
            continue
        ts = timestamps.iloc[int(idx)].to_pydatetime()
        if seen_last is not None and ts <= seen_last:
            duplicates += 1
            continue
        seen_last = ts
        records.append(ScadaRecord(
            timestamp=ts,
            status_ok=bool(status[idx]),
            **{fld: float(values[fld][idx]) for fld in _NUMERIC_FIELDS},
        ))
    reasons["duplicate_timestamp"] = duplicates
    reasons = {k: v for k, v in reasons.items() if v}
    return LoadResult(records=records, n_rejected=int(sum(reasons.values())),
                      reject_reasons=reasons)


def save_scada_csv(records, path, schema: CsvSchema = GENERIC_SCHEMA) -> None:
    """Write records back to CSV in the given schema (inverse unit mapping)."""
    header = [schema.timestamp]
    for fld in _NUMERIC_FIELDS:
        spec = schema.columns[fld]
        header.append(spec.name if spec.name is not None else fld)
    if schema.status_column is not None:
        header.append(schema.status_column)
    lines = [",".join(header)]
    for r in records:
        cells = [r.timestamp.isoformat()]
        for fld in _NUMERIC_FIELDS:
            spec = schema.columns[fld]
            cells.append(repr((getattr(r, fld) - spec.offset) / spec.scale))
        if schema.status_column is not None:
            cells.append("1" if r.status_ok else "0")
        lines.append(",".join(cells))
    with open(path, "w", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Filtering and TI bias correction


def filter_operational(records):
    """Keep records in normal operation with complete, producing data.

    A record survives when every numeric field is finite, power output is
    strictly positive and the status flag marks normal operation.
    """
    kept = []
    for r in records:
        if not r.status_ok or not r.power_output > 0.0:
            continue
        if not all(math.isfinite(getattr(r, fld)) for fld in _NUMERIC_FIELDS):
            continue
        kept.append(r)
    return kept


@dataclass(frozen=True)
class TiReference:
    """Target turbulence distribution summary for nacelle TI correction."""

    mean: float
    prune_quantile: float = 0.99

    def __post_init__(self):
        if self.mean <= 0.0:
            raise ConfigurationError("reference TI mean must be positive")
        if not 0.0 < self.prune_quantile <= 1.0:
            raise ConfigurationError("prune quantile must lie in (0, 1]")

    @classmethod
    def from_samples(cls, samples, prune_quantile: float = 0.99) -> "TiReference":
        arr = np.asarray(samples, dtype=float)
        if arr.size < 2 or float(np.std(arr)) <= 1e-12:
            raise ConfigurationError("degenerate TI reference distribution")
        return cls(mean=float(np.mean(arr)), prune_quantile=prune_quantile)


def correct_ti_bias(records, reference: TiReference):
    """Prune TI outliers and shift the nacelle TI distribution to a reference mean.

    The per-record TI implied by (std, mean) is pruned above the reference's
    upper quantile of the observed distribution, then shifted additively by
    (reference mean - nacelle mean).  Records without a defined TI (zero mean
    wind speed) pass through unchanged.
    """
    defined = [r for r in records if r.wind_speed_mean > 0.0]
    if not defined:
        return list(records)
    tis = np.array([r.wind_speed_std / r.wind_speed_mean for r in defined])
    threshold = float(np.quantile(tis, reference.prune_quantile))
    keep = tis <= threshold
    shift = reference.mean - float(np.mean(tis[keep]))

    out = []
    for r in records:
        if r.wind_speed_mean <= 0.0:
            out.append(r)
            continue
        ti = r.wind_speed_std / r.wind_speed_mean
        if ti > threshold:
            continue
        if shift == 0.0:
            out.append(r)
        else:
            new_std = max(0.0, (ti + shift) * r.wind_speed_mean)
            out.append(replace(r, wind_speed_std=new_std))
    return out


# ---------------------------------------------------------------------------
# Temporal split


@dataclass(frozen=True)
class SplitSpec:
    """Date ranges (half-open) and validation sampling for a dataset split."""

    train_range: tuple
    test_range: tuple
    validation_fraction: float = 0.20
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigurationError("validation fraction must lie in (0, 1)")
        t0, t1 = self.train_range
        s0, s1 = self.test_range
        if t0 >= t1 or s0 >= s1:
            raise ConfigurationError("ranges must have positive length")
        if t0 < s1 and s0 < t1:
            raise ConfigurationError("train and test ranges overlap")


@dataclass(frozen=True)
class SplitResult:
    train: list
    validation: list
    test: list


def temporal_split(records, spec: SplitSpec) -> SplitResult:
    """Split records into train/validation/test sets.

    Test is everything in the test range; validation is a seeded uniform
    sample (without replacement) of the train-range records; train is the
    remainder.  The three sets partition the selected records.
    """
    t0, t1 = spec.train_range
    s0, s1 = spec.test_range
    train_pool = [r for r in records if t0 <= r.timestamp < t1]
    test = [r for r in records if s0 <= r.timestamp < s1]
    n_val = int(round(spec.validation_fraction * len(train_pool)))
    rng = np.random.default_rng(spec.rng_seed)
    val_idx = set(rng.choice(len(train_pool), size=n_val, replace=False).tolist()) \
        if n_val else set()
    train = [r for i, r in enumerate(train_pool) if i not in val_idx]
    validation = [r for i, r in enumerate(train_pool) if i in val_idx]
    return SplitResult(train=train, validation=validation, test=test)


def sample_validation(records, fraction: float, rng_seed: int):
    """Split a record list into (train, validation) by seeded uniform sampling."""
    if not 0.0 < fraction < 1.0:
        raise ConfigurationError("validation fraction must lie in (0, 1)")
    n_val = int(round(fraction * len(records)))
    rng = np.random.default_rng(rng_seed)
    val_idx = set(rng.choice(len(records), size=n_val, replace=False).tolist()) \
        if n_val else set()
    train = [r for i, r in enumerate(records) if i not in val_idx]
    validation = [r for i, r in enumerate(records) if i in val_idx]
    return train, validation


# ---------------------------------------------------------------------------
# Scaling and feature construction


@dataclass(frozen=True)
class MinMaxScaler:
    """Per-feature (min, max) scaling fitted on training rows only.

    Transformed training rows lie in [0, 1]; out-of-distribution rows are
    deliberately NOT clipped so that models can be probed beyond the
    training distribution.
    """

    minimums: np.ndarray
    maximums: np.ndarray
    feature_names: tuple

    @classmethod
    def fit(cls, rows, feature_names) -> "MinMaxScaler":
        rows = np.asarray(rows, dtype=float)
        mins = rows.min(axis=0)
        maxs = rows.max(axis=0)
        if np.any(maxs - mins <= 0.0):
            flat = [feature_names[i] for i in np.flatnonzero(maxs - mins <= 0.0)]
            raise DataError(f"constant feature(s) cannot be min/max scaled: {flat}")
        return cls(minimums=mins, maximums=maxs, feature_names=tuple(feature_names))

    def transform(self, rows):
        rows = np.asarray(rows, dtype=float)
        return (rows - self.minimums) / (self.maximums - self.minimums)

    def inverse(self, rows):
        rows = np.asarray(rows, dtype=float)
        return rows * (self.maximums - self.minimums) + self.minimums

    def to_payload(self) -> dict:
        return {
            "minimums": self.minimums.tolist(),
            "maximums": self.maximums.tolist(),
            "feature_names": list(self.feature_names),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "MinMaxScaler":
        return cls(
            minimums=np.asarray(payload["minimums"], dtype=float),
            maximums=np.asarray(payload["maximums"], dtype=float),
            feature_names=tuple(payload["feature_names"]),
        )


def fit_scaler(rows, feature_names) -> MinMaxScaler:
    return MinMaxScaler.fit(rows, feature_names)


def apply_scaler(scaler: MinMaxScaler, rows):
    return scaler.transform(rows)


@dataclass(frozen=True)
class FeatureMatrix:
    """Scaled model inputs with the scaler that produced them.

    ``rows`` are min/max-scaled features in canonical order; ``targets`` are
    raw power outputs in kW.
    """

    rows: np.ndarray
    targets: np.ndarray
    feature_names: tuple
    scaler: MinMaxScaler

    def __post_init__(self):
        if self.rows.shape[0] != self.targets.shape[0]:
            raise DataError("rows and targets must have equal length")
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.feature_names):
            raise DataError("row width must match the number of feature names")

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]

    def column_index(self, name: str) -> int:
        return self.feature_names.index(name)

    def raw_rows(self):
        """Features in physical units (inverse of the min/max scaling)."""
        return self.scaler.inverse(self.rows)

    def raw_column(self, name: str):
        i = self.column_index(name)
        return self.rows[:, i] * (self.scaler.maximums[i] - self.scaler.minimums[i]) \
            + self.scaler.minimums[i]

    def subset(self, indices) -> "FeatureMatrix":
        idx = np.asarray(indices, dtype=int)
        return FeatureMatrix(rows=self.rows[idx], targets=self.targets[idx],
                             feature_names=self.feature_names, scaler=self.scaler)


def build_feature_matrix(records, *, scaler: MinMaxScaler | None = None,
                         include_yaw: bool = False) -> FeatureMatrix:
    """Derive the model features (wind speed, air density, TI[, yaw]) from records.

    With ``scaler=None`` a new scaler is fitted (training data); otherwise
    the given scaler is applied unchanged (validation/test data).
    """
    if not records:
        raise DataError("cannot build features from an empty record list")
    v = np.array([r.wind_speed_mean for r in records])
    if np.any(v <= 0.0):
        raise DataError("turbulence intensity needs positive mean wind speeds; "
                        "filter records first")
    std = np.array([r.wind_speed_std for r in records])
    temp = np.array([r.air_temperature for r in records])
    pres = np.array([r.air_pressure for r in records])
    hum = np.array([r.rel_humidity for r in records])
    rho = air_density(temp, pres, hum)
    ti = std / v
    columns = [v, rho, ti]
    names = list(BASE_FEATURES)
    if include_yaw:
        nac = np.array([r.nacelle_direction for r in records])
        wdir = np.array([r.wind_direction for r in records])
        columns.append(angular_difference(wdir, nac))
        names.append(YAW_MISALIGNMENT)
    raw = np.column_stack(columns)
    if scaler is None:
        scaler = MinMaxScaler.fit(raw, names)
    elif tuple(scaler.feature_names) != tuple(names):
        raise ConfigurationError("scaler features do not match the requested features")
    targets = np.array([r.power_output for r in records])
    return FeatureMatrix(rows=scaler.transform(raw), targets=targets,
                         feature_names=tuple(names), scaler=scaler)


def stratified_indices(fm: FeatureMatrix, size: int, rng_seed: int,
                       bin_width: float = 1.0) -> np.ndarray:
    """Indices of a stratified subsample, uniform per wind speed bin."""
    if size >= fm.n_rows:
        return np.arange(fm.n_rows)
    v = fm.raw_column(WIND_SPEED)
    bins = np.floor(v / bin_width).astype(int)
    rng = np.random.default_rng(rng_seed)
    unique_bins = np.unique(bins)
    quota = max(1, size // len(unique_bins))
    chosen = []
    for b in unique_bins:
        members = np.flatnonzero(bins == b)
        take = min(quota, members.size)
        chosen.append(rng.choice(members, size=take, replace=False))
    idx = np.concatenate(chosen)
    if idx.size > size:
        idx = rng.choice(idx, size=size, replace=False)
    return np.sort(idx)


def stratified_probe(fm: FeatureMatrix, size: int, rng_seed: int,
                     bin_width: float = 1.0) -> FeatureMatrix:
    """Stratified subsample of a feature matrix, uniform per wind speed bin.

    Used to keep attribution probes representative while bounding runtime.
    Returns the full matrix when ``size`` is not smaller than it.
    """
    if size >= fm.n_rows:
        return fm
    return fm.subset(stratified_indices(fm, size, rng_seed, bin_width))


# ---------------------------------------------------------------------------
# Synthetic data generation


@dataclass(frozen=True)
class SynthConfig:
    """Settings for the synthetic SCADA generator.

    Wind speeds follow a Weibull distribution; air density and TI move
    within their ranges, optionally with a seasonal cycle (``*_seasonal``
    is the share of the half-range driven by the annual cosine, the rest is
    uniform noise).  ``contamination_fraction`` marks a share of records as
    silently underperforming (power multiplied by a random factor) without
    flagging them, mimicking unlogged curtailment or degradation.
    """

    start: datetime = datetime(2023, 1, 1, tzinfo=timezone.utc)
    weibull_shape: float = 2.0
    weibull_scale: float = 8.5
    density_low: float = 1.14
    density_high: float = 1.30
    density_seasonal: float = 0.0
    density_peak_day: float = 15.0
    ti_low: float = 0.02
    ti_high: float = 0.25
    ti_seasonal: float = 0.0
    ti_peak_day: float = 196.0
    humidity_low: float = 0.25
    humidity_high: float = 0.95
    pressure_mean_pa: float = 101325.0
    pressure_std_pa: float = 600.0
    noise_std_kw: float = 0.0
    yaw_max_deg: float | None = None
    contamination_fraction: float = 0.0
    contamination_factor_low: float = 0.4
    contamination_factor_high: float = 0.9

    def __post_init__(self):
        if self.noise_std_kw < 0.0:
            raise ConfigurationError("noise std must be non-negative")
        if not 0.0 <= self.contamination_fraction <= 1.0:
            raise ConfigurationError("contamination fraction must lie in [0, 1]")
        if self.density_low >= self.density_high or self.ti_low >= self.ti_high:
            raise ConfigurationError("range low bounds must be below high bounds")
        if not 0.0 <= self.density_seasonal <= 1.0 or not 0.0 <= self.ti_seasonal <= 1.0:
            raise ConfigurationError("seasonal shares must lie in [0, 1]")
        if self.yaw_max_deg is not None and not 0.0 <= self.yaw_max_deg <= 90.0:
            raise ConfigurationError("yaw range must lie in [0, 90] degrees")


def _seasonal_value(low, high, seasonal_share, peak_day, days, noise_u):
    center = 0.5 * (low + high)
    half = 0.5 * (high - low)
    phase = np.cos(2.0 * np.pi * (days - peak_day) / 365.25)
    value = center + half * (seasonal_share * phase + (1.0 - seasonal_share) * noise_u)
    return np.clip(value, low, high)


def _temperature_for_density(rho, pressure, humidity, iterations: int = 8):
    # Invert the moist-air density formula for temperature by fixed point;
    # the humidity term is a small correction, so convergence is fast.
    from .physics import GAS_CONSTANT_DRY_AIR as R0
    from .physics import GAS_CONSTANT_WATER_VAPOUR as RW
    from .physics import vapour_pressure

    t = pressure / (R0 * rho)
    for _ in range(iterations):
        t = (pressure / R0 - humidity * vapour_pressure(t) * (1.0 / R0 - 1.0 / RW)) / rho
    return t


def synthesize_scada(config: SynthConfig, curve: NominalPowerCurve, n: int,
                     rng_seed: int):
    """Generate ``n`` 10-minute records whose power follows the physics baseline.

    power = baseline(v, rho, TI) * cos^3(yaw) [+ contamination] + noise,
    floored at 0 and capped at rated power.  Bit-identical under a fixed
    seed.
    """
    if n <= 0:
        raise ConfigurationError("record count must be positive")
    rng = np.random.default_rng(rng_seed)
    step_days = np.arange(n) * (600.0 / 86400.0)
    days = config.start.timetuple().tm_yday + step_days

    v = rng.weibull(config.weibull_shape, size=n) * config.weibull_scale
    rho = _seasonal_value(config.density_low, config.density_high,
                          config.density_seasonal, config.density_peak_day,
                          days, rng.uniform(-1.0, 1.0, size=n))
    ti = _seasonal_value(config.ti_low, config.ti_high,
                         config.ti_seasonal, config.ti_peak_day,
                         days, rng.uniform(-1.0, 1.0, size=n))
    humidity = rng.uniform(config.humidity_low, config.humidity_high, size=n)
    pressure = config.pressure_mean_pa + rng.normal(0.0, config.pressure_std_pa, size=n)
    pressure = np.maximum(pressure, 1000.0)
    temperature = _temperature_for_density(rho, pressure, humidity)

    wind_dir = rng.uniform(0.0, 360.0, size=n)
    if config.yaw_max_deg is not None:
        delta_yaw = rng.uniform(0.0, config.yaw_max_deg, size=n)
    else:
        delta_yaw = np.zeros(n)
    nacelle_dir = (wind_dir - delta_yaw) % 360.0

    # Targets are computed from the exact feature values a consumer would
    # re-derive from the stored record fields, so that zero-noise data
    # reproduces the baseline bit for bit.
    std = ti * v
    ti_effective = np.divide(std, v, out=np.zeros_like(v), where=v > 0.0)
    rho_effective = air_density(temperature, pressure, humidity)
    power = phys_base_predict(curve, v, rho_effective, ti_effective)
    power = power * yaw_power_factor(delta_yaw, v, curve.rated_speed)
    if config.contamination_fraction > 0.0:
        mask = rng.random(n) < config.contamination_fraction
        factors = rng.uniform(config.contamination_factor_low,
                              config.contamination_factor_high, size=n)
        power = np.where(mask, power * factors, power)
    if config.noise_std_kw > 0.0:
        power = power + rng.normal(0.0, config.noise_std_kw, size=n)
    power = np.clip(power, 0.0, curve.rated_power)

    records = []
    for i in range(n):
        records.append(ScadaRecord(
            timestamp=config.start + i * TEN_MINUTES,
            wind_speed_mean=float(v[i]),
            wind_speed_std=float(std[i]),
            air_temperature=float(temperature[i]),
            air_pressure=float(pressure[i]),
            rel_humidity=float(humidity[i]),
            power_output=float(power[i]),
            nacelle_direction=float(nacelle_dir[i]),
            wind_direction=float(wind_dir[i]),
            status_ok=True,
        ))
    return records


def augment_yaw(records, *, max_deg: float, rated_speed: float, rng_seed: int):
    """Add artificial yaw misalignment and scale targets accordingly.

    Each record gets a uniform misalignment in [0, max_deg]; below rated
    speed the power output is multiplied by cos^3 of the angle.  Returns the
    augmented records together with the true yaw-induced power deviation
    (augmented minus original output, in kW; zero at or above rated speed).
    """
    if max_deg < 0.0:
        raise ConfigurationError("yaw range must be non-negative")
    rng = np.random.default_rng(rng_seed)
    delta = rng.uniform(0.0, max_deg, size=len(records))
    augmented = []
    true_delta_p = np.empty(len(records))
    for i, r in enumerate(records):
        factor = yaw_power_factor(float(delta[i]), r.wind_speed_mean, rated_speed)
        new_power = r.power_output * factor
        true_delta_p[i] = new_power - r.power_output
        augmented.append(replace(
            r,
            power_output=new_power,
            nacelle_direction=(r.wind_direction - float(delta[i])) % 360.0,
        ))
    return augmented, true_delta_p
