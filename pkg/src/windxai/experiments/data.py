"""Dataset preparation and the model factory shared by all experiment runners."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import ConfigurationError
from ..models import (
    HybridResidualModel,
    MlpModel,
    PhysicsBaseline,
    PiecewiseLinearModel,
    PiecewisePolynomialModel,
    RandomForestModel,
    ann_large_config,
    ann_small_config,
)
from ..physics import NominalPowerCurve, generic_2mw_curve
from ..scada import (
    SCHEMA_PRESETS,
    CsvSchema,
    FeatureMatrix,
    SplitSpec,
    SynthConfig,
    TiReference,
    build_feature_matrix,
    correct_ti_bias,
    filter_operational,
    load_scada_csv,
    sample_validation,
    synthesize_scada,
    temporal_split,
)
from .config import DataConfig, ExperimentConfig


@dataclass(frozen=True)
class PreparedData:
    """Filtered records and feature matrices for one experiment."""

    train_records: list
    validation_records: list
    test_records: list
    train: FeatureMatrix
    validation: FeatureMatrix
    test: FeatureMatrix
    curve: NominalPowerCurve


def _resolve_schema(schema) -> CsvSchema:
    if isinstance(schema, str):
        if schema not in SCHEMA_PRESETS:
            raise ConfigurationError(f"unknown schema preset '{schema}'")
        return SCHEMA_PRESETS[schema]
    return CsvSchema.from_dict(schema)


def _load_curve(data: DataConfig) -> NominalPowerCurve:
    if data.power_curve_csv:
        return NominalPowerCurve.from_csv(data.power_curve_csv)
    return generic_2mw_curve()


def synth_config(data: DataConfig, *, test: bool = False) -> SynthConfig:
    settings = dict(data.generator)
    if test:
        settings.update(data.test_overrides)
        settings["start"] = data.test_start
    else:
        settings["start"] = data.train_start
    return SynthConfig(**settings)


def prepare_dataset(cfg: ExperimentConfig, *, include_yaw: bool = False) -> PreparedData:
    """Build train/validation/test feature matrices from the configured source.

    The scaler is always fitted on the training rows only; validation and
    test rows pass through it unclipped.
    """
    data = cfg.data
    curve = _load_curve(data)
    if data.source == "synthetic":
        train_pool = filter_operational(synthesize_scada(
            synth_config(data), curve, data.n_train, cfg.seed("train-data")))
        test_records = filter_operational(synthesize_scada(
            synth_config(data, test=True), curve, data.n_test, cfg.seed("test-data")))
        train_records, validation_records = sample_validation(
            train_pool, data.validation_fraction, cfg.seed("validation-split"))
    else:
        where = None
        if data.turbine is not None:
            if data.turbine_column is None:
                raise ConfigurationError("turbine filtering needs 'turbine_column'")
            where = {data.turbine_column: data.turbine}
        result = load_scada_csv(data.path, _resolve_schema(data.schema), where=where)
        records = filter_operational(result.records)
        if data.ti_correction:
            records = correct_ti_bias(records, TiReference(**data.ti_correction))
        if data.train_range is None or data.test_range is None:
            raise ConfigurationError("csv data source needs train_range and test_range")
        split = temporal_split(records, SplitSpec(
            train_range=data.train_range, test_range=data.test_range,
            validation_fraction=data.validation_fraction,
            rng_seed=cfg.seed("validation-split")))
        train_records, validation_records = split.train, split.validation
        test_records = split.test

    train = build_feature_matrix(train_records, include_yaw=include_yaw)
    validation = build_feature_matrix(validation_records, scaler=train.scaler,
                                      include_yaw=include_yaw)
    test = build_feature_matrix(test_records, scaler=train.scaler,
                                include_yaw=include_yaw)
    return PreparedData(
        train_records=train_records,
        validation_records=validation_records,
        test_records=test_records,
        train=train, validation=validation, test=test, curve=curve,
    )


def make_model(kind: str, seed: int, curve: NominalPowerCurve,
               mlp_overrides: dict | None = None):
    """Instantiate one model of the given kind with a derived seed."""
    overrides = dict(mlp_overrides or {})
    if kind == "phys_base":
        return PhysicsBaseline(curve=curve)
    if kind == "plr":
        return PiecewiseLinearModel()
    if kind == "ppr":
        return PiecewisePolynomialModel()
    if kind == "rf":
        return RandomForestModel(rng_seed=seed)
    if kind == "ann_small":
        return MlpModel(ann_small_config(rng_seed=seed, **overrides))
    if kind == "ann_large":
        return MlpModel(ann_large_config(rng_seed=seed, **overrides))
    if kind == "hybrid":
        return HybridResidualModel(
            physics=PhysicsBaseline(curve=curve),
            inner_config=ann_large_config(rng_seed=seed, **overrides))
    raise ConfigurationError(f"unknown model kind '{kind}'")
