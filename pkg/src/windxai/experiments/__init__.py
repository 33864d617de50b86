"""Experiment orchestration: configs, data preparation and the four studies."""

from .ablation import run_period_ablation
from .benchmark import run_benchmark
from .config import (
    DEFAULT_MODELS,
    DETERMINISTIC_KINDS,
    ExperimentConfig,
    apply_overrides,
    config_hash,
    derive_seed,
    load_config,
)
from .data import PreparedData, make_model, prepare_dataset
from .explain import explain_instance, record_features
from .regularization import run_case_study_regularization
from .yaw_study import run_case_study_yaw

__all__ = [
    "ExperimentConfig",
    "load_config",
    "apply_overrides",
    "config_hash",
    "derive_seed",
    "DEFAULT_MODELS",
    "DETERMINISTIC_KINDS",
    "PreparedData",
    "prepare_dataset",
    "make_model",
    "run_benchmark",
    "run_period_ablation",
    "run_case_study_regularization",
    "run_case_study_yaw",
    "explain_instance",
    "record_features",
]
