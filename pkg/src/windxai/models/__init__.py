"""Power curve regressors behind one predictor contract."""

from .base import PowerCurveModel, evaluate_rmse
from .forest import RandomForestModel
from .hybrid import HybridResidualModel
from .io import load_model, save_model
from .mlp import MlpConfig, MlpModel, ann_large_config, ann_small_config
from .physbase import PhysicsBaseline
from .segmented import (
    DEFAULT_SEGMENTS,
    PiecewiseLinearModel,
    PiecewisePolynomialModel,
    SegmentSpec,
)

__all__ = [
    "PowerCurveModel",
    "evaluate_rmse",
    "SegmentSpec",
    "DEFAULT_SEGMENTS",
    "PiecewiseLinearModel",
    "PiecewisePolynomialModel",
    "RandomForestModel",
    "MlpConfig",
    "MlpModel",
    "ann_small_config",
    "ann_large_config",
    "PhysicsBaseline",
    "HybridResidualModel",
    "save_model",
    "load_model",
]
