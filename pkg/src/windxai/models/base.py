"""Uniform predictor contract shared by all power curve models."""

from __future__ import annotations

import abc

import numpy as np

from ..errors import TrainingError
from ..scada import FeatureMatrix


class PowerCurveModel(abc.ABC):
    """A power curve regressor: fit on a FeatureMatrix, predict kW from scaled rows.

    ``predict`` must be pure and deterministic once fitted and defined for
    any real-valued input row, including values outside the [0, 1] training
    range of the scaler.
    """

    kind: str = "abstract"

    def __init__(self):
        self._scaler = None
        self._feature_names = None

    @abc.abstractmethod
    def fit(self, train: FeatureMatrix, validation: FeatureMatrix | None = None):
        """Train on the given data; returns self."""

    @abc.abstractmethod
    def predict(self, rows) -> np.ndarray:
        """Predict power [kW] for scaled feature rows (n, d)."""

    @property
    def metadata(self) -> dict:
        """Model kind plus hyperparameters and seed where applicable."""
        return {"kind": self.kind}

    # -- shared fit-time plumbing -------------------------------------------

    def _capture(self, train: FeatureMatrix) -> None:
        self._scaler = train.scaler
        self._feature_names = train.feature_names

    def _require_fitted(self) -> None:
        if self._scaler is None:
            raise TrainingError(f"{self.kind} model used before fit()")

    @property
    def scaler(self):
        self._require_fitted()
        return self._scaler

    @property
    def feature_names(self):
        self._require_fitted()
        return self._feature_names


def evaluate_rmse(model: PowerCurveModel, dataset: FeatureMatrix) -> float:
    """Root mean squared prediction error in kW on the given dataset."""
    if dataset.n_rows == 0:
        raise ValueError("cannot evaluate RMSE on an empty dataset")
    errors = model.predict(dataset.rows) - dataset.targets
    return float(np.sqrt(np.mean(errors ** 2)))
