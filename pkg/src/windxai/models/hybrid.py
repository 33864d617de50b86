"""Physics-residual blend: network trained on targets minus the physics baseline."""

from __future__ import annotations

import numpy as np

from ..scada import FeatureMatrix
from .base import PowerCurveModel
from .mlp import MlpConfig, MlpModel
from .physbase import PhysicsBaseline


class HybridResidualModel(PowerCurveModel):
    """Physics baseline plus a network fitted to the residual.

    The inner network sees the adjusted target (observed power minus the
    baseline prediction); the model output is the sum of both components, so
    an all-zero inner network reproduces the baseline exactly.
    """

    kind = "hybrid"

    def __init__(self, physics: PhysicsBaseline | None = None,
                 inner_config: MlpConfig | None = None):
        super().__init__()
        self.physics = physics if physics is not None else PhysicsBaseline()
        self.inner = MlpModel(inner_config if inner_config is not None else MlpConfig())

    @staticmethod
    def _residual(fm: FeatureMatrix, physics: PhysicsBaseline) -> FeatureMatrix:
        return FeatureMatrix(rows=fm.rows,
                             targets=fm.targets - physics.predict(fm.rows),
                             feature_names=fm.feature_names, scaler=fm.scaler)

    def fit(self, train: FeatureMatrix, validation: FeatureMatrix | None = None):
        self._capture(train)
        self.physics.fit(train)
        inner_train = self._residual(train, self.physics)
        inner_val = None if validation is None else self._residual(validation,
                                                                   self.physics)
        self.inner.fit(inner_train, inner_val)
        return self

    def physics_component(self, rows) -> np.ndarray:
        return self.physics.predict(rows)

    def inner_component(self, rows) -> np.ndarray:
        return self.inner.predict(rows)

    def predict(self, rows) -> np.ndarray:
        self._require_fitted()
        return self.physics.predict(rows) + self.inner.predict(rows)

    @property
    def metadata(self) -> dict:
        return {
            "kind": self.kind,
            "physics": self.physics.metadata,
            "inner": self.inner.metadata,
            "rng_seed": self.inner.config.rng_seed,
        }

    # -- serialization ----------------------------------------------------------

    def to_payload(self) -> dict:
        self._require_fitted()
        return {"physics": self.physics.to_payload(),
                "inner": self.inner.to_payload()}

    @classmethod
    def from_payload(cls, payload: dict) -> "HybridResidualModel":
        model = cls.__new__(cls)
        PowerCurveModel.__init__(model)
        model.physics = PhysicsBaseline.from_payload(payload["physics"])
        model.inner = MlpModel.from_payload(payload["inner"])
        model._feature_names = model.inner._feature_names
        model._scaler = model.inner._scaler
        return model
