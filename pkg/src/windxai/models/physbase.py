"""Physics baseline behind the common predictor contract.

Wraps the nominal curve plus IEC-style density and turbulence corrections so
the baseline can be benchmarked, explained and compared like any data-driven
model.  ``fit`` only captures the feature scaler; no parameter is learned.
"""

from __future__ import annotations

import numpy as np

from ..physics import (
    DEFAULT_QUADRATURE,
    STANDARD_AIR_DENSITY,
    NominalPowerCurve,
    QuadratureSettings,
    generic_2mw_curve,
    phys_base_predict,
)
from ..scada import AIR_DENSITY, TURBULENCE, WIND_SPEED, FeatureMatrix, MinMaxScaler
from .base import PowerCurveModel


class PhysicsBaseline(PowerCurveModel):
    """Nominal power curve with density and turbulence corrections."""

    kind = "phys_base"

    def __init__(self, curve: NominalPowerCurve | None = None,
                 rho_mean: float = STANDARD_AIR_DENSITY,
                 quadrature: QuadratureSettings = DEFAULT_QUADRATURE):
        super().__init__()
        self.curve = curve if curve is not None else generic_2mw_curve()
        self.rho_mean = rho_mean
        self.quadrature = quadrature

    def fit(self, train: FeatureMatrix, validation: FeatureMatrix | None = None):
        self._capture(train)
        return self

    def predict(self, rows) -> np.ndarray:
        self._require_fitted()
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        raw = self._scaler.inverse(rows)
        v = raw[:, self._feature_names.index(WIND_SPEED)]
        rho = raw[:, self._feature_names.index(AIR_DENSITY)]
        ti = raw[:, self._feature_names.index(TURBULENCE)]
        # Probing beyond the training distribution can unscale to slightly
        # negative physical values; clamp to the physical domain.
        v = np.maximum(v, 0.0)
        rho = np.maximum(rho, 1e-6)
        ti = np.maximum(ti, 0.0)
        return phys_base_predict(self.curve, v, rho, ti,
                                 rho_mean=self.rho_mean, quadrature=self.quadrature)

    @property
    def metadata(self) -> dict:
        return {
            "kind": self.kind,
            "rho_mean": self.rho_mean,
            "quadrature_points": self.quadrature.points,
            "rated_power": self.curve.rated_power,
        }

    # -- serialization ----------------------------------------------------------

    def to_payload(self) -> dict:
        self._require_fitted()
        return {
            "curve": {
                "knot_speeds": list(self.curve.knot_speeds),
                "knot_powers": list(self.curve.knot_powers),
                "cut_in": self.curve.cut_in,
                "rated_speed": self.curve.rated_speed,
                "rated_power": self.curve.rated_power,
                "cut_out": self.curve.cut_out,
            },
            "rho_mean": self.rho_mean,
            "quadrature": {"points": self.quadrature.points,
                           "span_sigmas": self.quadrature.span_sigmas},
            "feature_names": list(self._feature_names),
            "scaler": self._scaler.to_payload(),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "PhysicsBaseline":
        curve = NominalPowerCurve(
            knot_speeds=tuple(payload["curve"]["knot_speeds"]),
            knot_powers=tuple(payload["curve"]["knot_powers"]),
            cut_in=payload["curve"]["cut_in"],
            rated_speed=payload["curve"]["rated_speed"],
            rated_power=payload["curve"]["rated_power"],
            cut_out=payload["curve"]["cut_out"],
        )
        model = cls(curve=curve, rho_mean=payload["rho_mean"],
                    quadrature=QuadratureSettings(**payload["quadrature"]))
        model._feature_names = tuple(payload["feature_names"])
        model._scaler = MinMaxScaler.from_payload(payload["scaler"])
        return model
