"""Explain a single record: per-feature kW decomposition of one prediction."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..scada import (
    AIR_DENSITY,
    TURBULENCE,
    WIND_SPEED,
    YAW_MISALIGNMENT,
    ScadaRecord,
    angular_difference,
)
from ..physics import air_density
from ..xai import Attribution, ReferencePoint, shapley_exact


def record_features(record: ScadaRecord, feature_names) -> np.ndarray:
    """Raw feature vector of one record in the given feature order."""
    values = {
        WIND_SPEED: record.wind_speed_mean,
        AIR_DENSITY: air_density(record.air_temperature, record.air_pressure,
                                 record.rel_humidity),
        TURBULENCE: record.wind_speed_std / record.wind_speed_mean
        if record.wind_speed_mean > 0.0 else 0.0,
        YAW_MISALIGNMENT: float(angular_difference(record.wind_direction,
                                                   record.nacelle_direction)),
    }
    try:
        return np.array([values[name] for name in feature_names])
    except KeyError as exc:
        raise ConfigurationError(f"model expects unknown feature {exc}")


def explain_instance(model, record: ScadaRecord,
                     reference: ReferencePoint) -> Attribution:
    """Decompose one prediction into per-feature contributions in kW.

    The attributions sum to the difference between the model output for this
    record and the output at the reference point (for the informed reference:
    the expected output under mean ambient conditions at this wind speed).
    """
    raw = record_features(record, model.feature_names)
    row = model.scaler.transform(raw[None, :])[0]
    return shapley_exact(model, row, reference)
