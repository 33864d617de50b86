"""Piecewise linear and piecewise polynomial (ridge) power curve models.

The input space is divided into wind speed segments; an independent linear
or polynomial regression is fitted per segment.  Segment routing uses the
unscaled wind speed, so the boundaries are physical m/s values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from ..scada import WIND_SPEED, FeatureMatrix, MinMaxScaler
from .base import PowerCurveModel


@dataclass(frozen=True)
class SegmentSpec:
    """Wind speed breakpoints [m/s] delimiting the regression segments."""

    boundaries: tuple = (0.0, 4.0, 6.0, 8.0, 10.0, 12.0, 25.0)

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=float)
        if b.size < 2 or np.any(np.diff(b) <= 0.0):
            raise ConfigurationError("segment boundaries must be strictly increasing")
        if b[0] != 0.0:
            raise ConfigurationError("first segment boundary must be 0")

    @property
    def n_segments(self) -> int:
        return len(self.boundaries) - 1

    def route(self, wind_speed):
        """Segment index per wind speed; values beyond the ends use the edge segments."""
        idx = np.searchsorted(np.asarray(self.boundaries), wind_speed, side="left") - 1
        return np.clip(idx, 0, self.n_segments - 1)


DEFAULT_SEGMENTS = SegmentSpec()


class _SegmentedRegression(PowerCurveModel):
    """Shared machinery: per-segment least squares on a feature basis."""

    def __init__(self, segments: SegmentSpec = DEFAULT_SEGMENTS,
                 l2_penalty: float = 0.0):
        super().__init__()
        if l2_penalty < 0.0:
            raise ConfigurationError("l2 penalty must be non-negative")
        self.segments = segments
        self.l2_penalty = l2_penalty
        self._coefficients = None   # list per segment, None => mean fallback
        self._fallback_means = None
        self._fallback_segments = None

    def _basis(self, rows) -> np.ndarray:
        raise NotImplementedError

    def fit(self, train: FeatureMatrix, validation: FeatureMatrix | None = None):
        self._capture(train)
        v = train.raw_column(WIND_SPEED)
        seg = self.segments.route(v)
        basis = self._basis(train.rows)
        y = train.targets
        global_mean = float(np.mean(y))

        coefficients, means, fallbacks = [], [], []
        for s in range(self.segments.n_segments):
            idx = np.flatnonzero(seg == s)
            if idx.size == 0:
                coefficients.append(None)
                means.append(global_mean)
                fallbacks.append(s)
                continue
            beta = self._solve(basis[idx], y[idx])
            if beta is None:
                fallbacks.append(s)
            coefficients.append(beta)
            means.append(float(np.mean(y[idx])))
        self._coefficients = coefficients
        self._fallback_means = means
        self._fallback_segments = tuple(fallbacks)
        return self

    def _solve(self, x, y):
        p = x.shape[1]
        if self.l2_penalty == 0.0:
            beta, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
            if rank < p:
                return None
            return beta
        # Ridge via regularized normal equations; the intercept (first basis
        # column) stays unpenalized.
        penalty = np.eye(p) * self.l2_penalty
        penalty[0, 0] = 0.0
        return np.linalg.solve(x.T @ x + penalty, x.T @ y)

    def predict(self, rows) -> np.ndarray:
        self._require_fitted()
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        i = self._feature_names.index(WIND_SPEED)
        v = rows[:, i] * (self._scaler.maximums[i] - self._scaler.minimums[i]) \
            + self._scaler.minimums[i]
        seg = self.segments.route(v)
        basis = self._basis(rows)
        out = np.empty(rows.shape[0])
        for s in range(self.segments.n_segments):
            idx = np.flatnonzero(seg == s)
            if idx.size == 0:
                continue
            beta = self._coefficients[s]
            out[idx] = self._fallback_means[s] if beta is None else basis[idx] @ beta
        return out

    @property
    def metadata(self) -> dict:
        meta = {
            "kind": self.kind,
            "boundaries": list(self.segments.boundaries),
            "l2_penalty": self.l2_penalty,
        }
        if self._fallback_segments:
            meta["fallback_segments"] = list(self._fallback_segments)
        return meta

    # -- serialization -------------------------------------------------------

    def to_payload(self) -> dict:
        self._require_fitted()
        return {
            "boundaries": list(self.segments.boundaries),
            "l2_penalty": self.l2_penalty,
            "coefficients": [None if c is None else c.tolist()
                             for c in self._coefficients],
            "fallback_means": list(self._fallback_means),
            "fallback_segments": list(self._fallback_segments),
            "feature_names": list(self._feature_names),
            "scaler": self._scaler.to_payload(),
        }

    def _restore(self, payload: dict):
        self._coefficients = [None if c is None else np.asarray(c, dtype=float)
                              for c in payload["coefficients"]]
        self._fallback_means = list(payload["fallback_means"])
        self._fallback_segments = tuple(payload["fallback_segments"])
        self._feature_names = tuple(payload["feature_names"])
        self._scaler = MinMaxScaler.from_payload(payload["scaler"])
        return self


class PiecewiseLinearModel(_SegmentedRegression):
    """Ordinary least squares on [1, features] per wind speed segment."""

    kind = "plr"

    def __init__(self, segments: SegmentSpec = DEFAULT_SEGMENTS):
        super().__init__(segments=segments, l2_penalty=0.0)

    def _basis(self, rows) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        return np.column_stack([np.ones(rows.shape[0]), rows])

    @classmethod
    def from_payload(cls, payload: dict) -> "PiecewiseLinearModel":
        model = cls(segments=SegmentSpec(tuple(payload["boundaries"])))
        return model._restore(payload)


class PiecewisePolynomialModel(_SegmentedRegression):
    """Ridge regression on a cubic wind speed basis per segment.

    The default degree-3 basis for features (v, f1, f2, ...) is
    {1, v, v^2, v^3} plus {f, f*v, f*v^2} for every non-wind feature:
    10 parameters per segment for the canonical three features.
    """

    kind = "ppr"

    def __init__(self, segments: SegmentSpec = DEFAULT_SEGMENTS,
                 l2_penalty: float = 0.01, degree: int = 3):
        super().__init__(segments=segments, l2_penalty=l2_penalty)
        if degree < 1:
            raise ConfigurationError("polynomial degree must be at least 1")
        self.degree = degree

    def _basis(self, rows) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        i = 0 if self._feature_names is None \
            else self._feature_names.index(WIND_SPEED)
        v = rows[:, i]
        columns = [np.ones(rows.shape[0])]
        columns += [v ** k for k in range(1, self.degree + 1)]
        for j in range(rows.shape[1]):
            if j == i:
                continue
            for k in range(self.degree):
                columns.append(rows[:, j] * v ** k)
        return np.column_stack(columns)

    @property
    def metadata(self) -> dict:
        meta = super().metadata
        meta["degree"] = self.degree
        return meta

    def to_payload(self) -> dict:
        payload = super().to_payload()
        payload["degree"] = self.degree
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "PiecewisePolynomialModel":
        model = cls(segments=SegmentSpec(tuple(payload["boundaries"])),
                    l2_penalty=payload["l2_penalty"], degree=payload["degree"])
        return model._restore(payload)
