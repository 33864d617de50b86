"""Random forest power curve regressor.

Fitting delegates to scikit-learn's RandomForestRegressor (bootstrap CART
trees with variance-reduction splits).  The fitted trees are extracted into
plain arrays, so prediction, serialization and feature-usage introspection
do not depend on the fitting backend.
"""

from __future__ import annotations

import numpy as np
from sklearn.ensemble import RandomForestRegressor

from ..errors import DataError
from ..scada import FeatureMatrix, MinMaxScaler
from .base import PowerCurveModel


class RandomForestModel(PowerCurveModel):
    """Bootstrap-averaged regression trees, deterministic under a fixed seed."""

    kind = "rf"

    def __init__(self, n_estimators: int = 100, min_samples_split: int = 3,
                 min_samples_leaf: int = 30, rng_seed: int = 0):
        super().__init__()
        self.n_estimators = n_estimators
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.rng_seed = rng_seed
        self._trees = None

    def fit(self, train: FeatureMatrix, validation: FeatureMatrix | None = None):
        if train.n_rows == 0:
            raise DataError("cannot fit a forest on an empty training set")
        self._capture(train)
        forest = RandomForestRegressor(
            n_estimators=self.n_estimators,
            min_samples_split=self.min_samples_split,
            min_samples_leaf=self.min_samples_leaf,
            random_state=self.rng_seed,
            n_jobs=1,
        )
        forest.fit(train.rows, train.targets)
        self._trees = [self._extract(est.tree_) for est in forest.estimators_]
        return self

    @staticmethod
    def _extract(tree) -> dict:
        return {
            "children_left": tree.children_left.copy(),
            "children_right": tree.children_right.copy(),
            "feature": tree.feature.copy(),
            "threshold": tree.threshold.copy(),
            "value": tree.value[:, 0, 0].copy(),
        }

    @staticmethod
    def _tree_predict(tree: dict, rows) -> np.ndarray:
        idx = np.zeros(rows.shape[0], dtype=np.int64)
        feature = tree["feature"]
        active = feature[idx] >= 0
        while np.any(active):
            cur = idx[active]
            go_left = rows[active, feature[cur]] <= tree["threshold"][cur]
            idx[active] = np.where(go_left, tree["children_left"][cur],
                                   tree["children_right"][cur])
            active = feature[idx] >= 0
        return tree["value"][idx]

    def predict(self, rows) -> np.ndarray:
        self._require_fitted()
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        total = np.zeros(rows.shape[0])
        for tree in self._trees:
            total += self._tree_predict(tree, rows)
        return total / len(self._trees)

    def features_used(self) -> set:
        """Indices of features that appear in at least one split."""
        self._require_fitted()
        used = set()
        for tree in self._trees:
            used.update(int(f) for f in tree["feature"] if f >= 0)
        return used

    @property
    def metadata(self) -> dict:
        return {
            "kind": self.kind,
            "n_estimators": self.n_estimators,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
            "rng_seed": self.rng_seed,
        }

    # -- serialization ----------------------------------------------------------

    def to_payload(self) -> dict:
        self._require_fitted()
        return {
            "n_estimators": self.n_estimators,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
            "rng_seed": self.rng_seed,
            "trees": [{key: arr.tolist() for key, arr in tree.items()}
                      for tree in self._trees],
            "feature_names": list(self._feature_names),
            "scaler": self._scaler.to_payload(),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "RandomForestModel":
        model = cls(
            n_estimators=payload["n_estimators"],
            min_samples_split=payload["min_samples_split"],
            min_samples_leaf=payload["min_samples_leaf"],
            rng_seed=payload["rng_seed"],
        )
        model._trees = [
            {
                "children_left": np.asarray(tree["children_left"], dtype=np.int64),
                "children_right": np.asarray(tree["children_right"], dtype=np.int64),
                "feature": np.asarray(tree["feature"], dtype=np.int64),
                "threshold": np.asarray(tree["threshold"], dtype=float),
                "value": np.asarray(tree["value"], dtype=float),
            }
            for tree in payload["trees"]
        ]
        model._feature_names = tuple(payload["feature_names"])
        model._scaler = MinMaxScaler.from_payload(payload["scaler"])
        return model
