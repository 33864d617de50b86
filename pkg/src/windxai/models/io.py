"""Versioned JSON serialization for trained models (reload-and-explain workflows)."""

from __future__ import annotations

import json

from ..errors import ConfigurationError

FORMAT_NAME = "windxai-model"
FORMAT_VERSION = 1


def _registry() -> dict:
    from .forest import RandomForestModel
    from .hybrid import HybridResidualModel
    from .mlp import MlpModel
    from .physbase import PhysicsBaseline
    from .segmented import PiecewiseLinearModel, PiecewisePolynomialModel

    return {cls.kind: cls for cls in (
        PhysicsBaseline, PiecewiseLinearModel, PiecewisePolynomialModel,
        RandomForestModel, MlpModel, HybridResidualModel,
    )}


def save_model(model, path) -> None:
    """Write a trained model to a versioned JSON file."""
    document = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": model.kind,
        "payload": model.to_payload(),
    }
    with open(path, "w") as handle:
        json.dump(document, handle)


def load_model(path):
    """Reload a model saved by :func:`save_model`."""
    with open(path) as handle:
        document = json.load(handle)
    if document.get("format") != FORMAT_NAME:
        raise ConfigurationError(f"{path} is not a {FORMAT_NAME} file")
    if document.get("version") != FORMAT_VERSION:
        raise ConfigurationError(
            f"unsupported model format version {document.get('version')}")
    registry = _registry()
    kind = document.get("kind")
    if kind not in registry:
        raise ConfigurationError(f"unknown model kind '{kind}'")
    return registry[kind].from_payload(document["payload"])
