"""Fully-connected feedforward network trained with Adam.

Implemented directly on NumPy so that the training contract is exact:
loss = MSE + l2_penalty * sum of squared weights (biases unpenalized),
learning rate halved after a 10-epoch validation plateau (floor 1e-5),
training stopped after 100 epochs without validation improvement with the
best-validation weights restored.  Identical seed and data give identical
weights.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import expit

from ..errors import ConfigurationError, TrainingError
from ..scada import FeatureMatrix, MinMaxScaler
from .base import PowerCurveModel

_ACTIVATIONS = ("sigmoid", "relu")


@dataclass(frozen=True)
class MlpConfig:
    """Architecture and training modalities of the network."""

    hidden_layers: tuple = (3, 3)
    activation: str = "sigmoid"
    l2_penalty: float = 0.0
    initial_learning_rate: float = 0.1
    lr_plateau_epochs: int = 10
    lr_halving_factor: float = 0.5
    lr_floor: float = 1e-5
    max_epochs: int = 10000
    tolerance: float = 1e-6
    early_stopping_patience: int = 100
    batch_size: int = 200
    rng_seed: int = 0

    def __post_init__(self):
        if not self.hidden_layers:
            raise ConfigurationError("at least one hidden layer is required")
        if self.activation not in _ACTIVATIONS:
            raise ConfigurationError(f"activation must be one of {_ACTIVATIONS}")
        if self.l2_penalty < 0.0:
            raise ConfigurationError("l2 penalty must be non-negative")
        if self.initial_learning_rate <= 0.0 or self.batch_size < 1:
            raise ConfigurationError("invalid learning rate or batch size")


def ann_small_config(rng_seed: int = 0, **overrides) -> MlpConfig:
    """Small two-layer sigmoid network, (3, 3) neurons, no weight penalty."""
    return replace(MlpConfig(hidden_layers=(3, 3), activation="sigmoid",
                             l2_penalty=0.0, rng_seed=rng_seed), **overrides)


def ann_large_config(rng_seed: int = 0, *, narrow_head: bool = False,
                     **overrides) -> MlpConfig:
    """Large three-layer ReLU network with a mild weight penalty.

    The default head width is 50 neurons; ``narrow_head=True`` selects the
    25-neuron variant.
    """
    head = 25 if narrow_head else 50
    return replace(MlpConfig(hidden_layers=(100, 100, head), activation="relu",
                             l2_penalty=0.05, rng_seed=rng_seed), **overrides)


class MlpModel(PowerCurveModel):
    """Feedforward MSE regressor with Adam, plateau LR halving and early stopping."""

    kind = "mlp"

    def __init__(self, config: MlpConfig = MlpConfig()):
        super().__init__()
        self.config = config
        self._weights = None
        self._biases = None
        self._epochs_run = 0
        self._best_val_mse = None
        self._final_lr = None

    # -- network core ---------------------------------------------------------

    def _activate(self, z):
        if self.config.activation == "relu":
            return np.maximum(z, 0.0)
        return expit(z)

    def _activate_grad(self, z, a):
        if self.config.activation == "relu":
            return (z > 0.0).astype(z.dtype)
        return a * (1.0 - a)

    def _forward(self, x):
        pre, post = [], [x]
        h = x
        for w, b in zip(self._weights[:-1], self._biases[:-1]):
            z = h @ w + b
            h = self._activate(z)
            pre.append(z)
            post.append(h)
        out = h @ self._weights[-1] + self._biases[-1]
        return out[:, 0], pre, post

    def loss_and_gradients(self, x, y):
        """Loss (MSE + weight penalty) and its analytic parameter gradients."""
        n = x.shape[0]
        pred, pre, post = self._forward(x)
        err = pred - y
        loss = float(np.mean(err ** 2))
        if self.config.l2_penalty > 0.0:
            loss += self.config.l2_penalty * sum(float(np.sum(w ** 2))
                                                 for w in self._weights)
        grad_w = [None] * len(self._weights)
        grad_b = [None] * len(self._biases)
        delta = (2.0 * err / n)[:, None]
        grad_w[-1] = post[-1].T @ delta
        grad_b[-1] = delta.sum(axis=0)
        for layer in range(len(self._weights) - 2, -1, -1):
            delta = (delta @ self._weights[layer + 1].T) \
                * self._activate_grad(pre[layer], post[layer + 1])
            grad_w[layer] = post[layer].T @ delta
            grad_b[layer] = delta.sum(axis=0)
        if self.config.l2_penalty > 0.0:
            for layer, w in enumerate(self._weights):
                grad_w[layer] = grad_w[layer] + 2.0 * self.config.l2_penalty * w
        return loss, grad_w, grad_b

    def _init_parameters(self, n_features: int, rng, target_mean: float = 0.0) -> None:
        sizes = [n_features, *self.config.hidden_layers, 1]
        self._weights, self._biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            self._weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            self._biases.append(np.zeros(fan_out))
        # Starting the output at the target mean skips the slow phase of
        # learning the raw kW scale, during which small sigmoid nets tend to
        # saturate and stall.
        self._biases[-1][:] = target_mean

    # -- training -------------------------------------------------------------

    def fit(self, train: FeatureMatrix, validation: FeatureMatrix | None = None):
        if validation is None or validation.n_rows == 0:
            raise TrainingError("network training requires a non-empty validation set")
        self._capture(train)
        cfg = self.config
        rng = np.random.default_rng(cfg.rng_seed)
        self._init_parameters(train.n_features, rng,
                              target_mean=float(np.mean(train.targets)))

        adam_m = [np.zeros_like(p) for p in self._weights + self._biases]
        adam_v = [np.zeros_like(p) for p in self._weights + self._biases]
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        step = 0
        lr = cfg.initial_learning_rate

        x, y = train.rows, train.targets
        xv, yv = validation.rows, validation.targets
        n = x.shape[0]
        # The improvement tolerance applies to the variance-normalized
        # validation loss, so its meaning does not depend on the target
        # scale (kW here, arbitrary units elsewhere).
        val_scale = max(float(np.var(yv)), 1e-300)
        best_val = np.inf
        best_state = None
        no_improve = 0
        plateau = 0

        for epoch in range(cfg.max_epochs):
            order = rng.permutation(n)
            for start in range(0, n, cfg.batch_size):
                batch = order[start:start + cfg.batch_size]
                loss, grad_w, grad_b = self.loss_and_gradients(x[batch], y[batch])
                if not np.isfinite(loss):
                    raise TrainingError(
                        f"training diverged (seed={cfg.rng_seed}, epoch={epoch})")
                step += 1
                params = self._weights + self._biases
                grads = grad_w + grad_b
                for k, (p, g) in enumerate(zip(params, grads)):
                    adam_m[k] = beta1 * adam_m[k] + (1.0 - beta1) * g
                    adam_v[k] = beta2 * adam_v[k] + (1.0 - beta2) * g * g
                    m_hat = adam_m[k] / (1.0 - beta1 ** step)
                    v_hat = adam_v[k] / (1.0 - beta2 ** step)
                    p -= lr * m_hat / (np.sqrt(v_hat) + eps)

            val_pred, _, _ = self._forward(xv)
            val_mse = float(np.mean((val_pred - yv) ** 2))
            if not np.isfinite(val_mse):
                raise TrainingError(
                    f"training diverged (seed={cfg.rng_seed}, epoch={epoch})")
            self._epochs_run = epoch + 1
            if val_mse / val_scale < best_val - cfg.tolerance:
                best_val = val_mse / val_scale
                best_state = ([w.copy() for w in self._weights],
                              [b.copy() for b in self._biases])
                no_improve = 0
                plateau = 0
            else:
                no_improve += 1
                plateau += 1
            if plateau >= cfg.lr_plateau_epochs:
                lr = max(lr * cfg.lr_halving_factor, cfg.lr_floor)
                plateau = 0
            if no_improve >= cfg.early_stopping_patience:
                break

        if best_state is not None:
            self._weights, self._biases = best_state
        self._best_val_mse = best_val * val_scale if np.isfinite(best_val) else None
        self._final_lr = lr
        return self

    def predict(self, rows) -> np.ndarray:
        self._require_fitted()
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        pred, _, _ = self._forward(rows)
        return pred

    @property
    def metadata(self) -> dict:
        return {
            "kind": self.kind,
            "hidden_layers": list(self.config.hidden_layers),
            "activation": self.config.activation,
            "l2_penalty": self.config.l2_penalty,
            "rng_seed": self.config.rng_seed,
            "epochs_run": self._epochs_run,
            "best_val_mse": self._best_val_mse,
        }

    # -- serialization ----------------------------------------------------------

    def to_payload(self) -> dict:
        self._require_fitted()
        return {
            "config": {
                "hidden_layers": list(self.config.hidden_layers),
                "activation": self.config.activation,
                "l2_penalty": self.config.l2_penalty,
                "initial_learning_rate": self.config.initial_learning_rate,
                "lr_plateau_epochs": self.config.lr_plateau_epochs,
                "lr_halving_factor": self.config.lr_halving_factor,
                "lr_floor": self.config.lr_floor,
                "max_epochs": self.config.max_epochs,
                "tolerance": self.config.tolerance,
                "early_stopping_patience": self.config.early_stopping_patience,
                "batch_size": self.config.batch_size,
                "rng_seed": self.config.rng_seed,
            },
            "weights": [w.tolist() for w in self._weights],
            "biases": [b.tolist() for b in self._biases],
            "epochs_run": self._epochs_run,
            "feature_names": list(self._feature_names),
            "scaler": self._scaler.to_payload(),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "MlpModel":
        raw = dict(payload["config"])
        raw["hidden_layers"] = tuple(raw["hidden_layers"])
        model = cls(MlpConfig(**raw))
        model._weights = [np.asarray(w, dtype=float) for w in payload["weights"]]
        model._biases = [np.asarray(b, dtype=float) for b in payload["biases"]]
        model._epochs_run = payload["epochs_run"]
        model._feature_names = tuple(payload["feature_names"])
        model._scaler = MinMaxScaler.from_payload(payload["scaler"])
        return model
