"""Experiment configuration: file loading, validation, seed derivation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..errors import ConfigurationError

try:
    import tomllib  # py >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

DEFAULT_MODELS = ("phys_base", "plr", "ppr", "rf", "ann_small", "ann_large", "hybrid")
SEEDED_KINDS = ("rf", "ann_small", "ann_large", "hybrid")
DETERMINISTIC_KINDS = ("phys_base", "plr", "ppr")


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 32-bit seed derived from the master seed and a task label."""
    label = ":".join([str(master_seed), *[str(p) for p in parts]])
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def config_hash(raw: dict) -> str:
    """Hash of the effective configuration, carried into every result file."""
    canonical = json.dumps(raw, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _parse_date(value) -> datetime:
    if isinstance(value, datetime):
        dt = value
    else:
        dt = datetime.fromisoformat(str(value))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def _check_keys(section: dict, allowed, where: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigurationError(f"unknown key(s) in {where}: {sorted(unknown)}")


@dataclass(frozen=True)
class DataConfig:
    """Dataset source: a SCADA CSV or the synthetic generator."""

    source: str = "synthetic"
    # synthetic
    n_train: int = 20000
    n_test: int = 8000
    train_start: datetime = datetime(2023, 1, 1, tzinfo=timezone.utc)
    test_start: datetime = datetime(2024, 1, 1, tzinfo=timezone.utc)
    generator: dict = field(default_factory=dict)
    test_overrides: dict = field(default_factory=dict)
    # csv
    path: str | None = None
    schema: str | dict = "generic"
    turbine_column: str | None = None
    turbine: str | None = None
    train_range: tuple | None = None
    test_range: tuple | None = None
    ti_correction: dict | None = None
    power_curve_csv: str | None = None
    # both
    validation_fraction: float = 0.20

    _ALLOWED = (
        "source", "n_train", "n_test", "train_start", "test_start", "generator",
        "test_overrides", "path", "schema", "turbine_column", "turbine",
        "train_range", "test_range", "ti_correction", "power_curve_csv",
        "validation_fraction",
    )

    @classmethod
    def from_dict(cls, raw: dict) -> "DataConfig":
        _check_keys(raw, cls._ALLOWED, "[data]")
        kwargs = dict(raw)
        source = kwargs.get("source", "synthetic")
        if source not in ("synthetic", "csv"):
            raise ConfigurationError("data source must be 'synthetic' or 'csv'")
        if source == "csv" and not kwargs.get("path"):
            raise ConfigurationError("csv data source needs a 'path'")
        for key in ("train_start", "test_start"):
            if key in kwargs:
                kwargs[key] = _parse_date(kwargs[key])
        for key in ("train_range", "test_range"):
            if kwargs.get(key) is not None:
                lo, hi = kwargs[key]
                kwargs[key] = (_parse_date(lo), _parse_date(hi))
        return cls(**kwargs)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full configuration of one experiment run."""

    kind: str
    out_dir: str = "results"
    master_seed: int = 0
    workers: int = 1
    models: tuple = DEFAULT_MODELS
    n_seeds: int = 10
    probe_size: int | None = 2000
    reference_kind: str = "zeros"
    data: DataConfig = field(default_factory=DataConfig)
    mlp: dict = field(default_factory=dict)
    ablation: dict = field(default_factory=dict)
    case1: dict = field(default_factory=dict)
    case2: dict = field(default_factory=dict)
    selection: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, compare=False)

    _ALLOWED = (
        "kind", "out_dir", "master_seed", "workers", "models", "n_seeds",
        "probe_size", "reference_kind", "data", "mlp", "ablation", "case1",
        "case2", "selection",
    )
    _ABLATION_KEYS = ("periods_months", "n_offsets")
    _CASE1_KEYS = ("l2_grid", "filter_grid_kw", "sweeps", "min_filtered_rows",
                   "base_l2")
    _CASE2_KEYS = ("yaw_max_deg", "bin_width_kw", "references")
    _SELECTION_KEYS = ("min_r2_phys", "rmse_weight", "strategy_weight")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        _check_keys(raw, cls._ALLOWED, "config")
        if "kind" not in raw:
            raise ConfigurationError("config needs a 'kind'")
        kwargs = dict(raw)
        kwargs["data"] = DataConfig.from_dict(dict(raw.get("data", {})))
        if "models" in kwargs:
            models = tuple(kwargs["models"])
            unknown = set(models) - set(DEFAULT_MODELS)
            if unknown:
                raise ConfigurationError(f"unknown model kind(s): {sorted(unknown)}")
            kwargs["models"] = models
        for section, allowed in (("ablation", cls._ABLATION_KEYS),
                                 ("case1", cls._CASE1_KEYS),
                                 ("case2", cls._CASE2_KEYS),
                                 ("selection", cls._SELECTION_KEYS)):
            if section in kwargs:
                _check_keys(kwargs[section], allowed, f"[{section}]")
        kwargs["raw"] = raw
        return cls(**kwargs)

    @property
    def hash(self) -> str:
        return config_hash(self.raw if self.raw else {"kind": self.kind})

    def seed(self, *parts) -> int:
        return derive_seed(self.master_seed, *parts)

    def out_path(self) -> Path:
        path = Path(self.out_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a TOML or JSON experiment config and apply flag overrides."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file {path} does not exist")
    if path.suffix.lower() == ".json":
        raw = json.loads(path.read_text())
    else:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    if overrides:
        raw = apply_overrides(raw, overrides)
    return ExperimentConfig.from_dict(raw)


def apply_overrides(raw: dict, overrides: dict) -> dict:
    """Apply CLI flag overrides (seed/out/data/turbine/kind) onto a raw config."""
    raw = json.loads(json.dumps(raw, default=str))  # deep copy, JSON-safe
    if overrides.get("kind") is not None:
        raw["kind"] = overrides["kind"]
    if overrides.get("seed") is not None:
        raw["master_seed"] = int(overrides["seed"])
    if overrides.get("out") is not None:
        raw["out_dir"] = str(overrides["out"])
    data_flag = overrides.get("data")
    if data_flag is not None:
        section = dict(raw.get("data", {}))
        if data_flag == "synthetic":
            section["source"] = "synthetic"
            section.pop("path", None)
        else:
            section["source"] = "csv"
            section["path"] = str(data_flag)
        raw["data"] = section
    if overrides.get("turbine") is not None:
        section = dict(raw.get("data", {}))
        section["turbine"] = overrides["turbine"]
        raw["data"] = section
    return raw
