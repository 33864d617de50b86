"""Regularization case study: pushing a large network toward physics-like strategies.

Three interventions on the same training data: stronger L2 penalties, a
physics-informed training-data filter (drop rows where the baseline error
exceeds a threshold) and the physics-residual hybrid.  Every run reports
clean-test RMSE and the strategy similarity score.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from ..models import HybridResidualModel, MlpModel, PhysicsBaseline, ann_large_config
from ..models import evaluate_rmse
from ..scada import stratified_probe
from ..strategy import evaluate_strategy
from ..xai import build_reference
from .config import ExperimentConfig
from .data import make_model, prepare_dataset
from .io import write_csv, write_summary
from .pool import parallel_map

DEFAULT_L2_GRID = (0.05, 0.1, 0.2, 0.5, 1.0)
DEFAULT_FILTER_GRID = (100.0, 50.0, 25.0, 10.0)
DEFAULT_SWEEPS = ("l2", "filter", "hybrid")
DEFAULT_BASE_L2 = 0.05
DEFAULT_MIN_ROWS = 500

FIELDS = (
    "method", "parameter", "seed", "status", "n_train", "rmse_test",
    "r_wind_speed", "r_air_density", "r_turbulence", "r2_phys", "error",
)


def _run_point(shared, task):
    (cfg, prepared, physics, probe, reference, filter_indices) = shared
    method, parameter, seed_index = task
    seed = cfg.seed("case1", method, parameter, seed_index)
    row = {"method": method, "parameter": parameter, "seed": seed}
    train = prepared.train
    try:
        if method == "l2":
            overrides = {**cfg.mlp, "l2_penalty": float(parameter)}
            model = MlpModel(ann_large_config(rng_seed=seed, **overrides))
        elif method == "filter":
            idx = filter_indices[float(parameter)]
            train = prepared.train.subset(idx)
            model = MlpModel(ann_large_config(rng_seed=seed, **cfg.mlp))
        elif method == "hybrid":
            model = make_model("hybrid", seed, prepared.curve, cfg.mlp)
        else:
            raise TrainingError(f"unknown sweep method '{method}'")
        row["n_train"] = train.n_rows
        model.fit(train, prepared.validation)
        report = evaluate_strategy(model, physics, probe, reference)
        row.update({
            "status": "ok",
            "rmse_test": evaluate_rmse(model, prepared.test),
            "r_wind_speed": report.correlations[0],
            "r_air_density": report.correlations[1],
            "r_turbulence": report.correlations[2],
            "r2_phys": report.r2_phys,
        })
    except TrainingError as exc:
        row.update({"status": "failed", "error": str(exc)})
    return row


def run_case_study_regularization(cfg: ExperimentConfig) -> dict:
    """Sweep L2 strength, physics-filter thresholds and the hybrid model."""
    prepared = prepare_dataset(cfg)
    physics = PhysicsBaseline(curve=prepared.curve).fit(prepared.train)
    probe = stratified_probe(prepared.test, cfg.probe_size or prepared.test.n_rows,
                             cfg.seed("probe"))
    reference = build_reference(cfg.reference_kind, prepared.train)

    section = cfg.case1
    l2_grid = tuple(float(x) for x in section.get("l2_grid", DEFAULT_L2_GRID))
    filter_grid = tuple(float(x) for x in section.get("filter_grid_kw",
                                                      DEFAULT_FILTER_GRID))
    sweeps = tuple(section.get("sweeps", DEFAULT_SWEEPS))
    base_l2 = float(section.get("base_l2", DEFAULT_BASE_L2))
    min_rows = int(section.get("min_filtered_rows", DEFAULT_MIN_ROWS))

    # Filter masks are shared across seeds; thresholds leaving too few rows
    # are skipped with a warning in the summary.
    baseline_error = np.abs(physics.predict(prepared.train.rows)
                            - prepared.train.targets)
    filter_indices, skipped_thresholds = {}, []
    for thr in filter_grid:
        idx = np.flatnonzero(baseline_error <= thr)
        if idx.size < min_rows:
            skipped_thresholds.append(thr)
        else:
            filter_indices[thr] = idx

    tasks = []
    if "l2" in sweeps:
        grid = l2_grid if base_l2 in l2_grid else (base_l2, *l2_grid)
        tasks += [("l2", lam, i) for lam in grid for i in range(cfg.n_seeds)]
    else:
        tasks += [("l2", base_l2, i) for i in range(cfg.n_seeds)]  # baseline only
    if "filter" in sweeps:
        tasks += [("filter", thr, i) for thr in filter_grid
                  if thr in filter_indices for i in range(cfg.n_seeds)]
    if "hybrid" in sweeps:
        tasks += [("hybrid", "", i) for i in range(cfg.n_seeds)]

    shared = (cfg, prepared, physics, probe, reference, filter_indices)
    rows = parallel_map(_run_point, tasks, shared, cfg.workers)

    def mean_r2(method, parameter=None):
        values = [r["r2_phys"] for r in rows
                  if r["method"] == method and r["status"] == "ok"
                  and (parameter is None or r["parameter"] == parameter)]
        return float(np.mean(values)) if values else None

    filter_means = {thr: mean_r2("filter", thr) for thr in filter_grid
                    if thr in filter_indices}
    ordered = [filter_means[thr] for thr in sorted(filter_means, reverse=True)]
    payload = {
        "experiment": "case1",
        "config_hash": cfg.hash,
        "n_train": prepared.train.n_rows,
        "baseline_l2": base_l2,
        "baseline_mean_r2_phys": mean_r2("l2", base_l2),
        "l2_mean_r2_phys": {repr(lam): mean_r2("l2", lam) for lam in l2_grid},
        "filter_mean_r2_phys": {repr(thr): filter_means[thr] for thr in filter_means},
        "filter_monotone_non_decreasing": all(
            b >= a for a, b in zip(ordered, ordered[1:])) if ordered else None,
        "hybrid_mean_r2_phys": mean_r2("hybrid"),
        "skipped_filter_thresholds": skipped_thresholds,
        "files": ["case1_runs.csv"],
    }
    out = cfg.out_path()
    write_csv(out / "case1_runs.csv", FIELDS, rows)
    write_summary(out / "case1_summary.json", payload)
    return payload
