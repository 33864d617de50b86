"""Training-period ablation: model quality and strategy vs. amount of training data.

For each period length, a fixed number of start offsets is spread equally
over the training year (periods wrap within the year).  Every model is
evaluated on the full test year; models are gated on beating the physics
baseline on their own validation set.
"""

from __future__ import annotations

from datetime import timedelta

import numpy as np
from scipy import stats

from ..errors import DataError, TrainingError
from ..models import PhysicsBaseline, evaluate_rmse
from ..scada import build_feature_matrix, sample_validation, stratified_indices
from ..strategy import evaluate_strategy
from ..xai import build_reference
from .config import ExperimentConfig
from .data import make_model, prepare_dataset
from .io import write_csv, write_summary
from .pool import parallel_map

DEFAULT_PERIODS = (0.5, 1.0, 2.0, 3.0, 6.0, 9.0, 12.0)

FIELDS = (
    "period_months", "offset", "model", "seed", "status", "n_train",
    "rmse_val", "rmse_test", "phys_rmse_val", "passed_gate",
    "r_wind_speed", "r_air_density", "r_turbulence", "r2_phys", "error",
)


def _select_wrapped(pool, span_start, span_seconds, offset_seconds, dur_seconds):
    a = offset_seconds % span_seconds
    b = a + dur_seconds
    selected = []
    for r in pool:
        rel = (r.timestamp - span_start).total_seconds()
        inside = a <= rel < b if b <= span_seconds \
            else (rel >= a or rel < b - span_seconds)
        if inside:
            selected.append(r)
    return selected


def _grid_point(shared, task):
    cfg, pool, test_records, curve, span_start, span_seconds, probe_size = shared
    months, offset = task
    dur = span_seconds * (months / 12.0)
    offset_seconds = span_seconds * (offset / cfg.ablation.get("n_offsets", 12))
    selected = _select_wrapped(pool, span_start, span_seconds, offset_seconds, dur)

    rows = []
    model_kinds = [k for k in cfg.models if k != "phys_base"]
    base = {"period_months": months, "offset": offset, "n_train": len(selected)}
    try:
        train_records, val_records = sample_validation(
            selected, cfg.data.validation_fraction,
            cfg.seed("ablation-val", months, offset))
        train = build_feature_matrix(train_records)
        validation = build_feature_matrix(val_records, scaler=train.scaler)
        test = build_feature_matrix(test_records, scaler=train.scaler)
    except DataError as exc:
        for kind in model_kinds:
            rows.append({**base, "model": kind, "status": "skipped",
                         "error": str(exc)})
        return rows

    physics = PhysicsBaseline(curve=curve).fit(train)
    phys_rmse_val = evaluate_rmse(physics, validation)
    probe_idx = stratified_indices(test, probe_size, cfg.seed("probe")) \
        if probe_size else np.arange(test.n_rows)
    probe = test.subset(probe_idx)
    reference = build_reference(cfg.reference_kind, train)

    for kind in model_kinds:
        seed = cfg.seed("ablation", months, offset, kind)
        row = {**base, "model": kind, "seed": seed,
               "phys_rmse_val": phys_rmse_val}
        try:
            model = make_model(kind, seed, curve, cfg.mlp)
            model.fit(train, validation)
            report = evaluate_strategy(model, physics, probe, reference)
            row.update({
                "status": "ok",
                "rmse_val": evaluate_rmse(model, validation),
                "rmse_test": evaluate_rmse(model, test),
                "r_wind_speed": report.correlations[0],
                "r_air_density": report.correlations[1],
                "r_turbulence": report.correlations[2],
                "r2_phys": report.r2_phys,
            })
            row["passed_gate"] = row["rmse_val"] < phys_rmse_val
        except TrainingError as exc:
            row.update({"status": "failed", "error": str(exc)})
        rows.append(row)
    return rows


def run_period_ablation(cfg: ExperimentConfig) -> dict:
    """Run the training-period grid and summarize strategy/error correlations."""
    prepared = prepare_dataset(cfg)
    pool = sorted(prepared.train_records + prepared.validation_records,
                  key=lambda r: r.timestamp)
    span_start = pool[0].timestamp
    span_seconds = (pool[-1].timestamp - span_start
                    + timedelta(minutes=10)).total_seconds()

    periods = tuple(cfg.ablation.get("periods_months", DEFAULT_PERIODS))
    n_offsets = int(cfg.ablation.get("n_offsets", 12))
    tasks = [(float(m), k) for m in periods for k in range(n_offsets)]
    shared = (cfg, pool, prepared.test_records, prepared.curve,
              span_start, span_seconds, cfg.probe_size)
    rows = [row for chunk in parallel_map(_grid_point, tasks, shared, cfg.workers)
            for row in chunk]

    ok = [r for r in rows if r.get("status") == "ok"]
    survivors = [r for r in ok if r.get("passed_gate")]
    payload = {
        "experiment": "ablation",
        "config_hash": cfg.hash,
        "n_grid_points": len(tasks),
        "n_models_trained": len(ok),
        "n_survivors": len(survivors),
        "files": ["ablation_runs.csv"],
    }
    if len(survivors) >= 3:
        r2 = np.array([r["r2_phys"] for r in survivors])
        rmse_test = np.array([r["rmse_test"] for r in survivors])
        rmse_val = np.array([r["rmse_val"] for r in survivors])
        spearman = stats.spearmanr(r2, rmse_test)
        payload["spearman_r2_phys_vs_rmse_test"] = float(spearman.statistic)
        payload["pearson_r2_phys_vs_rmse_test"] = float(
            stats.pearsonr(r2, rmse_test).statistic)
        payload["spearman_rmse_val_vs_rmse_test"] = float(
            stats.spearmanr(rmse_val, rmse_test).statistic)

    out = cfg.out_path()
    write_csv(out / "ablation_runs.csv", FIELDS, rows)
    write_summary(out / "ablation_summary.json", payload)
    return payload
