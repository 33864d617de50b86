"""Full-year model benchmark: mean/std test RMSE per model kind."""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from ..models import evaluate_rmse
from .config import DETERMINISTIC_KINDS, ExperimentConfig
from .data import make_model, prepare_dataset
from .io import write_csv, write_summary

RUN_FIELDS = ("model", "seed", "status", "rmse_val", "rmse_test", "error")
SUMMARY_FIELDS = ("model", "n_runs", "mean_rmse_test", "std_rmse_test")


def run_benchmark(cfg: ExperimentConfig) -> dict:
    """Train every configured model kind and report test RMSE statistics.

    Deterministic kinds run once; seeded kinds run ``n_seeds`` times with
    derived seeds.  A failed training run is recorded and the benchmark
    continues.
    """
    prepared = prepare_dataset(cfg)
    rows = []
    for kind in cfg.models:
        if kind in DETERMINISTIC_KINDS:
            seeds = [0]
        else:
            seeds = [cfg.seed("benchmark", kind, i) for i in range(cfg.n_seeds)]
        for seed in seeds:
            row = {"model": kind, "seed": seed}
            try:
                model = make_model(kind, seed, prepared.curve, cfg.mlp)
                model.fit(prepared.train, prepared.validation)
                row["status"] = "ok"
                row["rmse_val"] = evaluate_rmse(model, prepared.validation)
                row["rmse_test"] = evaluate_rmse(model, prepared.test)
            except TrainingError as exc:
                row["status"] = "failed"
                row["error"] = str(exc)
            rows.append(row)

    summary_rows = []
    for kind in cfg.models:
        values = [r["rmse_test"] for r in rows
                  if r["model"] == kind and r["status"] == "ok"]
        if not values:
            continue
        arr = np.asarray(values)
        summary_rows.append({
            "model": kind,
            "n_runs": len(values),
            "mean_rmse_test": float(arr.mean()),
            "std_rmse_test": float(arr.std(ddof=1)) if len(values) > 1 else 0.0,
        })

    out = cfg.out_path()
    write_csv(out / "benchmark_runs.csv", RUN_FIELDS, rows)
    write_csv(out / "benchmark_summary.csv", SUMMARY_FIELDS, summary_rows)
    payload = {
        "experiment": "benchmark",
        "config_hash": cfg.hash,
        "n_train": prepared.train.n_rows,
        "n_validation": prepared.validation.n_rows,
        "n_test": prepared.test.n_rows,
        "results": {row["model"]: {"mean_rmse_test": row["mean_rmse_test"],
                                   "std_rmse_test": row["std_rmse_test"],
                                   "n_runs": row["n_runs"]}
                    for row in summary_rows},
        "files": ["benchmark_runs.csv", "benchmark_summary.csv"],
    }
    write_summary(out / "benchmark_summary.json", payload)
    return payload
