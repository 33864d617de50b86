"""Command line interface for the experiment suite.

Subcommands: benchmark, ablation, case1 (regularization paths), case2 (yaw
faithfulness), explain (single-record decomposition), synth (dataset
generation).  Exit status is nonzero only for configuration or IO problems,
never for model-quality outcomes.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigurationError, DataError, SchemaError
from .experiments import (
    ExperimentConfig,
    apply_overrides,
    load_config,
    run_benchmark,
    run_case_study_regularization,
    run_case_study_yaw,
    run_period_ablation,
)
from .experiments.data import _resolve_schema, synth_config
from .experiments.explain import explain_instance
from .experiments.io import write_csv
from .models import load_model
from .physics import generic_2mw_curve
from .scada import (
    YAW_MISALIGNMENT,
    build_feature_matrix,
    filter_operational,
    load_scada_csv,
    save_scada_csv,
    synthesize_scada,
)
from .xai import build_reference

_RUNNERS = {
    "benchmark": run_benchmark,
    "ablation": run_period_ablation,
    "case1": run_case_study_regularization,
    "case2": run_case_study_yaw,
}


def _add_common_flags(parser) -> None:
    parser.add_argument("--config", type=Path, help="TOML or JSON experiment config")
    parser.add_argument("--seed", type=int, help="override the master RNG seed")
    parser.add_argument("--out", type=Path, help="override the output directory")
    parser.add_argument("--data", help="dataset override: a CSV path or 'synthetic'")
    parser.add_argument("--turbine", help="turbine id filter for multi-turbine CSVs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="windxai",
        description="Power curve models with strategy validation against "
                    "a physics-informed baseline.")
    sub = parser.add_subparsers(dest="command", required=True)

    for command, title in (
        ("benchmark", "full-year RMSE benchmark over all model kinds"),
        ("ablation", "training-period ablation with strategy scores"),
        ("case1", "L2 / physics-filter / hybrid regularization paths"),
        ("case2", "yaw misalignment attribution faithfulness"),
    ):
        p = sub.add_parser(command, help=title)
        _add_common_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic SCADA dataset CSV")
    _add_common_flags(p)
    p.add_argument("--n", type=int, help="number of 10-minute records")

    p = sub.add_parser("explain", help="per-feature kW decomposition of one record")
    _add_common_flags(p)
    p.add_argument("--model", type=Path, required=True, help="trained model JSON")
    p.add_argument("--row", type=int, default=0, help="record index to explain")
    p.add_argument("--ref", default="informed_conditional",
                   help="reference point kind")
    p.add_argument("--schema", default="generic", help="CSV schema preset")
    return parser


def _build_config(args, kind: str) -> ExperimentConfig:
    overrides = {"kind": kind, "seed": args.seed, "out": args.out,
                 "data": args.data, "turbine": args.turbine}
    if args.config is not None:
        return load_config(args.config, overrides)
    return ExperimentConfig.from_dict(apply_overrides({"kind": kind}, overrides))


def _cmd_experiment(args) -> int:
    cfg = _build_config(args, args.command)
    payload = _RUNNERS[args.command](cfg)
    print(f"{args.command}: wrote {', '.join(payload['files'])} "
          f"to {cfg.out_dir} (config {payload['config_hash']})")
    return 0


def _cmd_synth(args) -> int:
    cfg = _build_config(args, "synth")
    n = args.n if args.n is not None else cfg.data.n_train
    records = synthesize_scada(synth_config(cfg.data), generic_2mw_curve(), n,
                               cfg.seed("train-data"))
    out = args.out if args.out is not None else Path(cfg.out_dir) / "synthetic.csv"
    out = Path(out)
    if out.suffix != ".csv":
        out.mkdir(parents=True, exist_ok=True)
        out = out / "synthetic.csv"
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
    save_scada_csv(records, out)
    print(f"synth: wrote {len(records)} records to {out}")
    return 0


def _cmd_explain(args) -> int:
    if args.data in (None, "synthetic"):
        raise ConfigurationError("explain needs --data pointing to a SCADA CSV")
    model = load_model(args.model)
    result = load_scada_csv(args.data, _resolve_schema(args.schema))
    records = filter_operational(result.records)
    if not records:
        raise DataError("no operational records in the provided dataset")
    if not 0 <= args.row < len(records):
        raise ConfigurationError(
            f"--row must lie in [0, {len(records) - 1}] after filtering")
    include_yaw = YAW_MISALIGNMENT in model.feature_names
    train = build_feature_matrix(records, scaler=model.scaler,
                                 include_yaw=include_yaw)
    reference = build_reference(args.ref, train)
    attribution = explain_instance(model, records[args.row], reference)

    rows = [{"feature": name, "relevance_kw": float(value)}
            for name, value in zip(attribution.feature_names,
                                   attribution.per_feature)]
    rows.append({"feature": "model_output", "relevance_kw": attribution.model_output})
    rows.append({"feature": "reference_output",
                 "relevance_kw": attribution.reference_output})
    out_dir = Path(args.out) if args.out is not None else Path("results")
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(out_dir / "explain.csv", ("feature", "relevance_kw"), rows)

    print(f"record {args.row} @ {records[args.row].timestamp.isoformat()}"
          f" (reference: {args.ref})")
    for name, value in zip(attribution.feature_names, attribution.per_feature):
        print(f"  {name:>22}: {value:+10.2f} kW")
    print(f"  {'model output':>22}: {attribution.model_output:10.2f} kW")
    print(f"  {'reference output':>22}: {attribution.reference_output:10.2f} kW")
    print(f"  completeness residual: {attribution.completeness_residual:.2e} kW")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in _RUNNERS:
            return _cmd_experiment(args)
        if args.command == "synth":
            return _cmd_synth(args)
        return _cmd_explain(args)
    except (ConfigurationError, SchemaError, DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
