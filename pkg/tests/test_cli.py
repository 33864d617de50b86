import json

import pytest

from windxai.cli import main


def write_config(path, raw):
    path.write_text(json.dumps(raw))
    return path


def tiny_config(out_dir, kind="benchmark"):
    return {
        "kind": kind,
        "out_dir": str(out_dir),
        "master_seed": 5,
        "models": ["phys_base", "plr"],
        "n_seeds": 1,
        "probe_size": 80,
        "data": {"source": "synthetic", "n_train": 700, "n_test": 300,
                 "generator": {"noise_std_kw": 10.0}},
    }


class TestCli:
    def test_benchmark_subcommand(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.json", tiny_config(tmp_path / "out"))
        assert main(["benchmark", "--config", str(cfg)]) == 0
        assert (tmp_path / "out" / "benchmark_summary.json").exists()
        assert "benchmark" in capsys.readouterr().out

    def test_out_and_seed_overrides(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", tiny_config(tmp_path / "a"))
        assert main(["benchmark", "--config", str(cfg),
                     "--out", str(tmp_path / "b"), "--seed", "9"]) == 0
        summary = json.loads((tmp_path / "b" / "benchmark_summary.json").read_text())
        assert summary["experiment"] == "benchmark"

    def test_synth_writes_csv(self, tmp_path):
        out = tmp_path / "data.csv"
        assert main(["synth", "--out", str(out), "--n", "120", "--seed", "3"]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 121

    def test_explain_round_trip(self, tmp_path):
        from windxai import (
            PiecewiseLinearModel,
            build_feature_matrix,
            filter_operational,
            load_scada_csv,
            save_model,
        )

        data = tmp_path / "data.csv"
        assert main(["synth", "--out", str(data), "--n", "900", "--seed", "3"]) == 0
        records = filter_operational(load_scada_csv(data).records)
        train = build_feature_matrix(records)
        model = PiecewiseLinearModel().fit(train)
        model_path = tmp_path / "plr.json"
        save_model(model, model_path)
        assert main(["explain", "--model", str(model_path), "--data", str(data),
                     "--row", "4", "--ref", "informed_conditional",
                     "--out", str(tmp_path / "exp")]) == 0
        text = (tmp_path / "exp" / "explain.csv").read_text()
        assert "wind_speed" in text and "model_output" in text

    def test_missing_config_is_exit_2(self, tmp_path, capsys):
        assert main(["benchmark", "--config", str(tmp_path / "nope.toml")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_data_flag_is_exit_2(self, tmp_path, capsys):
        assert main(["explain", "--model", str(tmp_path / "m.json")]) == 2

    def test_unknown_config_key_is_exit_2(self, tmp_path, capsys):
        raw = tiny_config(tmp_path / "out")
        raw["mystery"] = 1
        cfg = write_config(tmp_path / "cfg.json", raw)
        assert main(["benchmark", "--config", str(cfg)]) == 2
