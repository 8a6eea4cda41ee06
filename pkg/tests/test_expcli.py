import json
from fractions import Fraction

import pytest

import linerigidity as lr
from linerigidity import ValidationError
from linerigidity.expcli import (ExperimentConfig, EXPERIMENTS, main,
                                 run_experiment)
from linerigidity.jsonio import graph_io
from linerigidity.rng import SplitMix64


class TestGraphIO:
    def test_graph_roundtrip(self, tmp_path, triangle):
        path = tmp_path / "g.json"
        graph_io("store", path, triangle)
        assert graph_io("load", path) == triangle

    def test_labels_roundtrip(self, tmp_path):
        g = lr.build_multigraph(2, [(0, 1), (1, 1)], labels={0: "a", 1: "b"})
        path = tmp_path / "g.json"
        graph_io("store", path, g)
        assert graph_io("load", path) == g

    def test_embedding_roundtrip(self, tmp_path):
        emb = lr.LineEmbedding([0, 1, Fraction(7, 3)])
        path = tmp_path / "e.json"
        graph_io("store", path, emb)
        loaded = graph_io("load", path)
        assert loaded == emb
        assert "7/3" in path.read_text()

    def test_sample_roundtrip(self, tmp_path):
        params = lr.ModelParams(n=120, lam=Fraction(3))
        sample = lr.sample_two_core(params, SplitMix64(3))
        path = tmp_path / "s.json"
        graph_io("store", path, sample)
        loaded = graph_io("load", path)
        assert loaded.kernel == sample.kernel
        assert loaded.core == sample.core
        assert loaded.path_lengths == sample.path_lengths
        assert loaded.degseq == sample.degseq

    def test_duplicate_positions_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"positions": ["1", "2/2"]}')
        with pytest.raises(ValidationError):
            graph_io("load", path)

    def test_error_carries_locus(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n": 3, "edges": [[0, 1], [1, "x"]]}')
        with pytest.raises(ValidationError, match=r"edges\[1\]"):
            graph_io("load", path)

    def test_decimal_positions_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"positions": ["0.5", "1"]}')
        with pytest.raises(ValidationError, match=r"positions\[0\]"):
            graph_io("load", path)


class TestConfig:
    def test_roundtrip(self):
        cfg = ExperimentConfig(experiment="core-reconstruction", n=50,
                               lam=Fraction(5, 2), trials=3, master_seed=9,
                               caps={"class_cap": 64}, output_path="x.csv")
        again = ExperimentConfig.from_json(cfg.to_json())
        assert again == cfg

    def test_unknown_experiment(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(experiment="nope")

    def test_nonpositive_cap(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(experiment="prune-stats", caps={"x": 0})


class TestExperiments:
    def test_rerun_is_byte_identical(self, tmp_path):
        quick = {
            "core-reconstruction": dict(n=40, trials=3),
            "regular-reconstruction": dict(n=10, degree=3, trials=3),
            "anchor-census": dict(n=150, trials=2, caps={"census_size": 3}),
            "path-extension": dict(n=200, trials=50,
                                   caps={"s_min": 1, "s_max": 3}),
            "validate-models": dict(n=150, trials=2),
            "expansion-audit": dict(n=150, trials=2,
                                    caps={"expansion_budget": 30}),
            "prune-stats": dict(n=400, lam=Fraction(3, 2), trials=2),
        }
        for name in EXPERIMENTS:
            kw = dict(quick[name])
            caps = kw.pop("caps", {})
            out1 = tmp_path / f"{name}-1.csv"
            out2 = tmp_path / f"{name}-2.csv"
            r1 = run_experiment(ExperimentConfig(
                experiment=name, master_seed=5, caps=caps,
                output_path=str(out1), **kw))
            r2 = run_experiment(ExperimentConfig(
                experiment=name, master_seed=5, caps=caps,
                output_path=str(out2), **kw))
            assert out1.read_bytes() == out2.read_bytes(), name
            assert r1.summary["config"] == r2.summary["config"]

    def test_rerun_from_summary_config(self, tmp_path):
        out = tmp_path / "a.csv"
        cfg = ExperimentConfig(experiment="core-reconstruction", n=30,
                               trials=3, master_seed=77, output_path=str(out))
        first = run_experiment(cfg)
        echoed = ExperimentConfig.from_json(first.summary["config"])
        echoed.output_path = str(tmp_path / "b.csv")
        second = run_experiment(echoed)
        assert (tmp_path / "b.csv").read_text() == out.read_text()

    def test_workers_do_not_change_output(self, tmp_path):
        base = dict(experiment="path-extension", n=100, trials=20,
                    caps={"s_min": 1, "s_max": 4}, master_seed=3)
        serial = run_experiment(ExperimentConfig(
            output_path=str(tmp_path / "s.csv"), workers=1, **base))
        parallel = run_experiment(ExperimentConfig(
            output_path=str(tmp_path / "p.csv"), workers=2, **base))
        assert (tmp_path / "s.csv").read_bytes() == (tmp_path / "p.csv").read_bytes()

    def test_core_reconstruction_degenerate_density(self, tmp_path):
        # lam = 0 means edge probability zero: empty two-core in every trial
        cfg = ExperimentConfig(experiment="core-reconstruction", n=30,
                               lam=Fraction(0), trials=3, master_seed=1,
                               output_path=str(tmp_path / "zero.csv"))
        result = run_experiment(cfg)
        for row in result.rows:
            assert row[2] == "ok"
            assert row[3] == "0" and row[5] == "0" and row[6] == ""

    def test_path_extension_single_edge_mismatch_never_extends(self, tmp_path):
        cfg = ExperimentConfig(experiment="path-extension", n=500, trials=300,
                               master_seed=11, caps={"s_min": 1, "s_max": 1},
                               output_path=str(tmp_path / "s1.csv"))
        result = run_experiment(cfg)
        header = result.rows[0]
        assert float(result.rows[0][6]) == 0.0  # hits column

    def test_failed_trials_recorded_not_raised(self, tmp_path):
        # an absurdly small search budget forces trial failures
        cfg = ExperimentConfig(experiment="core-reconstruction", n=60,
                               trials=3, master_seed=2,
                               caps={"combination_cap": 1},
                               output_path=str(tmp_path / "f.csv"))
        result = run_experiment(cfg)
        assert len(result.rows) == 3
        assert result.summary["trials_failed"] >= 1

    def test_summary_contents(self, tmp_path):
        cfg = ExperimentConfig(experiment="regular-reconstruction", n=8,
                               degree=3, trials=2, master_seed=4,
                               output_path=str(tmp_path / "r.csv"))
        result = run_experiment(cfg)
        assert result.summary["rows"] == 2
        assert "version" in result.summary
        assert "wall_clock_seconds" in result.summary
        data = json.loads(result.summary_path.read_text())
        assert data["config"]["experiment"] == "regular-reconstruction"


class TestCli:
    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["not-an-experiment"])
        assert exc.value.code == 2

    def test_validation_error_exit_code(self, tmp_path, capsys):
        # anchor-census needs lam > 1
        code = main(["anchor-census", "--lambda", "1", "--n", "50",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 3

    def test_experiment_run_and_caps(self, tmp_path, capsys):
        out = tmp_path / "cli.csv"
        code = main(["path-extension", "--n", "100", "--trials", "10",
                     "--seed", "3", "--cap.s_min", "1", "--cap.s_max=2",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 3  # header plus one row per path length

    def test_graph_load_store(self, tmp_path, triangle, capsys):
        src = tmp_path / "in.json"
        dst = tmp_path / "out.json"
        graph_io("store", src, triangle)
        assert main(["graph", "load", str(src)]) == 0
        assert main(["graph", "store", str(dst), "--from", str(src)]) == 0
        assert graph_io("load", dst) == triangle

    def test_graph_load_invalid_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"positions": ["1", "1"]}')
        assert main(["graph", "load", str(bad)]) == 3
