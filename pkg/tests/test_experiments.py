import json

import pytest

from minterp import (
    ExperimentConfig,
    run_bound_audit,
    run_scale_study,
    run_verify_lemma,
    write_study,
)
from minterp.cli import main
from minterp.experiments import DEFAULT_M_GRID, result_basename


def make_config(**kwargs):
    base = dict(
        kind="verify-lemma",
        lemma="resnet-add",
        d_grid=(2,),
        n_grid=(8,),
        trials=3,
        seed=11,
        probe_points=50,
        quadrature=20_000,
        n_atoms=8,
        n_test=200,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


class TestExperimentConfig:
    def test_scalar_grid_coerced_to_tuple(self):
        cfg = ExperimentConfig(n_grid=16, d_grid=3)
        assert cfg.n_grid == (16,)
        assert cfg.d_grid == (3,)

    def test_from_dict_round_trip_and_unknown_key(self):
        cfg = ExperimentConfig.from_dict({"n_grid": [8, 16], "trials": 2})
        assert cfg.n_grid == (8, 16)
        with pytest.raises(ValueError, match="unknown config keys: widthz"):
            ExperimentConfig.from_dict({"widthz": 1})

    def test_echo_excludes_out_and_listifies_grids(self):
        cfg = ExperimentConfig(n_grid=(8, 16), out="/tmp/somewhere")
        echo = cfg.echo()
        assert "out" not in echo
        assert echo["n_grid"] == [8, 16]
        assert echo["seed"] == 0

    @pytest.mark.parametrize(
        "bad",
        [
            {"kind": "other"},
            {"model": "tree"},
            {"trials": 0},
            {"delta": 0.0},
            {"delta": 1.0},
            {"seed": -1},
            {"n_grid": ()},
            {"n_grid": (0,)},
            {"width_factor": 0.0},
            {"m_cap": 0},
            {"lambda_target": -1.0},
            {"rcond": 0.0},
        ],
    )
    def test_validation(self, bad):
        with pytest.raises(ValueError):
            ExperimentConfig(**bad)

    def test_default_m_grid_is_powers_of_two(self):
        assert DEFAULT_M_GRID[0] == 64 and DEFAULT_M_GRID[-1] == 16384


class TestVerifyLemma:
    def test_unknown_selector(self):
        with pytest.raises(ValueError, match="unknown lemma selector"):
            run_verify_lemma(make_config(lemma="no-such-lemma"))

    def test_wrong_kind_rejected(self):
        cfg = make_config(kind="scale-study", lemma=None, model="rf")
        with pytest.raises(ValueError, match="verify-lemma"):
            run_verify_lemma(cfg)
        with pytest.raises(ValueError, match="scale-study"):
            run_scale_study(make_config())
        with pytest.raises(ValueError, match="bound-audit"):
            run_bound_audit(make_config())

    def test_resnet_add_small(self):
        result = run_verify_lemma(make_config(lemma="resnet-add", trials=5))
        assert len(result.rows) == 5
        assert result.failures == 0
        assert result.pass_fraction == 1.0
        assert result.summary["lemma"] == "resnet-add"

    def test_embedding_small(self):
        result = run_verify_lemma(make_config(lemma="embedding", trials=5))
        assert result.pass_fraction == 1.0
        for row in result.rows:
            assert row["norm_ratio"] == pytest.approx(3.0)

    def test_kernel_approx_small(self):
        cfg = make_config(lemma="kernel-approx", m_grid=(32, 64), trials=3)
        result = run_verify_lemma(cfg)
        assert len(result.rows) == 2 * 3
        assert result.columns[:4] == ("trial", "n", "m", "delta")
        assert set(result.summary["per_m_pass"]) == {"32", "64"}
        assert result.summary["min_per_m_pass"] == 1.0
        assert result.summary["lambda_min_K"] > 0

    def test_krr_bound_small(self):
        result = run_verify_lemma(make_config(lemma="krr-bound", trials=3))
        assert result.pass_fraction == 1.0
        for row in result.rows:
            assert row["reproduce_error"] <= 1e-8
            assert row["surrogate_norm"] >= 0.0

    def test_fit_rand_label_small(self):
        cfg = make_config(
            lemma="fit-rand-label", n_grid=(6,), m2=512, lambda_target=1e-4
        )
        result = run_verify_lemma(cfg)
        assert result.pass_fraction == 1.0
        for row in result.rows:
            assert row["lambda_ref"] == 1e-4
            assert row["interp_error"] <= 1e-8

    def test_two_layer_composite_small(self):
        cfg = make_config(
            lemma="two-layer-composite", n_grid=(6,), m1=64, m2=1024, trials=2
        )
        result = run_verify_lemma(cfg)
        assert result.failures == 0
        assert result.pass_fraction == 1.0
        for row in result.rows:
            assert row["path_norm"] <= 3.0 * row["teacher_norm"]

    def test_trial_crash_is_isolated(self):
        # an unreachable eigenvalue floor makes every trial raise inside the
        # worker; rows must record the error instead of aborting the run
        cfg = make_config(
            lemma="fit-rand-label",
            n_grid=(6,),
            m2=64,
            lambda_target=1e9,
            max_resamples=1,
        )
        result = run_verify_lemma(cfg)
        assert result.failures == len(result.rows) == 3
        assert result.pass_fraction == 0.0
        for row in result.rows:
            assert row["error"].startswith("ConcentrationFailureError")


@pytest.fixture(scope="module")
def scale_pair():
    cfg = ExperimentConfig(
        kind="scale-study",
        model="rf",
        d_grid=(2,),
        n_grid=(8, 12, 16, 24),
        m_per_n=16,
        trials=2,
        n_test=500,
        n_atoms=8,
        rad_draws=4,
        seed=13,
    )
    audit_cfg = ExperimentConfig.from_dict({**cfg.echo(), "kind": "bound-audit"})
    return run_scale_study(cfg, threads=1), run_bound_audit(audit_cfg, threads=1)


class TestScaleEngine:
    def test_row_count_and_columns(self, scale_pair):
        scale, _ = scale_pair
        assert len(scale.rows) == 4 * 2
        assert "test_risk" in scale.columns and "bound" in scale.columns
        for row in scale.rows:
            assert row["error"] == ""
            assert row["test_risk"] >= 0.0
            assert isinstance(row["threshold_met"], bool)
            assert "bound" not in row

    def test_summary_has_slope_and_quartiles(self, scale_pair):
        scale, _ = scale_pair
        assert set(scale.summary["per_n"]) == {"8", "12", "16", "24"}
        for stats in scale.summary["per_n"].values():
            assert stats["q25"] <= stats["median"] <= stats["q75"]
            assert stats["trials"] == 2
        assert "slope" in scale.summary

    def test_audit_adds_bound_columns(self, scale_pair):
        _, audit = scale_pair
        for row in audit.rows:
            assert 0.0 <= row["rad_lower"] <= row["rad_upper"] * (1 + 1e-9)
            assert row["bound"] >= row["empirical_risk"]
        assert 0.0 <= audit.summary["bound_pass_fraction"] <= 1.0

    def test_audit_rows_match_scale_rows_on_shared_columns(self, scale_pair):
        scale, audit = scale_pair
        shared = ("trial", "model_kind", "n", "m_or_L", "norm_radius",
                  "empirical_risk", "test_risk", "threshold_met", "error")
        for a, b in zip(scale.rows, audit.rows):
            for key in shared:
                assert a[key] == b[key]

    def test_short_grid_flags_missing_slope(self):
        cfg = ExperimentConfig(
            kind="scale-study", model="rf", d_grid=(2,), n_grid=(8, 16),
            m_per_n=8, trials=2, n_test=100, n_atoms=8, seed=3,
        )
        result = run_scale_study(cfg)
        assert "slope" not in result.summary
        assert "grid points" in result.summary["slope_flag"]

    def test_thread_count_does_not_change_rows(self):
        cfg = ExperimentConfig(
            kind="scale-study", model="rf", d_grid=(2,), n_grid=(8, 16),
            m_per_n=8, trials=3, n_test=100, n_atoms=8, seed=17,
        )
        r1 = run_scale_study(cfg, threads=1)
        r3 = run_scale_study(cfg, threads=3)
        assert r1.rows == r3.rows
        assert r1.summary == r3.summary

    def test_explicit_m_grid_per_n(self):
        cfg = ExperimentConfig(
            kind="scale-study", model="rf", d_grid=(2,), n_grid=(8, 16),
            m_grid=(32, 48), trials=1, n_test=100, n_atoms=8, seed=19,
        )
        result = run_scale_study(cfg)
        assert [r["m_or_L"] for r in result.rows] == [32, 48]


class TestWriteStudy:
    def test_names_and_summary_schema(self, tmp_path, scale_pair):
        scale, audit = scale_pair
        result = run_verify_lemma(make_config(lemma="resnet-add", trials=2))
        assert result_basename(result) == "verify_resnet_add"
        assert result_basename(scale) == "scale_study"
        assert result_basename(audit) == "bound_audit"
        paths = write_study(result, tmp_path)
        assert [p.name for p in paths] == ["verify_resnet_add.csv", "verify_resnet_add_summary.json"]
        report = json.loads(paths[1].read_text())
        assert set(report) == {"version", "config", "summary"}
        assert "out" not in report["config"]
        header = paths[0].read_text().splitlines()[0]
        assert header.startswith("# config=") and "version=" in header

    def test_byte_identical_reruns(self, tmp_path):
        cfg = make_config(lemma="embedding", trials=3)
        for sub in ("a", "b"):
            write_study(run_verify_lemma(cfg), tmp_path / sub)
        for name in ("verify_embedding.csv", "verify_embedding_summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.fixture
def workdir(tmp_path):
    cfg = {
        "d_grid": [2],
        "n_grid": [8],
        "n_atoms": 8,
        "m1": 16,
        "m2": 256,
        "quadrature": 20_000,
        "seed": 5,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return tmp_path, str(path)


class TestCli:
    def test_full_workflow(self, workdir, capsys):
        tmp_path, cfg = workdir
        out = ["--config", cfg, "--out", str(tmp_path)]
        assert main(["gen-teacher", *out]) == 0
        teacher = str(tmp_path / "teacher.json")
        assert main(["gen-data", teacher, *out]) == 0
        data = str(tmp_path / "dataset.json")

        assert main(["fit", "rf", data, *out]) == 0
        assert main(["fit", "two-layer", data, teacher, *out]) == 0
        assert main(["fit", "resnet", data, teacher, *out]) == 0
        for name in ("model_rf.json", "model_two_layer.json", "model_resnet.json",
                     "fit_report.json"):
            assert (tmp_path / name).exists()

        assert main(["norms", str(tmp_path / "model_resnet.json"), *out]) == 0
        lines = (tmp_path / "norms.csv").read_text().splitlines()
        assert lines[1] == "net_id,L,D,m,weighted_path_norm,eval_checksum"
        assert lines[2].startswith("model_resnet,")

        assert main(["norms", str(tmp_path / "model_two_layer.json"), *out]) == 0
        lines = (tmp_path / "norms.csv").read_text().splitlines()
        assert lines[1] == "net_id,m,d,path_norm,eval_checksum"

        report = json.loads((tmp_path / "fit_report.json").read_text())
        assert report["report"]["kind"] == "resnet"
        assert report["report"]["interp_error"] <= 1e-8
        capsys.readouterr()

    def test_verify_subcommand(self, tmp_path, capsys):
        out = str(tmp_path)
        rc = main([
            "verify", "--lemma", "resnet-add", "--out", out,
            "--trials", "2", "--seed", "4",
        ])
        assert rc == 0
        assert (tmp_path / "verify_resnet_add.csv").exists()
        assert "pass fraction 1.0" in capsys.readouterr().out

    def test_scale_study_threads_byte_identical(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "model": "rf", "d_grid": [2], "n_grid": [8, 16], "m_per_n": 8,
            "trials": 2, "n_test": 100, "n_atoms": 8, "seed": 7,
        }))
        for sub, threads in (("t1", "1"), ("t2", "2")):
            rc = main([
                "scale-study", "--config", str(cfg),
                "--out", str(tmp_path / sub), "--threads", threads,
            ])
            assert rc == 0
        for name in ("scale_study.csv", "scale_study_summary.json"):
            assert (tmp_path / "t1" / name).read_bytes() == (tmp_path / "t2" / name).read_bytes()
        capsys.readouterr()

    def test_bad_config_key_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"no_such_key": 1}))
        assert main(["gen-teacher", "--config", str(cfg)]) == 2
        assert "unknown config keys" in capsys.readouterr().err

    def test_fit_without_teacher_exits_2(self, workdir, capsys):
        tmp_path, cfg = workdir
        out = ["--config", cfg, "--out", str(tmp_path)]
        assert main(["gen-teacher", *out]) == 0
        assert main(["gen-data", str(tmp_path / "teacher.json"), *out]) == 0
        rc = main(["fit", "two-layer", str(tmp_path / "dataset.json"), *out])
        assert rc == 2
        assert "needs a teacher" in capsys.readouterr().err

    def test_norms_rejects_dataset_file(self, workdir, capsys):
        tmp_path, cfg = workdir
        out = ["--config", cfg, "--out", str(tmp_path)]
        assert main(["gen-teacher", *out]) == 0
        assert main(["gen-data", str(tmp_path / "teacher.json"), *out]) == 0
        assert main(["norms", str(tmp_path / "dataset.json"), *out]) == 2
        assert "expects a model file" in capsys.readouterr().err

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "minterp" in capsys.readouterr().out
