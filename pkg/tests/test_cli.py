"""End-to-end CLI behavior: outputs, determinism, and exit codes."""

import json

import numpy as np
import pytest

from randgames.cli import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_SOLVER,
    TRIALS_HEADER,
    main,
)


def write_config(tmp_path, name="cfg.json", **overrides):
    cfg = {
        "mode": "values",
        "ensemble": {"kind": "gaussian"},
        "sizes": [[6, 6], [9, 9]],
        "batch": 25,
        "seed": 31,
    }
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


class TestSolveCommand:
    def test_csv_matrix(self, tmp_path, capsys):
        p = tmp_path / "m.csv"
        p.write_text("1,-1\n-1,1\n")
        assert main(["solve", "--matrix", str(p)]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["value"] == pytest.approx(0.0, abs=1e-12)
        assert out["x"] == pytest.approx([0.5, 0.5], abs=1e-12)

    def test_json_matrix(self, tmp_path, capsys):
        p = tmp_path / "m.json"
        p.write_text('{"n": 1, "m": 2, "data": [[2.0, 7.0]]}')
        assert main(["solve", "--matrix", str(p)]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["value"] == pytest.approx(7.0, abs=1e-12)

    def test_malformed_csv_reports_line(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("1,2\n3,x\n")
        assert main(["solve", "--matrix", str(p)]) == EXIT_IO
        assert "line 2" in capsys.readouterr().err

    def test_ragged_csv_reports_line(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("1,2\n3\n")
        assert main(["solve", "--matrix", str(p)]) == EXIT_IO
        err = capsys.readouterr().err
        assert "line 2" in err and "columns" in err

    def test_missing_file(self, tmp_path):
        assert main(["solve", "--matrix", str(tmp_path / "nope.csv")]) == EXIT_IO


class TestExperimentCommand:
    def test_values_outputs(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert main(["experiment", "--config", cfg, "--out", str(out),
                     "--threads", "1"]) == EXIT_OK
        lines = (out / "trials.csv").read_text().splitlines()
        assert lines[0] == TRIALS_HEADER
        assert len(lines) == 1 + 50
        first = lines[1].split(",")
        assert first[0] == "0" and first[2] == "6" and first[4] == "gaussian"
        assert first[10] == "0"  # wall_ms is pinned for reproducibility
        summary = json.loads((out / "summary.json").read_text())
        assert summary["failures"] == 0
        assert len(summary["per_size"]) == 2
        assert summary["per_size"][0]["count"] == 25

    def test_reproducible_across_runs_and_threads(self, tmp_path):
        cfg = write_config(tmp_path)
        blobs = {}
        for tag, threads in (("a", "1"), ("b", "1"), ("c", "4")):
            out = tmp_path / tag
            assert main(["experiment", "--config", cfg, "--out", str(out),
                         "--threads", threads]) == EXIT_OK
            blobs[tag] = (
                (out / "trials.csv").read_bytes(),
                (out / "summary.json").read_bytes(),
            )
        assert blobs["a"] == blobs["b"]
        assert blobs["a"] == blobs["c"]

    def test_seed_override_changes_rows(self, tmp_path):
        cfg = write_config(tmp_path)
        a, b = tmp_path / "a", tmp_path / "b"
        main(["experiment", "--config", cfg, "--out", str(a), "--threads", "1"])
        main(["experiment", "--config", cfg, "--seed", "99", "--out", str(b),
              "--threads", "1"])
        assert (a / "trials.csv").read_text() != (b / "trials.csv").read_text()

    def test_bad_batch_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, batch=0)
        assert main(["experiment", "--config", cfg]) == EXIT_CONFIG
        assert "batch" in capsys.readouterr().err

    def test_bad_mode_rejected(self, tmp_path):
        cfg = write_config(tmp_path, mode="nonsense")
        assert main(["experiment", "--config", cfg]) == EXIT_CONFIG

    def test_unknown_key_rejected(self, tmp_path):
        cfg = write_config(tmp_path, typo_field=1)
        assert main(["experiment", "--config", cfg]) == EXIT_CONFIG

    def test_invalid_json_rejected(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text("{not json")
        assert main(["experiment", "--config", str(p)]) == EXIT_CONFIG

    def test_solver_failures_exit_code(self, tmp_path):
        cfg = write_config(
            tmp_path, sizes=[[6, 6]], batch=20, solver={"max_pivots": 1}
        )
        out = tmp_path / "out"
        assert main(["experiment", "--config", cfg, "--out", str(out),
                     "--threads", "1"]) == EXIT_SOLVER
        summary = json.loads((out / "summary.json").read_text())
        assert summary["failures"] >= 19
        lines = (out / "trials.csv").read_text().splitlines()
        assert len(lines) == 1 + 20 - summary["failures"]

    def test_scaling_summary_has_fit(self, tmp_path):
        cfg = write_config(
            tmp_path, mode="scaling", sizes=[[6, 6], [12, 12], [24, 24]], batch=40
        )
        out = tmp_path / "out"
        assert main(["experiment", "--config", cfg, "--out", str(out),
                     "--threads", "1"]) == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert -2.0 < summary["fit"]["slope"] < -0.5
        assert len(summary["points"]) == 3

    def test_gordon_mode_outputs(self, tmp_path):
        cfg = write_config(
            tmp_path, mode="gordon", sizes=[[5, 5]], batch=20,
            t_grid=[-0.5, 0.0, 0.5],
        )
        out = tmp_path / "out"
        assert main(["experiment", "--config", cfg, "--out", str(out)]) == EXIT_OK
        lines = (out / "trials.csv").read_text().splitlines()
        assert lines[0].startswith("t,p_v_le_t,se_v")
        assert len(lines) == 4
        summary = json.loads((out / "summary.json").read_text())
        assert summary["sandwich_violations"] == 0

    def test_cones_mode_outputs(self, tmp_path):
        cfg = write_config(
            tmp_path, mode="cones", sizes=[[16, 16]], batch=60,
            epsilon_fractions=[0.0, 0.5, 1.0],
        )
        out = tmp_path / "out"
        assert main(["experiment", "--config", cfg, "--out", str(out)]) == EXIT_OK
        lines = (out / "trials.csv").read_text().splitlines()
        assert lines[0] == "epsilon,n,batch,delta_hat,stderr,upper_bound"
        assert len(lines) == 4
        summary = json.loads((out / "summary.json").read_text())
        assert all(row["within_bound"] for row in summary["sweep"])

    def test_rectangular_mode_outputs(self, tmp_path):
        cfg = write_config(
            tmp_path, mode="rectangular", sizes=[[9, 9]], batch=30,
            lambdas=[0.0, 3.0],
        )
        out = tmp_path / "out"
        assert main(["experiment", "--config", cfg, "--out", str(out),
                     "--threads", "1"]) == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        ms = [p["m"] for p in summary["points"]]
        assert ms == [9, 18]
        assert summary["points"][0]["ratio"] is None


class TestReportCommand:
    def test_round_trip_summary(self, tmp_path):
        cfg = write_config(tmp_path, mode="supports", sizes=[[10, 10]], batch=30)
        out = tmp_path / "out"
        main(["experiment", "--config", cfg, "--out", str(out), "--threads", "1"])
        rep = tmp_path / "rep"
        assert main(["report", "--trials", str(out / "trials.csv"),
                     "--mode", "supports", "--out", str(rep)]) == EXIT_OK
        summary = json.loads((rep / "summary.json").read_text())
        assert summary["per_size"][0]["binomial_compare"]["expected_mean"] == 5.0

    def test_scaling_report_writes_plot(self, tmp_path):
        cfg = write_config(tmp_path, mode="scaling",
                           sizes=[[6, 6], [12, 12]], batch=30)
        out = tmp_path / "out"
        main(["experiment", "--config", cfg, "--out", str(out), "--threads", "1"])
        rep = tmp_path / "rep"
        assert main(["report", "--trials", str(out / "trials.csv"),
                     "--mode", "scaling", "--out", str(rep)]) == EXIT_OK
        plot = (rep / "plot.csv").read_text().splitlines()
        assert plot[0] == "n,sigma_hat,se_sigma"
        assert len(plot) == 3

    def test_empty_trials_rejected(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        assert main(["report", "--trials", str(p)]) == EXIT_IO

    def test_header_only_rejected(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text(TRIALS_HEADER + "\n")
        assert main(["report", "--trials", str(p)]) == EXIT_IO

    def test_wrong_header_rejected(self, tmp_path, capsys):
        p = tmp_path / "w.csv"
        p.write_text("a,b,c\n1,2,3\n")
        assert main(["report", "--trials", str(p)]) == EXIT_IO
        assert "header" in capsys.readouterr().err

    def test_corrupt_row_reports_line(self, tmp_path, capsys):
        p = tmp_path / "c.csv"
        p.write_text(TRIALS_HEADER + "\n0,1,6,6,gaussian,x,3,0.5,0,4,0\n")
        assert main(["report", "--trials", str(p)]) == EXIT_IO
        assert "line 2" in capsys.readouterr().err


class TestShortcutCommands:
    def test_rectangular_shortcut(self, tmp_path):
        out = tmp_path / "out"
        assert main(["rectangular", "--n", "9", "--batch", "20", "--seed", "3",
                     "--out", str(out), "--threads", "1"]) == EXIT_OK
        assert (out / "summary.json").exists()

    def test_cones_shortcut_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["cones", "--n", "12", "--batch", "40", "--seed", "8",
                         "--out", str(out), "--threads", "1"]) == EXIT_OK
        assert (a / "trials.csv").read_bytes() == (b / "trials.csv").read_bytes()

    def test_bad_thread_count(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["experiment", "--config", cfg, "--threads", "0"]) == EXIT_CONFIG

    def test_bad_batch_shortcut(self, tmp_path):
        assert main(["rectangular", "--batch", "1",
                     "--out", str(tmp_path)]) == EXIT_CONFIG
