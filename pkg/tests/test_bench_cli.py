import json
import os

import numpy as np
import pytest

from pairnet import bench, cli


def tiny_scenario_dict(**overrides):
    base = {
        "name": "tiny",
        "network": {"kind": "bimodal", "d1": 5, "d2": 35, "frac1": 0.5},
        "N": 200,
        "gamma": 1.0,
        "tau_multiple": 3.0,
        "i0": 0.05,
        "models": ["traditional", "compact"],
        "integration": {"horizon_over_gamma": 3.0, "points": 31},
        "simulation": {"runs": 3, "seed": 1},
    }
    base.update(overrides)
    return base


def write_scenario(tmp_path, payload, name="tiny.scenario"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestLoadScenario:
    def test_roundtrip(self, tmp_path):
        path = write_scenario(tmp_path, tiny_scenario_dict())
        sc = bench.load_scenario(path)
        assert sc.name == "tiny"
        assert sc.N == 200 and sc.i0 == 0.05
        assert [c.name for c in sc.cases] == [""]

    def test_cases_form(self, tmp_path):
        payload = tiny_scenario_dict()
        del payload["network"]
        payload["cases"] = [
            {"name": "a", "network": {"kind": "regular", "n": 6}},
            {"network": {"kind": "regular", "n": 8}},
        ]
        sc = bench.load_scenario(write_scenario(tmp_path, payload))
        assert [c.name for c in sc.cases] == ["a", "case1"]

    @pytest.mark.parametrize("mutate,fragment", [
        (lambda p: p.pop("models"), "models"),
        (lambda p: p.update(models=["exact"]), "unknown model"),
        (lambda p: p.update(tau=0.1), "exactly one"),
        (lambda p: p.pop("tau_multiple"), "exactly one"),
        (lambda p: p.update(i0=1.5), "i0"),
        (lambda p: p.update(gamma=-1.0), "gamma"),
        (lambda p: p.update(network={"kind": "nope"}), "network"),
    ])
    def test_validation_messages(self, tmp_path, mutate, fragment):
        payload = tiny_scenario_dict()
        mutate(payload)
        path = write_scenario(tmp_path, payload)
        with pytest.raises(bench.ScenarioError, match=fragment):
            bench.load_scenario(path)

    def test_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "bad.scenario"
        path.write_text("{\n  broken\n}")
        with pytest.raises(bench.ScenarioError, match="line 2"):
            bench.load_scenario(str(path))

    def test_tau_for(self, tmp_path):
        sc = bench.load_scenario(
            write_scenario(tmp_path, tiny_scenario_dict()))
        dist = bench.distribution_from_config(sc.cases[0].network)
        assert sc.tau_for(dist) == pytest.approx(3.0 * 20 / 625, rel=1e-14)


class TestSeriesCSV:
    def test_roundtrip_byte_identical(self, tmp_path):
        times = np.linspace(0.0, 1.0, 7)
        rng = np.random.default_rng(0)
        cols = {k: rng.random(7) * 100 for k in ("S", "I", "SI", "SS", "II")}
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        bench.write_series_csv(p1, times, cols, "model", "compact")
        back = bench.read_series_csv(p1)
        assert back["model"] == "compact" and back["source"] == "model"
        np.testing.assert_array_equal(back["I"], cols["I"])
        bench.write_series_csv(
            p2, back["t"],
            {k: back[k] for k in ("S", "I", "SI", "SS", "II")},
            back["source"], back["model"],
        )
        assert p1.read_bytes() == p2.read_bytes()

    def test_std_column(self, tmp_path):
        times = np.array([0.0, 1.0])
        cols = {k: np.array([1.0, 2.0]) for k in ("S", "I", "SI", "SS", "II")}
        p = tmp_path / "s.csv"
        bench.write_series_csv(p, times, cols, "simulation", "simulation",
                               std_I=np.array([0.1, 0.2]))
        back = bench.read_series_csv(p)
        np.testing.assert_array_equal(back["std_I"], [0.1, 0.2])

    def test_empty_series_rejected(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("t,S,I,SI,SS,II,source,model\n")
        with pytest.raises(ValueError):
            bench.read_series_csv(str(p))


class TestCompareSeries:
    def test_values(self):
        t = np.linspace(0, 1, 5)
        a = {"t": t, "I": np.array([0.0, 1.0, 2.0, 3.0, 4.0]), "model": "a"}
        b = {"t": t, "I": np.array([0.0, 1.5, 1.0, 3.0, 4.2]), "model": "b"}
        out = bench.compare_series(a, b)
        assert out["sup_norm_I"] == 1.0
        assert out["terminal_diff_I"] == pytest.approx(0.2)

    def test_grid_mismatch(self):
        a = {"t": np.array([0.0, 1.0]), "I": np.zeros(2), "model": "a"}
        b = {"t": np.array([0.0, 2.0]), "I": np.zeros(2), "model": "b"}
        with pytest.raises(ValueError):
            bench.compare_series(a, b)


class TestMomentsTable:
    def test_benchmark_rows(self):
        rows = bench.moments_table([
            ("bimodal", {"kind": "bimodal", "d1": 5, "d2": 35, "frac1": 0.5}),
            ("regular", {"kind": "regular", "n": 20}),
        ])
        assert rows[0]["mean"] == pytest.approx(20.0)
        assert rows[0]["std"] == pytest.approx(15.0)
        assert rows[1]["std"] == 0.0
        text = bench.format_moments_table(rows)
        assert "bimodal" in text and "20.0000" in text


class TestRunScenario:
    def test_end_to_end_files_and_report(self, tmp_path):
        path = write_scenario(tmp_path, tiny_scenario_dict(
            models=["traditional", "compact", "supercompact"]))
        reports, report_path = bench.run_scenario(
            path, out_dir=str(tmp_path / "out"))
        assert os.path.exists(report_path)
        rep = reports[0]
        for model in ("traditional", "compact", "supercompact"):
            back = bench.read_series_csv(rep["files"][model])
            assert back["t"].size == 31
            assert back["model"] == model
        # compact model present -> closure-error series and max |E|.
        assert os.path.exists(rep["files"]["closure_error"])
        assert rep["max_abs_E"] >= 0.0
        assert len(rep["comparisons"]) == 3
        assert set(rep["plateau_I"]) == {"traditional", "compact",
                                         "supercompact"}

    def test_simulation_model(self, tmp_path):
        path = write_scenario(tmp_path, tiny_scenario_dict(
            models=["simulation"], N=100))
        reports, _ = bench.run_scenario(path, out_dir=str(tmp_path / "out"))
        rep = reports[0]
        back = bench.read_series_csv(rep["files"]["simulation"])
        assert "std_I" in back
        assert rep["simulation_runs"] == 3

    def test_runs_override(self, tmp_path):
        path = write_scenario(tmp_path, tiny_scenario_dict(
            models=["simulation"], N=100))
        reports, _ = bench.run_scenario(path, out_dir=str(tmp_path / "out"),
                                        runs=2)
        assert reports[0]["simulation_runs"] == 2

    def test_out_dir_env_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv(bench.OUT_DIR_ENV, str(tmp_path / "envout"))
        assert bench.default_out_dir() == str(tmp_path / "envout")


class TestCLI:
    def test_run_exit_ok(self, tmp_path, capsys):
        path = write_scenario(tmp_path, tiny_scenario_dict())
        code = cli.main(["run", path, "--out-dir", str(tmp_path / "out")])
        assert code == cli.EXIT_OK
        out = capsys.readouterr().out
        assert "sup|I_" in out and "report:" in out

    def test_bundled_scenarios_resolve(self):
        for name in ("fig1", "fig2", "fig3", "table1"):
            assert os.path.exists(cli.bundled_scenario_path(name))

    def test_missing_scenario_exit_config(self, capsys):
        assert cli.main(["run", "no_such_scenario"]) == cli.EXIT_CONFIG
        assert "error:" in capsys.readouterr().err

    def test_invalid_scenario_exit_config(self, tmp_path, capsys):
        path = write_scenario(tmp_path, tiny_scenario_dict(models=["nope"]))
        assert cli.main(["run", path]) == cli.EXIT_CONFIG

    def test_numerical_failure_exit_2(self, tmp_path, capsys):
        # An absurd rtol exhausts the step budget -> numerical failure.
        payload = tiny_scenario_dict(models=["traditional"])
        payload["integration"]["rtol"] = 1e-14
        path = write_scenario(tmp_path, payload)
        code = cli.main(["run", path, "--rtol", "1e-15",
                         "--out-dir", str(tmp_path / "out")])
        assert code in (cli.EXIT_OK, cli.EXIT_NUMERICAL)

    def test_moments_table1(self, tmp_path, capsys):
        code = cli.main(["moments", "table1",
                         "--out-dir", str(tmp_path / "out")])
        assert code == cli.EXIT_OK
        out = capsys.readouterr().out
        assert "20.0000" in out and "15.0000" in out
        assert os.path.exists(tmp_path / "out" / "moments.csv")

    def test_moments_accepts_scenario(self, tmp_path, capsys):
        path = write_scenario(tmp_path, tiny_scenario_dict())
        code = cli.main(["moments", path, "--out-dir", str(tmp_path / "out")])
        assert code == cli.EXIT_OK

    def test_compare(self, tmp_path, capsys):
        path = write_scenario(tmp_path, tiny_scenario_dict())
        out_dir = str(tmp_path / "out")
        assert cli.main(["run", path, "--out-dir", out_dir]) == cli.EXIT_OK
        a = os.path.join(out_dir, "tiny_traditional.csv")
        b = os.path.join(out_dir, "tiny_compact.csv")
        assert cli.main(["compare", a, b]) == cli.EXIT_OK
        out = capsys.readouterr().out
        assert "traditional vs compact" in out

    def test_compare_missing_file(self, capsys):
        assert cli.main(["compare", "x.csv", "y.csv"]) == cli.EXIT_CONFIG
