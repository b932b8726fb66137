import json
import os
from dataclasses import replace

import numpy as np
import pytest

from barlab import (BoundaryDatum, ConfigError, MaterialParams, NumericalError,
                    ScenarioConfig, emit_figures, parse_config, preset,
                    preset_datum, run_scenario_limit, sweep_eps,
                    textbook_damage, textbook_plasticity, write_config)
from barlab.cli import main
from barlab.scenarios import PRESET_NAMES, SweepReport


class TestPresets:
    def test_all_names_build(self, material):
        for name in PRESET_NAMES:
            w = preset_datum(name, material)
            assert w.duration == material.T

    def test_unknown_name_rejected(self, material):
        with pytest.raises(ConfigError):
            preset_datum("ramp", material)

    def test_triangle_needs_room_to_damage(self, material):
        short = replace(material, T=0.8)
        with pytest.raises(ConfigError):
            preset_datum("loading-unloading", short)

    def test_high_unload_stays_supercritical(self, material):
        w = preset_datum("high-unload", material)
        t = np.linspace(material.T / 2.0, material.T, 101)
        assert np.min(np.abs(w.jump(t))) > material.jump_threshold

    def test_preset_wraps_into_config(self, material):
        cfg = preset("monotone")
        assert isinstance(cfg, ScenarioConfig)
        assert cfg.material == material
        assert cfg.datum == preset_datum("monotone", material)
        assert (cfg.cells, cfg.steps, cfg.eps_list) == (64, 400, ())


class TestScenarioConfig:
    def test_rejects_nonpositive_discretization(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(cells=0)
        with pytest.raises(ConfigError):
            ScenarioConfig(steps=0)

    def test_rejects_horizon_mismatch(self, material):
        w = BoundaryDatum(times=[0.0, 1.0], w0=[0.0, 0.0], wL=[0.0, 1.0])
        with pytest.raises(ConfigError):
            ScenarioConfig(material=material, datum=w)

    def test_value_equality(self, material):
        assert preset("monotone") == preset("monotone")
        assert preset("monotone") != preset("constant")
        assert preset("monotone") != replace(preset("monotone"), seed=1)


class TestConfigFiles:
    def test_round_trip_preserves_every_bit(self, tmp_path):
        m = MaterialParams(kappa=0.3141592653589793, a0=0.9, a1=1.8, L=1.1, T=1.7)
        w = BoundaryDatum(times=[0.0, 0.7, 1.7],
                          w0=[0.0, 0.05, 0.1],
                          wL=[0.0, 1.2, 0.3])
        cfg = ScenarioConfig(material=m, datum=w, cells=17, steps=33, seed=5,
                             eps_list=(0.1, 1.0 / 30.0, 0.01), out_dir="figs")
        path = tmp_path / "scenario.ini"
        write_config(cfg, path)
        assert parse_config(path) == cfg

    def test_write_is_deterministic(self, tmp_path):
        cfg = preset("high-unload")
        a, b = tmp_path / "a.ini", tmp_path / "b.ini"
        write_config(cfg, a)
        write_config(cfg, b)
        assert a.read_bytes() == b.read_bytes()

    def test_minimal_preset_file(self, tmp_path):
        path = tmp_path / "min.ini"
        path.write_text("[datum]\npreset = loading-unloading\n")
        assert parse_config(path) == preset("loading-unloading")

    def test_defaults_without_datum_section(self, tmp_path):
        path = tmp_path / "empty.ini"
        path.write_text("[run]\nsteps = 12\n")
        cfg = parse_config(path)
        assert cfg.datum == preset_datum("monotone", cfg.material)
        assert cfg.steps == 12 and cfg.cells == 64

    @pytest.mark.parametrize("text", [
        "[orbit]\nx = 1\n",
        "[material]\ndensity = 1\n",
        "[material]\nkappa = abc\n",
        "[material]\na0 = -1\n",
        "[datum]\npreset = spiral\n",
        "[datum]\npreset = monotone\ntimes = 0, 2\n",
        "[datum]\ntimes = 0, 2\n",
        "[datum]\nwL = 0, 2\n",
        "[datum]\n",
        "[run]\nsteps = 1.5\n",
        "[run]\neps_list = ,\n",
        "steps = 3\n",
    ])
    def test_defective_files_rejected(self, tmp_path, text):
        path = tmp_path / "bad.ini"
        path.write_text(text)
        with pytest.raises(ConfigError):
            parse_config(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_config(tmp_path / "nowhere.ini")

    def test_explicit_datum_defaults_left_trace_to_zero(self, tmp_path):
        path = tmp_path / "explicit.ini"
        path.write_text("[datum]\ntimes = 0, 1, 2\nwL = 0, 1, 0\n")
        cfg = parse_config(path)
        assert np.all(cfg.datum.w0 == 0.0)
        assert cfg.datum == preset_datum("loading-unloading", cfg.material)


class TestSweep:
    def test_needs_a_nonempty_decreasing_list(self, material):
        with pytest.raises(ConfigError):
            sweep_eps(preset("monotone"))
        with pytest.raises(ConfigError):
            sweep_eps(replace(preset("monotone"), eps_list=(0.1, 0.1)))
        with pytest.raises(ConfigError):
            sweep_eps(replace(preset("monotone"), eps_list=(0.05, 0.1)))

    def test_two_point_sweep_shrinks(self):
        cfg = replace(preset("loading-unloading"), steps=100, cells=16,
                      eps_list=(0.1, 0.05))
        report = sweep_eps(cfg)
        assert report.sup_sigma_dev[1] < report.sup_sigma_dev[0]
        assert report.sup_l_dev[1] < report.sup_l_dev[0]
        assert report.sup_energy_dev[1] < report.sup_energy_dev[0]


class TestTextbookCurves:
    def test_plasticity_clamps_and_leaves_residual_strain(self, material):
        w = preset_datum("loading-unloading", material)
        t = np.linspace(0.0, material.T, 401)
        sigma = textbook_plasticity(material, t, w.jump(t))
        assert np.max(np.abs(sigma)) <= material.yield_stress + 1e-15
        # On unloading the stress crosses zero at J = 0.5, not at J = 0.
        k = 300  # t = 1.5, J = 0.5
        assert w.jump(t[k]) == pytest.approx(0.5, abs=1e-12)
        assert sigma[k] == pytest.approx(0.0, abs=1e-12)

    def test_damage_is_continuous_at_threshold_and_unloads_to_origin(self, material):
        w = preset_datum("loading-unloading", material)
        t = np.linspace(0.0, material.T, 801)
        sigma = textbook_damage(material, t, w.jump(t))
        kink = np.searchsorted(t, 0.5)
        assert abs(sigma[kink + 1] - sigma[kink]) < 2.0 * (sigma[kink] - sigma[kink - 1])
        assert sigma[-1] == pytest.approx(0.0, abs=1e-12)

    def test_damage_hardens_past_threshold(self, material):
        w = preset_datum("monotone", material)
        t = np.linspace(0.0, material.T, 201)
        sigma = textbook_damage(material, t, w.jump(t))
        assert sigma[-1] == pytest.approx(
            material.yield_stress * np.sqrt(material.T / material.jump_threshold), abs=1e-12)
        assert np.all(np.diff(sigma) > 0.0)


class TestEmitFigures:
    def test_file_set_and_determinism(self, tmp_path):
        cfg = replace(preset("loading-unloading"), steps=40)
        d1, d2 = tmp_path / "one", tmp_path / "two"
        paths = emit_figures(cfg, out_dir=str(d1))
        names = sorted(os.path.basename(p) for p in paths)
        assert names == ["comparison.csv", "energy_vs_t.csv", "l_vs_t.csv",
                         "sigma_vs_J.csv", "sigma_vs_t.csv"]
        emit_figures(cfg, out_dir=str(d2))
        for name in names:
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_hysteresis_data_contains_the_plateau_corner(self, tmp_path):
        cfg = replace(preset("loading-unloading"), steps=40)
        emit_figures(cfg, out_dir=str(tmp_path))
        rows = (tmp_path / "sigma_vs_J.csv").read_text().strip().splitlines()
        assert rows[0] == "J,sigma"
        data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
        corner = data[np.argmax(data[:, 0])]
        assert corner[0] == pytest.approx(1.0, abs=1e-12)
        assert corner[1] == pytest.approx(1.0, abs=1e-12)

    def test_needs_an_output_directory(self):
        with pytest.raises(ConfigError):
            emit_figures(preset("monotone"))

    def test_reuses_a_supplied_trajectory(self, tmp_path):
        cfg = replace(preset("monotone"), steps=10)
        traj = run_scenario_limit(cfg)
        paths = emit_figures(cfg, traj=traj, out_dir=str(tmp_path))
        rows = open(paths[0]).read().strip().splitlines()
        assert len(rows) == traj.times.size + 1


class TestCommandLine:
    def test_classify_prints_json_verdict(self, capsys):
        assert main(["classify", "--preset", "monotone"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "PerfectPlasticity"
        assert payload["witness_pair"] is None
        assert payload["flow_rule_violations"] == 0

    def test_classify_writes_json_file(self, tmp_path, capsys):
        out = tmp_path / "verdict.json"
        code = main(["classify", "--preset", "loading-unloading", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["verdict"] == "DamageOnly"
        s, t = payload["witness_pair"]
        assert s < t
        assert set(payload) == {"verdict", "witness_pair", "t0", "t0_star",
                                "max_eb_residual", "flow_rule_violations"}

    def test_simulate_limit_csv_contract(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = main(["simulate-limit", "--preset", "high-unload",
                     "--steps", "8", "--out", str(out)])
        assert code == 0
        assert "sigma(T) = 0.6" in capsys.readouterr().out
        rows = out.read_text().strip().splitlines()
        assert rows[0] == "t,J,sigma,l,E_closed,E_integrated,e,p_total,t0_flag,saturated"
        assert len(rows) == 1 + 9
        last = [float(v) for v in rows[-1].split(",")]
        assert last[2] == pytest.approx(0.6, abs=1e-12)
        assert last[3] == pytest.approx(0.5, abs=1e-12)

    def test_simulate_eps_csv_contract(self, tmp_path, capsys):
        out = tmp_path / "eps.csv"
        code = main(["simulate-eps", "--preset", "monotone", "--eps", "0.1",
                     "--steps", "20", "--cells", "4", "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().splitlines()
        assert rows[0] == "t,J,sigma,Theta_mean,l_eps,energy,work_cum,eb_residual"
        assert len(rows) == 1 + 21

    def test_envelope_table_stdout(self, capsys):
        assert main(["envelope-table", "--n", "5", "--xi-max", "2.0"]) == 0
        rows = capsys.readouterr().out.strip().splitlines()
        assert rows[0] == "xi,raw,envelope,theta_star"
        assert len(rows) == 6
        first = [float(v) for v in rows[1].split(",")]
        assert first == [0.0, 0.0, 0.0, 0.0]

    def test_envelope_table_rejects_bad_grid(self, capsys):
        assert main(["envelope-table", "--n", "1"]) == 2
        assert main(["envelope-table", "--xi-min", "3.0", "--xi-max", "1.0"]) == 2

    def test_preset_list_names_everything(self, capsys):
        assert main(["preset-list"]) == 0
        out = capsys.readouterr().out
        for name in PRESET_NAMES:
            assert name in out

    def test_sweep_writes_csv(self, tmp_path, capsys):
        code = main(["sweep-eps", "--preset", "loading-unloading",
                     "--steps", "100", "--cells", "16",
                     "--eps-list", "0.1,0.05", "--out", str(tmp_path)])
        assert code == 0
        rows = (tmp_path / "eps_sweep.csv").read_text().strip().splitlines()
        assert rows[0] == "eps,sup_sigma_dev,sup_l_dev,sup_energy_dev"
        assert len(rows) == 3

    def test_emit_figures_command(self, tmp_path, capsys):
        code = main(["emit-figures", "--preset", "monotone",
                     "--steps", "10", "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "comparison.csv").exists()

    def test_config_file_drives_the_run(self, tmp_path, capsys):
        path = tmp_path / "s.ini"
        path.write_text("[datum]\npreset = high-unload\n[run]\nsteps = 8\n")
        assert main(["simulate-limit", "--config", str(path)]) == 0
        assert "steps = 8" in capsys.readouterr().out

    def test_missing_config_exits_2(self, capsys):
        assert main(["simulate-limit", "--config", "/nonexistent.ini"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_oversized_eps_exits_2(self, capsys):
        assert main(["simulate-eps", "--preset", "monotone", "--eps", "3.0"]) == 2

    def test_sweep_without_list_exits_2(self, capsys):
        assert main(["sweep-eps", "--preset", "monotone"]) == 2

    def test_nonmonotone_sweep_exits_3(self, monkeypatch, capsys):
        fake = SweepReport(eps=(0.1, 0.05),
                           sup_sigma_dev=np.array([1.0, 2.0]),
                           sup_l_dev=np.array([1.0, 0.5]),
                           sup_energy_dev=np.array([1.0, 0.5]))
        monkeypatch.setattr("barlab.cli.sweep_eps", lambda cfg: fake)
        code = main(["sweep-eps", "--preset", "monotone", "--eps-list", "0.1,0.05"])
        assert code == 3

    def test_numerical_failure_exits_3(self, monkeypatch, capsys):
        def boom(*a, **k):
            raise NumericalError("diagnostic mismatch")
        monkeypatch.setattr("barlab.cli.cns_classify", boom)
        assert main(["classify", "--preset", "monotone"]) == 3
