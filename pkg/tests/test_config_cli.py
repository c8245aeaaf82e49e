import json

import numpy as np
import pytest

from leeyang.cli import main
from leeyang.config import ConfigError, RunConfig, load_config


def base_config(**overrides):
    data = {
        "model": {"kind": "exact", "n_spins": 2, "two_s": 1, "J": 1.0},
        "temperature": {"T_over_J": "inf"},
        "probe": {"two_s0": 1, "delta": 1},
        "lambda": 1.0,
    }
    data.update(overrides)
    return data


def write_config(tmp_path, data, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestRunConfigValidation:
    def test_minimal_config(self):
        cfg = RunConfig(base_config())
        assert cfg.beta == 0.0
        assert cfg.steps == 4096
        assert cfg.magnitude_tol == 1e-6

    def test_temperature_requires_exactly_one_key(self):
        with pytest.raises(ConfigError, match="exactly one"):
            RunConfig(base_config(temperature={}))
        with pytest.raises(ConfigError, match="exactly one"):
            RunConfig(base_config(temperature={"beta": 1.0, "T_over_J": 1.0}))

    def test_zero_temperature_rejected(self):
        with pytest.raises(ConfigError, match="T_over_J"):
            RunConfig(base_config(temperature={"T_over_J": 0}))

    def test_t_over_j_converts_to_beta(self):
        cfg = RunConfig(base_config(temperature={"T_over_J": 8}))
        assert cfg.beta == pytest.approx(0.125)

    def test_delta_bounded_by_probe_spin(self):
        with pytest.raises(ConfigError, match="delta"):
            RunConfig(base_config(probe={"two_s0": 1, "delta": 2}))

    def test_negative_coupling_rejected(self):
        with pytest.raises(ConfigError, match="model.J"):
            RunConfig(base_config(model={"kind": "ring", "n_spins": 3, "two_s": 1, "J": -1}))

    def test_unknown_model_kind(self):
        with pytest.raises(ConfigError, match="model.kind"):
            RunConfig(base_config(model={"kind": "chain", "n_spins": 3, "two_s": 1}))

    def test_ring_needs_three_spins(self):
        with pytest.raises(ConfigError, match="ring"):
            RunConfig(base_config(model={"kind": "ring", "n_spins": 2, "two_s": 1}))

    def test_couplings_only_for_exact(self):
        with pytest.raises(ConfigError, match="couplings"):
            RunConfig(
                base_config(
                    model={"kind": "ring", "n_spins": 3, "two_s": 1, "couplings": []}
                )
            )

    def test_couplings_shape_checked(self):
        with pytest.raises(ConfigError, match="couplings"):
            RunConfig(
                base_config(
                    model={
                        "kind": "exact",
                        "n_spins": 2,
                        "two_s": 1,
                        "couplings": [[0.0]],
                    }
                )
            )

    def test_explicit_state_length_checked(self):
        with pytest.raises(ConfigError, match="state"):
            RunConfig(base_config(probe={"two_s0": 1, "state": [1.0]}))

    def test_explicit_state_normalized(self):
        cfg = RunConfig(base_config(probe={"two_s0": 1, "state": [1.0, [0.0, 1.0]]}))
        amps = cfg.probe_state().amplitudes
        np.testing.assert_allclose(np.abs(amps), [2**-0.5, 2**-0.5], rtol=1e-14)
        assert amps[1] == pytest.approx(1j * 2**-0.5)

    def test_lambda_must_be_positive(self):
        with pytest.raises(ConfigError, match="lambda"):
            RunConfig(base_config(**{"lambda": 0.0}))

    def test_tolerances_positive(self):
        with pytest.raises(ConfigError, match="magnitude_tol"):
            RunConfig(base_config(tolerances={"magnitude_tol": -1.0}))

    def test_parse_error_reports_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "model": }')
        with pytest.raises(ConfigError, match=r"broken\.json:2:"):
            load_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "nope.json"))


class TestCliCommands:
    def test_zeros_command(self, tmp_path, capsys):
        cfg = write_config(tmp_path, base_config())
        out = tmp_path / "zeros.csv"
        assert main(["zeros", "--config", cfg, "--out", str(out)]) == 0
        assert "circle_deviation=" in capsys.readouterr().out
        rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        header, data = rows[0], rows[1:]
        assert header == "index,re,im,theta,abs_minus_1,multiplicity,predicted_time"
        assert len(data) == 2
        for row in data:
            fields = row.split(",")
            assert float(fields[3]) == pytest.approx(np.pi, abs=1e-8)
            assert float(fields[6]) == pytest.approx(np.pi, abs=1e-8)
            assert fields[5] == "2"

    def test_evolve_round_trip_and_closed_form(self, tmp_path):
        cfg = write_config(tmp_path, base_config())
        out = tmp_path / "series.csv"
        assert main(["evolve", "--config", cfg, "--out", str(out)]) == 0
        rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert rows[0] == "t,re,im,abs"
        data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
        t, re, im, mag = data.T
        np.testing.assert_allclose(re, 0.5 * np.cos(t / 2) ** 2, atol=1e-12)
        # 17 significant digits round-trip bit-exactly
        np.testing.assert_array_equal(mag, np.abs(re + 1j * im))

    def test_evolve_overrides(self, tmp_path):
        cfg = write_config(tmp_path, base_config())
        out = tmp_path / "series.csv"
        assert main(["evolve", "--config", cfg, "--out", str(out), "--steps", "16", "--t-max", "1.0"]) == 0
        rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert len(rows) == 17
        assert float(rows[-1].split(",")[0]) < 1.0

    def test_correlate_success_exit_zero(self, tmp_path):
        data = base_config(temperature={"beta": 1.0})
        cfg = write_config(tmp_path, data)
        out = tmp_path / "report.json"
        assert main(["correlate", "--config", cfg, "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["max_deviation"] < 1e-6
        assert report["unmatched_predicted"] == []
        assert len(report["matches"]) == len(report["predicted"])
        assert report["circle_deviation"] < 1e-8

    def test_correlate_rejects_nonzero_h0(self, tmp_path):
        data = base_config(probe={"two_s0": 1, "delta": 1, "h0": 0.5})
        cfg = write_config(tmp_path, data)
        assert main(["correlate", "--config", cfg, "--out", str(tmp_path / "r.json")]) == 2

    def test_invalid_config_exit_code(self, tmp_path, capsys):
        cfg = write_config(tmp_path, base_config(temperature={"T_over_J": 0}))
        assert main(["zeros", "--config", cfg, "--out", str(tmp_path / "z.csv")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_reproduce_fig4(self, tmp_path):
        assert main(["reproduce", "fig4", "--out-dir", str(tmp_path)]) == 0
        for panel in "abcd":
            base = tmp_path / "fig4" / panel
            assert (base / "zeros.csv").exists()
            assert (base / "series.csv").exists()
            report = json.loads((base / "report.json").read_text())
            assert report["unmatched_predicted"] == []
        # panel (a): all four zeros at theta = pi
        rows = [
            l
            for l in (tmp_path / "fig4" / "a" / "zeros.csv").read_text().splitlines()
            if not l.startswith("#")
        ][1:]
        assert len(rows) == 4
        for row in rows:
            assert float(row.split(",")[3]) == pytest.approx(np.pi, abs=1e-6)

    def test_reproduce_deterministic(self, tmp_path):
        assert main(["reproduce", "fig2", "--out-dir", str(tmp_path / "one")]) == 0
        assert main(["reproduce", "fig2", "--out-dir", str(tmp_path / "two")]) == 0
        for panel in "abcd":
            for name in ("zeros.csv", "series.csv", "report.json"):
                a = (tmp_path / "one" / "fig2" / panel / name).read_text()
                b = (tmp_path / "two" / "fig2" / panel / name).read_text()
                assert a == b
