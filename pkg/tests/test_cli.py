import json
import math
from fractions import Fraction

import numpy as np
import pytest

from jcm4.cli import main, parse_tau, tau_label
from jcm4.errors import ParseError

# small, fast configuration shared by the subcommand tests
FAST = ["--nbar", "4", "--cutoff", "32"]


class TestParseTau:
    @pytest.mark.parametrize(
        "expr,value",
        [
            ("0", 0.0),
            ("pi", math.pi),
            ("pi/4", math.pi / 4),
            ("pi/8-pi/24000", math.pi * 2999 / 24000),
            ("pi/4+pi/800", math.pi * 201 / 800),
            ("3*pi/800", 3 * math.pi / 800),
            ("3pi/800", 3 * math.pi / 800),
            ("2.5", 2.5),
            ("pi/2+0.125", math.pi / 2 + 0.125),
            ("-pi/4", -math.pi / 4),
            (" pi / 8 ", math.pi / 8),
        ],
    )
    def test_values(self, expr, value):
        assert parse_tau(expr) == pytest.approx(value, abs=1e-15)

    def test_exact_rational_accumulation(self):
        # pi terms combine as exact fractions before any float rounding
        got = parse_tau("pi/8-pi/24000")
        frac = Fraction(1, 8) - Fraction(1, 24000)
        assert frac == Fraction(2999, 24000)
        assert got == math.pi * frac.numerator / frac.denominator

    @pytest.mark.parametrize(
        "expr", ["", "pie", "pi/", "pi//4", "2x", "pi/4+", "++pi", "pi/0x3"]
    )
    def test_malformed(self, expr):
        with pytest.raises(ParseError):
            parse_tau(expr)

    def test_labels_are_filesystem_safe(self):
        label = tau_label("pi/8-pi/24000")
        assert "/" not in label and "+" not in label and "-" not in label
        assert label == "pi_8mpi_24000"
        assert tau_label("pi/4+pi/800") == "pi_4ppi_800"


class TestPndCommand:
    def test_writes_csv(self, tmp_path):
        rc = main(["pnd", *FAST, "--out", str(tmp_path), "--tau", "0"])
        assert rc == 0
        path = tmp_path / "pnd_0.csv"
        lines = path.read_text().splitlines()
        assert lines[0] == "n,p"
        assert len(lines) == 34
        probs = [float(line.split(",")[1]) for line in lines[1:]]
        assert abs(sum(probs) - 1.0) < 1e-9

    def test_multiple_taus_comma_and_repeat(self, tmp_path):
        rc = main([
            "pnd", *FAST, "--out", str(tmp_path),
            "--tau", "0,pi/4", "--tau", "pi/2",
        ])
        assert rc == 0
        for name in ("pnd_0.csv", "pnd_pi_4.csv", "pnd_pi_2.csv"):
            assert (tmp_path / name).exists()

    def test_deterministic_bytes(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for sub in (a, b):
            main(["pnd", *FAST, "--out", str(sub), "--tau", "pi/4"])
        assert (a / "pnd_pi_4.csv").read_bytes() == (b / "pnd_pi_4.csv").read_bytes()

    def test_lf_line_endings(self, tmp_path):
        main(["pnd", *FAST, "--out", str(tmp_path), "--tau", "0"])
        raw = (tmp_path / "pnd_0.csv").read_bytes()
        assert b"\r" not in raw

    def test_seventeen_digit_round_trip(self, tmp_path):
        main(["pnd", *FAST, "--out", str(tmp_path), "--tau", "pi/4"])
        from jcm4.dynamics import ModelParams, RabiMode, evolve
        from jcm4.observables import pnd

        params = ModelParams(k=4, alpha=2.0, cutoff=32, mode=RabiMode.QUADRATIC)
        expected = pnd(evolve(params, math.pi / 4)).probabilities
        lines = (tmp_path / "pnd_pi_4.csv").read_text().splitlines()[1:]
        got = np.array([float(line.split(",")[1]) for line in lines])
        assert np.array_equal(got, expected)


class TestEntropyCommand:
    def test_range_scan(self, tmp_path):
        rc = main([
            "entropy", *FAST, "--out", str(tmp_path),
            "--tau-min", "0", "--tau-max", "pi/2", "--steps", "11",
        ])
        assert rc == 0
        lines = (tmp_path / "entropy.csv").read_text().splitlines()
        assert lines[0] == "tau,entropy"
        assert len(lines) == 12
        first = [float(v) for v in lines[1].split(",")]
        assert first == [0.0, 0.0]

    def test_dip_window_sidecar(self, tmp_path):
        rc = main([
            "entropy", "--nbar", "50", "--cutoff", "256",
            "--out", str(tmp_path), "--dip-window", "--steps", "121",
        ])
        assert rc == 0
        data = json.loads((tmp_path / "entropy_dip.json").read_text())
        assert data["schema_version"] == 1
        assert data["delta1"] == pytest.approx(math.pi / 800, abs=1e-15)
        assert set(data["gridlines"]) == {"-5", "-3", "-1", "1", "3", "5"}
        assert len(data["minima_tau"]) == len(data["minima_entropy"])
        assert len(data["minima_tau"]) >= 2
        lines = (tmp_path / "entropy_dip.csv").read_text().splitlines()
        assert lines[0] == "tau,entropy"
        assert len(lines) == 122

    def test_bad_steps(self, tmp_path):
        rc = main([
            "entropy", *FAST, "--out", str(tmp_path),
            "--tau-min", "0", "--tau-max", "1", "--steps", "1",
        ])
        assert rc == 2


class TestQfuncCommand:
    def test_grid_and_sidecar(self, tmp_path):
        rc = main([
            "qfunc", *FAST, "--out", str(tmp_path),
            "--tau", "0", "--window", "6", "--resolution", "61",
        ])
        assert rc == 0
        lines = (tmp_path / "qfunc_0.csv").read_text().splitlines()
        assert lines[0] == "re,im,q"
        assert len(lines) == 61 * 61 + 1
        data = json.loads((tmp_path / "qfunc_0.json").read_text())
        assert data["component_count"] == 1
        assert data["window"] == [-6.0, 6.0, -6.0, 6.0]
        assert abs(data["riemann_sum"] - 1.0) < 1e-2
        assert len(data["component_masses"]) == 1

    def test_explicit_window(self, tmp_path):
        rc = main([
            "qfunc", *FAST, "--out", str(tmp_path),
            "--tau", "0", "--window=-1,5,-3,3", "--resolution", "31",
        ])
        assert rc == 0
        data = json.loads((tmp_path / "qfunc_0.json").read_text())
        assert data["window"] == [-1.0, 5.0, -3.0, 3.0]

    def test_bad_window(self, tmp_path):
        rc = main([
            "qfunc", *FAST, "--out", str(tmp_path),
            "--tau", "0", "--window", "1,2,3",
        ])
        assert rc == 2


class TestInversionCommand:
    def test_endpoints(self, tmp_path):
        rc = main([
            "inversion", *FAST, "--out", str(tmp_path),
            "--tau-min", "0", "--tau-max", "pi/2", "--steps", "3",
        ])
        assert rc == 0
        lines = (tmp_path / "inversion.csv").read_text().splitlines()
        assert lines[0] == "tau,w"
        w0 = float(lines[1].split(",")[1])
        w_half = float(lines[3].split(",")[1])
        assert abs(w0 - 1.0) < 1e-12
        assert abs(w_half + 1.0) < 1e-9


class TestCatcheckCommand:
    def test_dossier_fields(self, tmp_path):
        rc = main([
            "catcheck", "--nbar", "50", "--cutoff", "256",
            "--out", str(tmp_path), "--r", "1",
        ])
        assert rc == 0
        data = json.loads((tmp_path / "catcheck_r1.json").read_text())
        assert data["schema_version"] == 1
        assert data["r"] == 1
        assert data["kerr_fidelity_half_period"] > 1.0 - 1e-8
        assert data["cat_fidelity"] >= 0.98
        assert data["cat_nominal_fidelity"] >= 0.98
        assert abs(data["entropy_quarter"] - 0.6931) < 0.01
        assert data["entropy_dip"] < data["entropy_quarter"]
        assert data["rho12_target_deviation"] < 0.05
        re12, im12 = data["rho12_dip"]
        assert abs(re12 + 0.5) < 0.05
        assert abs(im12) < 0.01

    def test_even_r_rejected(self, tmp_path):
        rc = main(["catcheck", *FAST, "--out", str(tmp_path), "--r", "2"])
        assert rc == 2


class TestConfigResolution:
    def test_config_file_sets_defaults(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"nbar": 4.0, "cutoff": 32,
                                   "output_dir": str(tmp_path)}))
        rc = main(["pnd", "--config", str(cfg), "--tau", "0"])
        assert rc == 0
        lines = (tmp_path / "pnd_0.csv").read_text().splitlines()
        assert len(lines) == 34

    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"nbar": 4.0, "cutoff": 64}))
        rc = main([
            "pnd", "--config", str(cfg), "--cutoff", "32",
            "--out", str(tmp_path), "--tau", "0",
        ])
        assert rc == 0
        lines = (tmp_path / "pnd_0.csv").read_text().splitlines()
        assert len(lines) == 34

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"nbarr": 4.0}))
        rc = main(["pnd", "--config", str(cfg), "--tau", "0",
                   "--out", str(tmp_path)])
        assert rc == 2

    def test_missing_config_file(self, tmp_path):
        rc = main(["pnd", "--config", str(tmp_path / "nope.json"),
                   "--tau", "0", "--out", str(tmp_path)])
        assert rc == 2


class TestErrorPaths:
    def test_malformed_tau_exit_code(self, tmp_path):
        rc = main(["pnd", *FAST, "--out", str(tmp_path), "--tau", "pie"])
        assert rc == 2

    def test_tail_too_heavy_exit_code(self, tmp_path):
        rc = main(["pnd", "--nbar", "50", "--cutoff", "60",
                   "--out", str(tmp_path), "--tau", "0"])
        assert rc == 2
