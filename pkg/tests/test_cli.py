import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from pdmscatter.angular import solve_phi, solve_theta
from pdmscatter.cli import CSV_COLUMNS, main, read_config

TRIVIAL_CFG = "a = 0\nb = 0\nc = -0.5\nA_theta = 1\nB_theta = 0\nC_phi = 1\nD_phi = 1\nalpha = 1\nf0 = 1\n"
DELTA_ELL_EXAMPLE = 2.7770880974308114


@pytest.fixture
def cfg(tmp_path):
    def write(text=TRIVIAL_CFG, name="p.cfg"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], [[float(x) for x in row] for row in rows[1:]]


class TestAngular:
    def test_trivial_rows(self, cfg, capsys):
        assert main(["--config", cfg(), "angular"]) == 0
        out = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
        assert float(out["lambda_qn"]) == 2.0 and float(out["ell_qn"]) == 3.0

    def test_matches_library_bit_for_bit(self, capsys):
        assert main(["angular", "--n-phi", "1", "--n-theta", "2"]) == 0
        out = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
        p = read_config(None)
        phi = solve_phi(p, 1)
        th = solve_theta(p, phi.lambda_qn, 2)
        assert float(out["lambda_qn"]) == phi.lambda_qn and float(out["ell_qn"]) == th.ell_qn
        assert float(out["chi2_sq"]) == th.chi2_sq and float(out["theta_residual"]) == th.residual

    def test_config_errors(self, cfg, tmp_path):
        assert main(["--config", str(tmp_path / "missing.cfg"), "angular"]) == 2
        assert main(["--config", cfg("a = 0\n"), "angular"]) == 2
        assert main(["angular", "--n-phi", "-1"]) == 2


class TestPhaseSweep:
    def test_worked_example(self, cfg, tmp_path):
        out = str(tmp_path / "s.csv")
        assert main(["--config", cfg(), "phase-sweep", "--e-min", "5", "--out", out]) == 0
        header, rows = read_csv(out)
        assert tuple(header) == CSV_COLUMNS
        assert len(rows) == 1
        assert rows[0][7] == pytest.approx(DELTA_ELL_EXAMPLE, rel=1e-15)
        assert rows[0][6] == 0.0

    def test_skip_region(self, cfg, tmp_path):
        out = str(tmp_path / "s.csv")
        assert main(["--config", cfg(), "phase-sweep", "--e-min", "100", "--out", out]) == 0
        assert open(out).read() == ",".join(CSV_COLUMNS) + "\n"
        assert "100" in open(out + ".skipped").read()

    def test_b_zero_column(self, cfg, tmp_path):
        out = str(tmp_path / "s.csv")
        assert main(["--config", cfg(), "phase-sweep", "--e-min", "0", "--e-max", "5", "--e-count", "6", "--out", out]) == 0
        _, rows = read_csv(out)
        assert [r[6] for r in rows] == [0.0] * 6

    def test_deterministic_and_ordered(self, tmp_path):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        args = ["phase-sweep", "--e-min", "-1", "--e-max", "3", "--e-count", "9"]
        assert main(["--jobs", "4"] + args + ["--out", a]) == 0
        assert main(args + ["--out", b, "--jobs", "1"]) == 0
        assert open(a, "rb").read() == open(b, "rb").read()
        _, rows = read_csv(a)
        energies = [r[0] for r in rows]
        assert energies == sorted(energies)

    def test_seventeen_digits(self, tmp_path):
        out = str(tmp_path / "s.csv")
        main(["phase-sweep", "--e-min", "0.3", "--out", out])
        _, rows = read_csv(out)
        line = open(out).read().splitlines()[1]
        assert [f"{x:.17g}" for x in rows[0]] == line.split(",")

    def test_not_scattering(self, cfg, capsys):
        assert main(["--config", cfg(TRIVIAL_CFG.replace("-0.5", "0.5")), "phase-sweep", "--e-min", "1"]) == 1
        assert "K^2" in capsys.readouterr().err

    def test_usage(self):
        assert main(["phase-sweep", "--e-min", "2", "--e-max", "1"]) == 2
        assert main(["phase-sweep"]) == 2
        assert main(["--jobs", "0", "phase-sweep", "--e-min", "1"]) == 2


class TestWavefunction:
    def test_sources_phase_aligned(self, tmp_path):
        tables = {}
        for src in ("closed-form", "numerov-approx"):
            out = str(tmp_path / f"{src}.csv")
            args = ["wavefunction", "--energy", "0.3", "--r-min", "0.5", "--r-max", "60", "--n-points", "200", "--source", src]
            assert main(args + ["--out", out]) == 0
            header, rows = read_csv(out)
            assert header == ["r", "re_u", "im_u"]
            tables[src] = np.array(rows)
        a, b = tables["closed-form"], tables["numerov-approx"]
        np.testing.assert_array_equal(a[:, 0], b[:, 0])
        assert np.max(np.abs(a[:, 1] - b[:, 1])) < 1e-3
        assert np.max(np.abs(a[:, 2])) < 1e-10

    def test_heun_source(self, tmp_path):
        out = str(tmp_path / "h.csv")
        assert main(["wavefunction", "--energy", "0.3", "--r-min", "1", "--r-max", "20", "--n-points", "5", "--source", "numerov-heun", "--out", out]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 5 and all(math.isfinite(v) for row in rows for v in row)

    def test_single_point(self, tmp_path):
        out = str(tmp_path / "w.csv")
        assert main(["wavefunction", "--energy", "0.3", "--r-min", "2", "--r-max", "2", "--n-points", "1", "--out", out]) == 0
        assert len(read_csv(out)[1]) == 1

    def test_bad_r_min(self):
        assert main(["wavefunction", "--energy", "0.3", "--r-min", "0", "--r-max", "2"]) == 2


class TestVerify:
    def test_default_all_pass(self, tmp_path):
        out = str(tmp_path / "v.json")
        assert main(["verify", "--out", out]) == 0
        reports = json.load(open(out))
        names = {r["quantity"] for r in reports}
        for needed in ("phi_eigenvalue_n=0", "theta_eigenvalue_n=2", "numerov_phase", "kummer_overlap",
                       "wavefunction_realness", "heun_discrepancy_f0=10"):
            assert needed in names
        assert all(r["passed"] is not False for r in reports)
        heun = [r["numeric_value"] for r in reports if r["quantity"].startswith("heun_discrepancy_f0")]
        assert len(heun) == 5 and all(x > y for x, y in zip(heun, heun[1:]))
        assert all(r["passed"] is None for r in reports if r["quantity"].startswith("heun"))

    def test_positive_c(self, cfg, tmp_path, capsys):
        out = str(tmp_path / "v.json")
        assert main(["--config", cfg(TRIVIAL_CFG.replace("-0.5", "0.5")), "verify", "--out", out]) == 1
        reports = json.load(open(out))
        bad = [r for r in reports if r["passed"] is False]
        assert [r["quantity"] for r in bad] == ["scattering_channel"]
        assert "c < 0" in bad[0]["settings_echo"]
        assert "scattering_channel" in capsys.readouterr().err


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "pdmscatter.cli", "angular"], capture_output=True, text=True)
    assert res.returncode == 0 and "lambda_qn" in res.stdout
    res = subprocess.run([sys.executable, "-m", "pdmscatter.cli", "nope"], capture_output=True, text=True)
    assert res.returncode == 2
