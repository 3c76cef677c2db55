import math

import numpy as np
import pytest
from scipy.interpolate import CubicSpline

from pdmscatter.angular import ell_closed_form, lambda_closed_form
from pdmscatter.errors import DegenerateMatch, GridTooCoarse
from pdmscatter.model import ModelParams, RadialCoefficients, radial_coefficients
from pdmscatter.oracle import (
    NumerovSettings,
    OracleReport,
    extract_phase,
    fd_angular_eigen,
    fold_pi,
    heun_phase_audit,
    numerov_heun,
    numerov_radial,
    phase_discrepancy,
)
from pdmscatter.radial import WaveTable, coulomb_phase

TAN_ROOT = 4.4934094579090642  # first positive root of tan x = x


def nodes(table, upto):
    r, u = table.r_values, np.real(table.u_values)
    keep = r < upto
    spline = CubicSpline(r[keep], u[keep])
    return np.array([x for x in spline.roots(extrapolate=False) if x > 1.0])


class TestSettings:
    def test_defaults_scale_with_k(self):
        st = NumerovSettings().resolved(2.0)
        assert st.r_start == pytest.approx(5e-7) and st.r_max == pytest.approx(200.0)

    @pytest.mark.parametrize("kw", [dict(steps_per_wavelength=10), dict(match_fraction=1.0), dict(r_start=2, r_max=1)])
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            NumerovSettings(**kw)


class TestNumerov:
    def test_free_nodes(self):
        st = NumerovSettings(steps_per_wavelength=80)
        t = numerov_radial(RadialCoefficients(0.0, 0.0, 1.0), st)
        z = nodes(t, 60.0)
        np.testing.assert_allclose(z, math.pi * np.round(z / math.pi), rtol=1e-6)

    def test_p_wave_first_node(self):
        st = NumerovSettings(steps_per_wavelength=80)
        t = numerov_radial(RadialCoefficients(1.0, 0.0, 1.0), st)
        assert nodes(t, 10.0)[0] == pytest.approx(TAN_ROOT, rel=1e-6)

    @pytest.mark.parametrize("lp, lb", [(0.0, 0.0), (1.232, -2.0), (3.5, 2.0)])
    def test_residual(self, lp, lb):
        assert numerov_radial(RadialCoefficients(lp, lb, 1.0)).meta["residual"] < 1e-8

    def test_seed_region_is_small(self):
        t = numerov_radial(RadialCoefficients(2.0, 1.0, 1.0))
        assert t.meta["numerov_start"] < 0.05 * t.r_values.size
        assert t.source_tag == "numerov-approx"


class TestPhaseExtraction:
    grid = np.linspace(1e-3, 400.0, 20001)

    def table(self, u):
        return WaveTable(self.grid, u, "synthetic")

    def test_free(self):
        c = RadialCoefficients(0.0, 0.0, 1.0)
        assert extract_phase(self.table(np.sin(self.grid)), c) == pytest.approx(0.0, abs=1e-4)

    def test_synthetic_literal_formula(self):
        c = RadialCoefficients(1.232, -2.0, 1.0)
        theta = self.grid + (c.lambda_bar / c.k_bar) * np.log(2 * self.grid) - c.ell_prime * math.pi / 2
        d = extract_phase(self.table(np.sin(theta + 0.3)), c, corrected=False)
        assert d == pytest.approx(0.3, abs=1e-10)

    def test_numerov_end_to_end(self):
        c = RadialCoefficients(1.232, -2.0, 1.0)
        d = extract_phase(numerov_radial(c), c)
        assert phase_discrepancy(d, coulomb_phase(1.232, -2.0, 1.0)) < 1e-3

    def test_uncorrected_reference_is_biased(self):
        c = RadialCoefficients(3.0, 3.0, 1.0)
        t = numerov_radial(c)
        ref = coulomb_phase(3.0, 3.0, 1.0)
        assert phase_discrepancy(extract_phase(t, c, corrected=False), ref) > 1e-3
        assert phase_discrepancy(extract_phase(t, c), ref) < 1e-3

    def test_degenerate(self):
        with pytest.raises(DegenerateMatch):
            extract_phase(self.table(np.zeros_like(self.grid)), RadialCoefficients(0.0, 0.0, 1.0))

    def test_short_table(self):
        r = np.linspace(0.1, 30, 300)
        with pytest.raises(DegenerateMatch):
            extract_phase(WaveTable(r, np.sin(r), "x"), RadialCoefficients(0.0, 0.0, 1.0))

    def test_fold(self):
        assert fold_pi(math.pi) == 0.0
        assert fold_pi(math.pi / 2) == pytest.approx(math.pi / 2)
        assert fold_pi(-math.pi / 2) == pytest.approx(math.pi / 2)


class TestHeun:
    def setup_method(self):
        self.p = ModelParams(a=0, b=0.5, c=-0.5, A_theta=2, B_theta=1, C_phi=1.5, D_phi=2, alpha=1, f0=1)
        self.ell = ell_closed_form(self.p, lambda_closed_form(self.p, 0), 0)

    def test_residual_and_tag(self):
        t = numerov_heun(self.p, 0.0, self.ell)
        assert t.source_tag == "numerov-heun" and t.meta["residual"] < 1e-8

    def test_finite_at_unit_slope(self):
        d = heun_phase_audit(self.p, 0.0, self.ell, radial_coefficients(self.p, 0.0, self.ell))
        assert math.isfinite(d) and d > 1e-3

    def test_converges_for_steep_deformation(self):
        q = self.p.with_(f0=100.0)
        assert heun_phase_audit(q, 0.0, self.ell, radial_coefficients(q, 0.0, self.ell)) < 1e-3


class TestAngularEigen:
    def test_box_limit(self):
        p = ModelParams(a=0, b=0, c=-0.5, A_theta=1, B_theta=0, C_phi=1, D_phi=1, alpha=1, f0=1)
        np.testing.assert_allclose(fd_angular_eigen(p, "phi", 3, 4000), [4, 16, 36], rtol=1e-3)

    def test_nontrivial(self, nontrivial):
        lam = [lambda_closed_form(nontrivial, n) ** 2 for n in range(3)]
        np.testing.assert_allclose(fd_angular_eigen(nontrivial, "phi", 3, 4000), lam, rtol=1e-3)
        l0 = lambda_closed_form(nontrivial, 0)
        ls = [ell_closed_form(nontrivial, l0, n) for n in range(3)]
        l_sq = [x * (x + 1) for x in ls]
        np.testing.assert_allclose(fd_angular_eigen(nontrivial, "theta", 3, 4000, lambda_qn=l0), l_sq, rtol=1e-3)

    def test_grid_guards(self, nontrivial):
        with pytest.raises(ValueError):
            fd_angular_eigen(nontrivial, "phi", 3, 100)
        with pytest.raises(GridTooCoarse):
            fd_angular_eigen(nontrivial, "phi", 200, 500)
        with pytest.raises(ValueError):
            fd_angular_eigen(nontrivial, "psi")


def test_report_dict():
    rep = OracleReport("x", 1.0, 1.5, 0.5, "echo", 1.0, True)
    assert rep.as_dict()["passed"] is True
