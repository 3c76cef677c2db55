import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdmscatter.angular import (
    ell_closed_form,
    lambda_closed_form,
    phi_coefficients,
    phi_quantization_residual,
    phi_wavefunction,
    solve_phi,
    solve_theta,
    theta_coefficients,
    theta_quantization_residual,
    theta_wavefunction,
)
from pdmscatter.errors import NegativeDiscriminant, PoleError
from pdmscatter.model import ModelParams


def make(**kw):
    base = dict(a=0.0, b=0.0, c=-0.5, A_theta=1.0, B_theta=0.0, C_phi=1.0, D_phi=1.0, alpha=1, f0=1.0)
    base.update(kw)
    return ModelParams(**base)


strengths = st.floats(1.0, 6.0)


class TestLambda:
    def test_oscillator_limit(self):
        assert lambda_closed_form(make(), 0) == 2.0

    def test_alpha_and_n(self):
        assert lambda_closed_form(make(alpha=3), 2) == 18.0

    def test_generic(self):
        assert lambda_closed_form(make(C_phi=2, D_phi=3), 0) == pytest.approx(math.sqrt(17) / 2 + 4.5, rel=1e-15)

    def test_coefficients(self):
        assert phi_coefficients(make(C_phi=2, D_phi=2), 3.0) == pytest.approx((9 / 4, 9 / 4, 1.0))
        assert phi_coefficients(make(), 0.0)[0] == 0.0
        x1, x2, x3 = phi_coefficients(make(C_phi=1.0001, D_phi=1.0001), 2.0)
        assert x3 == pytest.approx(0, abs=1e-4) and x2 == pytest.approx(x1)

    def test_residual_examples(self):
        assert phi_quantization_residual(0, *phi_coefficients(make(), 2.0)) == pytest.approx(0, abs=1e-12)
        assert phi_quantization_residual(1, *phi_coefficients(make(), 4.0)) == pytest.approx(0, abs=1e-12)
        # reduces to (n + 1)^2 - Lambda^2 / 4
        assert phi_quantization_residual(0, *phi_coefficients(make(), 3.0)) == pytest.approx(-5 / 4)

    def test_negative_discriminant(self):
        with pytest.raises(NegativeDiscriminant):
            phi_quantization_residual(0, 0.0, 1.0, 0.0)

    @given(strengths, strengths, st.integers(1, 4), st.integers(0, 6))
    def test_residual_vanishes(self, c, d, alpha, n):
        assert abs(solve_phi(make(C_phi=c, D_phi=d, alpha=alpha), n).residual) < 1e-9


class TestEll:
    def test_oscillator_limit(self):
        assert ell_closed_form(make(), 2.0, 0) == 3.0

    def test_generic(self):
        ref = (1 + math.sqrt(17)) / 2 + math.sqrt(6) + 2
        assert ell_closed_form(make(A_theta=2, B_theta=1), 2.0, 1) == pytest.approx(ref, rel=1e-15)

    @given(strengths, st.floats(0, 5), st.floats(0.5, 12), st.integers(0, 6))
    def test_residual_vanishes(self, a, b, lam, n):
        assert abs(solve_theta(make(A_theta=a, B_theta=b), lam, n).residual) < 1e-9

    def test_residual_off_eigenvalue(self):
        chi = theta_coefficients(make(), 2.0, ell=3.5)
        assert abs(theta_quantization_residual(0, *chi)) > 0.1


def _ode_residual_phi(p, sol, phi, h=1e-4):
    f = lambda x: phi_wavefunction(p, sol, x)
    d2 = (f(phi + h) - 2 * f(phi) + f(phi - h)) / h ** 2
    mf, al = p.mass_factor, p.alpha
    v = mf * al ** 2 * (p.D_phi * (p.D_phi - 1) / np.sin(al * phi) ** 2 + p.C_phi * (p.C_phi - 1) / np.cos(al * phi) ** 2)
    # relative to the size of the Lambda^2 term
    return np.max(np.abs(d2 + (sol.lambda_qn ** 2 - v) * f(phi))) / (sol.lambda_qn ** 2 * np.max(np.abs(f(phi))))


def _ode_residual_theta(p, lam, sol, th, h=1e-4):
    f = lambda x: theta_wavefunction(p, sol, x)
    d1 = (f(th + h) - f(th - h)) / (2 * h)
    d2 = (f(th + h) - 2 * f(th) + f(th - h)) / h ** 2
    mf = p.mass_factor
    v = lam ** 2 / np.sin(th) ** 2 + mf * (p.B_theta / np.sin(th) ** 2 + p.A_theta * (p.A_theta - 1) / np.cos(th) ** 2)
    res = d2 + d1 / np.tan(th) + (sol.l_sq - v) * f(th)
    return np.max(np.abs(res)) / (sol.l_sq * np.max(np.abs(f(th))))


class TestWavefunctions:
    @pytest.mark.parametrize("kw", [{}, dict(C_phi=1.5, D_phi=2.0), dict(C_phi=3, D_phi=1.2, alpha=2)])
    @pytest.mark.parametrize("n", [0, 1, 3])
    def test_phi_solves_ode(self, kw, n):
        p = make(**kw)
        phi = np.linspace(0.15, math.pi / (2 * p.alpha) - 0.15, 40)
        assert _ode_residual_phi(p, solve_phi(p, n), phi) < 1e-5

    def test_phi_value(self):
        # exact solution sin(2 phi) / 2 for C = D = 1
        sol = solve_phi(make(), 0)
        assert phi_wavefunction(make(), sol, math.pi / 4) == pytest.approx(0.5, rel=1e-14)

    def test_phi_literal_exponent_is_not_a_solution(self):
        # the x^(1/2 + p) form fails the phi equation; x^(1/4 + p) passes
        p = make()
        sol = solve_phi(p, 0)
        phi = np.linspace(0.3, 1.2, 20)
        x = np.sin(phi) ** 2
        literal = x ** 0.75 * (1 - x) ** 0.5
        h = 1e-4
        lit = lambda t: np.sin(t) ** 1.5 * np.cos(t)
        res = (lit(phi + h) - 2 * lit(phi) + lit(phi - h)) / h ** 2 + sol.lambda_qn ** 2 * literal
        assert np.max(np.abs(res)) / (sol.lambda_qn ** 2 * np.max(literal)) > 0.01
        assert _ode_residual_phi(p, sol, phi) < 1e-7

    def test_phi_symmetry(self):
        p = make(C_phi=2.0, D_phi=2.0, alpha=2)
        sol = solve_phi(p, 1)
        a = math.pi / (4 * p.alpha)
        assert phi_wavefunction(p, sol, a) == pytest.approx(phi_wavefunction(p, sol, math.pi / p.alpha - a))

    @pytest.mark.parametrize("kw", [{}, dict(A_theta=2.0, B_theta=1.0), dict(A_theta=1.5, B_theta=0.3)])
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_theta_solves_ode(self, kw, n):
        p = make(**kw)
        lam = lambda_closed_form(p, 0)
        th = np.linspace(0.2, math.pi / 2 - 0.2, 40)
        assert _ode_residual_theta(p, lam, solve_theta(p, lam, n), th) < 1e-5

    def test_poles(self):
        p = make()
        with pytest.raises(PoleError):
            phi_wavefunction(p, solve_phi(p, 0), 0.0)
        with pytest.raises(PoleError):
            theta_wavefunction(p, solve_theta(p, 2.0, 0), math.pi / 2)
