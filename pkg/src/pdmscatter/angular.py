"""
Closed-form solutions of the two angular equations.

phi sector, with x = sin^2(alpha phi)::

    Phi'' + [Lambda^2 - (2 m0/hbar^2)(alpha^2 D(D-1)/sin^2(alpha phi)
                                      + alpha^2 C(C-1)/cos^2(alpha phi))] Phi = 0

theta sector, with z = sin^2(theta)::

    Theta'' + cot(theta) Theta' + [L^2 - Lambda^2/sin^2(theta)
        - (2 m0/hbar^2)(B/sin^2(theta) + A(A-1)/cos^2(theta))] Theta = 0

Both reduce to hypergeometric-type equations whose Nikiforov-Uvarov
quantization conditions and Jacobi-polynomial eigenfunctions are coded here.
Angular functions are returned unnormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeDiscriminant, PoleError
from .model import POLE_TOL, ModelParams
from .specfun import jacobi_p


@dataclass(frozen=True)
class PhiSolution:
    n_phi: int
    xi1_sq: float
    xi2_sq: float
    xi3_sq: float
    lambda_qn: float
    residual: float


@dataclass(frozen=True)
class ThetaSolution:
    n_theta: int
    chi1_sq: float
    chi2_sq: float
    chi3_sq: float
    ell_qn: float
    l_sq: float
    residual: float


def _root(value: float, what: str) -> float:
    if value < 0:
        raise NegativeDiscriminant(f"{what} = {value!r} < 0")
    return math.sqrt(value)


def _check_poles(angle, what: str) -> np.ndarray:
    angle = np.asarray(angle, dtype=float)
    k = np.round(angle / (0.5 * np.pi))
    if np.any(np.abs(angle - k * 0.5 * np.pi) < POLE_TOL):
        raise PoleError(f"{what} hits a multiple of pi/2")
    return angle


# ---------------------------------------------------------------- phi sector

def phi_coefficients(params: ModelParams, lambda_qn: float) -> tuple[float, float, float]:
    """(xi1^2, xi2^2, xi3^2) of the phi equation in the variable x = sin^2(alpha phi)."""
    k = params.m0 / (2.0 * params.hbar ** 2)
    lam_term = lambda_qn ** 2 / (4.0 * params.alpha ** 2)
    d_term = params.D_phi * (params.D_phi - 1.0)
    c_term = params.C_phi * (params.C_phi - 1.0)
    return lam_term, k * (d_term - c_term) + lam_term, k * d_term


def lambda_closed_form(params: ModelParams, n_phi: int) -> float:
    """Positive root Lambda of the phi-sector quantization condition."""
    if n_phi < 0:
        raise ValueError("n_phi must be >= 0")
    g = 8.0 * params.m0 / params.hbar ** 2
    root_c = math.sqrt(1.0 + g * params.C_phi * (params.C_phi - 1.0))
    root_d = math.sqrt(1.0 + g * params.D_phi * (params.D_phi - 1.0))
    return params.alpha * (0.5 * root_c + 0.5 * root_d + 2 * n_phi + 1)


def phi_quantization_residual(n_phi: int, xi1_sq: float, xi2_sq: float, xi3_sq: float) -> float:
    """Left-hand side of the phi-sector NU quantization condition (zero on eigenvalues)."""
    q = _root(1.0 / 16.0 + xi1_sq + xi3_sq - xi2_sq, "1/16 + xi1^2 + xi3^2 - xi2^2")
    p = _root(1.0 / 16.0 + xi3_sq, "1/16 + xi3^2")
    n = n_phi
    return (
        n * n
        + (2 * n + 1) * (q + p + 0.5)
        + 2.0 * q * p
        + (2.0 * xi3_sq - xi2_sq - 0.125)
    )


def solve_phi(params: ModelParams, n_phi: int) -> PhiSolution:
    lam = lambda_closed_form(params, n_phi)
    xi1, xi2, xi3 = phi_coefficients(params, lam)
    return PhiSolution(n_phi, xi1, xi2, xi3, lam, phi_quantization_residual(n_phi, xi1, xi2, xi3))


def phi_wavefunction(params: ModelParams, sol: PhiSolution, phi):
    """
    Unnormalized Phi(phi) = x^(1/4+p) (1-x)^(1/4+q) P_n^(2p, 2q)(1 - 2x),
    x = sin^2(alpha phi), p = sqrt(1/16 + xi3^2), q = sqrt(1/16 + xi1^2 + xi3^2 - xi2^2).
    """
    ap = _check_poles(np.multiply(params.alpha, phi), "alpha*phi")
    x = np.sin(ap) ** 2
    p = _root(1.0 / 16.0 + sol.xi3_sq, "1/16 + xi3^2")
    q = _root(1.0 / 16.0 + sol.xi1_sq + sol.xi3_sq - sol.xi2_sq, "1/16 + xi1^2 + xi3^2 - xi2^2")
    out = x ** (0.25 + p) * (1.0 - x) ** (0.25 + q) * jacobi_p(sol.n_phi, 2 * p, 2 * q, 1.0 - 2.0 * x)
    return out if out.ndim else float(out)


# -------------------------------------------------------------- theta sector

def theta_coefficients(params: ModelParams, lambda_qn: float, ell: float | None = None):
    """
    (chi1^2, chi2^2, chi3^2) of the theta equation in z = sin^2(theta).

    chi1^2 and chi2^2 depend on L^2 = ell(ell+1); when ``ell`` is omitted
    the closed-form ground-state ell is used.
    """
    if ell is None:
        ell = ell_closed_form(params, lambda_qn, 0)
    k = params.m0 / (2.0 * params.hbar ** 2)
    l_sq = ell * (ell + 1.0)
    a_term = params.A_theta * (params.A_theta - 1.0)
    lam2 = lambda_qn ** 2
    return (
        0.25 * l_sq,
        k * (params.B_theta - a_term) + 0.25 * (l_sq + lam2),
        k * params.B_theta + 0.25 * lam2,
    )


def ell_closed_form(params: ModelParams, lambda_qn: float, n_theta: int) -> float:
    """Separation constant ell of the theta sector (generally non-integer)."""
    if n_theta < 0:
        raise ValueError("n_theta must be >= 0")
    g = params.m0 / params.hbar ** 2
    return (
        0.5 * (1.0 + math.sqrt(1.0 + 8.0 * g * params.A_theta * (params.A_theta - 1.0)))
        + math.sqrt(lambda_qn ** 2 + 2.0 * g * params.B_theta)
        + 2 * n_theta
    )


def theta_quantization_residual(
    n_theta: int, chi1_sq: float, chi2_sq: float, chi3_sq: float
) -> float:
    """Left-hand side of the theta-sector NU quantization condition."""
    q = _root(1.0 / 16.0 + chi1_sq + chi3_sq - chi2_sq, "1/16 + chi1^2 + chi3^2 - chi2^2")
    chi3 = _root(chi3_sq, "chi3^2")
    n = n_theta
    return (
        0.5 * n
        + n * n
        + (2 * n + 1) * (q + chi3 + 0.25)
        + 2.0 * chi3 * q
        + 2.0 * chi3_sq
        - chi2_sq
    )


def solve_theta(params: ModelParams, lambda_qn: float, n_theta: int) -> ThetaSolution:
    ell = ell_closed_form(params, lambda_qn, n_theta)
    chi1, chi2, chi3 = theta_coefficients(params, lambda_qn, ell)
    return ThetaSolution(
        n_theta, chi1, chi2, chi3, ell, ell * (ell + 1.0),
        theta_quantization_residual(n_theta, chi1, chi2, chi3),
    )


def theta_wavefunction(params: ModelParams, sol: ThetaSolution, theta):
    """
    Unnormalized Theta(theta) = z^chi3 (1-z)^(1/4+q) P_n^(2 chi3, 2q)(1 - 2z),
    z = sin^2(theta), q = sqrt(1/16 + chi1^2 + chi3^2 - chi2^2).
    """
    th = _check_poles(theta, "theta")
    z = np.sin(th) ** 2
    chi3 = _root(sol.chi3_sq, "chi3^2")
    q = _root(1.0 / 16.0 + sol.chi1_sq + sol.chi3_sq - sol.chi2_sq, "1/16 + chi1^2 + chi3^2 - chi2^2")
    out = z ** chi3 * (1.0 - z) ** (0.25 + q) * jacobi_p(sol.n_theta, 2 * chi3, 2 * q, 1.0 - 2.0 * z)
    return out if out.ndim else float(out)
