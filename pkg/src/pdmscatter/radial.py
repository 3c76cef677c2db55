"""
Closed-form scattering sector of the reduced radial equation

    U'' + (K^2 + 2 Lbar / r - l'(l'+1) / r^2) U = 0.

The regular solution is

    U(r) = N (K r)^(l'+1) e^(i K r) M(l' + 1 - i Lbar/K, 2 l' + 2, -2 i K r),

with Coulomb phase delta' = arg Gamma(l' + 1 - i Lbar/K), total phase shift
delta_l = pi (l - l')/2 + delta' and

    N = Gamma(l' + 1 - i Lbar/K) / Gamma(2 l' + 2) * 2^(l'+1) * exp(pi Lbar / (2K)).

Normalization convention
------------------------
``N`` above is complex with phase exactly delta', and with it U equals
2 exp(i delta') F_l'(eta, rho) where F is the regular Coulomb function and
eta = -Lbar/K.  The channel stores this complex ``N``.  By default the
wavefunction is built with |N|, which gives the real solution with
asymptotic form 2 sin(rho + (Lbar/K) ln 2rho - l' pi/2 + delta').  Pass
``phase_convention="literal"`` to multiply by the complex N instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AsymptoticDomain
from .model import ModelParams, RadialCoefficients, radial_coefficients
from .specfun import (
    DEFAULT_CONTROL,
    SeriesControl,
    coulomb_hankel_asymptotic,
    kummer_1f1,
    log_gamma_complex,
)

ASYMPTOTIC_MIN_RHO = 20.0


def reduce_phase(x: float) -> float:
    """Map an angle to (-pi, pi]."""
    y = math.fmod(x, 2.0 * math.pi)
    if y > math.pi:
        y -= 2.0 * math.pi
    elif y <= -math.pi:
        y += 2.0 * math.pi
    return y


def coulomb_phase(ell_prime: float, lambda_bar: float, k_bar: float) -> float:
    """Principal value of arg Gamma(l' + 1 - i Lbar/K)."""
    if k_bar <= 0:
        raise ValueError("k_bar must be positive")
    if ell_prime + 1.0 <= 0:
        raise ValueError("ell_prime must exceed -1")
    if lambda_bar == 0:
        return 0.0
    return reduce_phase(log_gamma_complex(complex(ell_prime + 1.0, -lambda_bar / k_bar)).imag)


def phase_shift(ell_qn: float, ell_prime: float, delta_prime: float, reduce: bool = False) -> float:
    """delta_l = pi (l - l') / 2 + delta'; raw unless ``reduce`` is set."""
    value = math.pi * (ell_qn - ell_prime) / 2 + delta_prime
    return reduce_phase(value) if reduce else value


def normalization_constant(ell_prime: float, lambda_bar: float, k_bar: float) -> complex:
    """Complex normalization constant N of the regular solution."""
    if ell_prime <= -1:
        raise ValueError("ell_prime must exceed -1")
    a = complex(ell_prime + 1.0, -lambda_bar / k_bar)
    log_n = (
        log_gamma_complex(a)
        - log_gamma_complex(2.0 * ell_prime + 2.0)
        + (ell_prime + 1.0) * math.log(2.0)
        + math.pi * lambda_bar / (2.0 * k_bar)
    )
    return cmath.exp(log_n)


@dataclass(frozen=True)
class ScatteringChannel:
    """One (energy, ell) channel of the reduced radial problem."""

    energy: float
    ell_qn: float
    coeffs: RadialCoefficients
    eta: float
    delta_prime: float
    delta_ell: float
    norm_const: complex

    @property
    def centrifugal_offset(self) -> float:
        return math.pi * (self.ell_qn - self.coeffs.ell_prime) / 2


def channel_from_coeffs(coeffs: RadialCoefficients, ell_qn: float, energy: float = math.nan) -> ScatteringChannel:
    lp, lb, kb = coeffs.ell_prime, coeffs.lambda_bar, coeffs.k_bar
    dp = coulomb_phase(lp, lb, kb)
    return ScatteringChannel(
        energy=energy,
        ell_qn=ell_qn,
        coeffs=coeffs,
        eta=coeffs.eta,
        delta_prime=dp,
        delta_ell=phase_shift(ell_qn, lp, dp),
        norm_const=normalization_constant(lp, lb, kb),
    )


def make_channel(params: ModelParams, energy: float, ell_qn: float) -> ScatteringChannel:
    return channel_from_coeffs(radial_coefficients(params, energy, ell_qn), ell_qn, energy)


@dataclass
class WaveTable:
    """Sampled radial (or angular) wavefunction."""

    r_values: np.ndarray
    u_values: np.ndarray
    source_tag: str
    channel: ScatteringChannel | None = None
    coeffs: RadialCoefficients | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.r_values = np.asarray(self.r_values, dtype=float)
        self.u_values = np.asarray(self.u_values, dtype=complex)
        if self.r_values.shape != self.u_values.shape or self.r_values.ndim != 1:
            raise ValueError("r_values and u_values must be 1-d arrays of equal length")
        if self.r_values.size and self.r_values[0] <= 0:
            raise ValueError("first r must be positive")
        if np.any(np.diff(self.r_values) <= 0):
            raise ValueError("r_values must be strictly increasing")
        if self.coeffs is None and self.channel is not None:
            self.coeffs = self.channel.coeffs


def closed_form_u(channel: ScatteringChannel, r: float, prefactor: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    c = channel.coeffs
    lp, kb = c.ell_prime, c.k_bar
    rho = kb * r
    a = complex(lp + 1.0, -c.lambda_bar / kb)
    m = kummer_1f1(a, 2.0 * lp + 2.0, complex(0.0, -2.0 * rho), ctl)
    return prefactor * math.exp((lp + 1.0) * math.log(rho)) * cmath.exp(1j * rho) * m


def scattering_wavefunction(
    channel: ScatteringChannel,
    r_values,
    phase_convention: str = "real",
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> WaveTable:
    """
    Evaluate the closed-form regular solution on ``r_values`` (all > 0).

    ``phase_convention="real"`` (default) uses |N| and returns a real-valued
    U with asymptotic amplitude 2; ``"literal"`` uses the complex N.
    """
    if phase_convention == "real":
        prefactor = complex(abs(channel.norm_const))
    elif phase_convention == "literal":
        prefactor = channel.norm_const
    else:
        raise ValueError(f"unknown phase_convention {phase_convention!r}")
    r = np.asarray(r_values, dtype=float).ravel()
    if np.any(r <= 0):
        raise ValueError("all r must be positive")
    u = np.array([closed_form_u(channel, float(ri), prefactor, ctl) for ri in r], dtype=complex)
    return WaveTable(r, u, "closed-form", channel=channel, meta={"phase_convention": phase_convention})


def asymptotic_wavefunction(channel: ScatteringChannel, r: float, corrected: bool = False) -> float:
    """
    Large-r form 2 sin(K r + (Lbar/K) ln(2 K r) + delta' - l' pi / 2).

    With ``corrected=True`` the Coulomb asymptotic series corrections in
    1/(K r) are included, which makes the result agree with the closed form
    to near machine precision once K r is a few tens.

    Raises
    ------
    AsymptoticDomain
        If K r <= 20.
    """
    c = channel.coeffs
    rho = c.k_bar * r
    if rho <= ASYMPTOTIC_MIN_RHO:
        raise AsymptoticDomain(f"K r = {rho!r} <= {ASYMPTOTIC_MIN_RHO}")
    if corrected:
        lp = c.ell_prime
        h = coulomb_hankel_asymptotic(channel.eta, lp * (lp + 1.0), rho)
        return 2.0 * (cmath.exp(1j * (channel.delta_prime - lp * math.pi / 2)) * h).imag
    theta = rho + (c.lambda_bar / c.k_bar) * math.log(2.0 * rho) + channel.delta_prime - c.ell_prime * math.pi / 2
    return 2.0 * math.sin(theta)
