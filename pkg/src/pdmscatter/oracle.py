"""
Brute-force numerical oracles.

* Numerov integration of the reduced radial equation and of the full
  (1 + f0 r) Heun-form equation, with two-point asymptotic phase matching.
* Finite-difference eigensolvers for both angular equations.

Nothing here calls the Gamma or 1F1 evaluators, so the comparisons against
the closed forms are independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from .errors import DegenerateMatch, GridTooCoarse, NotScattering
from .model import ModelParams, RadialCoefficients, effective_centrifugal, heun_coefficients
from .radial import WaveTable
from .specfun import coulomb_hankel_asymptotic

OVERFLOW_LIMIT = 1e250


@dataclass(frozen=True)
class NumerovSettings:
    """
    Grid for the outward integration.  ``r_start`` and ``r_max`` default to
    1e-6/K and 400/K; the step is 2 pi / (K * steps_per_wavelength).
    """

    r_start: float | None = None
    r_max: float | None = None
    steps_per_wavelength: int = 40
    match_fraction: float = 0.9

    def __post_init__(self) -> None:
        if self.steps_per_wavelength < 16:
            raise ValueError("steps_per_wavelength must be >= 16")
        if not 0 < self.match_fraction < 1:
            raise ValueError("match_fraction must lie in (0, 1)")
        if self.r_start is not None and self.r_max is not None and not self.r_start < self.r_max:
            raise ValueError("r_start must be < r_max")

    def resolved(self, k_bar: float) -> "NumerovSettings":
        return replace(
            self,
            r_start=1e-6 / k_bar if self.r_start is None else self.r_start,
            r_max=400.0 / k_bar if self.r_max is None else self.r_max,
        )

    def step(self, k_bar: float) -> float:
        return 2.0 * math.pi / (k_bar * self.steps_per_wavelength)


@dataclass(frozen=True)
class OracleReport:
    """One oracle-versus-closed-form comparison."""

    quantity: str
    numeric_value: float
    reference_value: float
    abs_discrepancy: float
    settings_echo: str
    threshold: float | None = None
    passed: bool | None = None

    def as_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "numeric_value": self.numeric_value,
            "reference_value": self.reference_value,
            "abs_discrepancy": self.abs_discrepancy,
            "settings_echo": self.settings_echo,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def fold_pi(x: float) -> float:
    """Reduce an angle modulo pi to (-pi/2, pi/2]."""
    y = math.fmod(x, math.pi)
    if y > math.pi / 2:
        y -= math.pi
    elif y <= -math.pi / 2:
        y += math.pi
    return y


def phase_discrepancy(a: float, b: float) -> float:
    """|a - b| modulo pi."""
    return abs(fold_pi(a - b))


# ------------------------------------------------------------------ Numerov

def _numerov(fvals: np.ndarray, h: float, u0: float, u1: float) -> np.ndarray:
    """Integrate U'' = f U on a uniform grid given the first two values."""
    n = fvals.size
    u = np.empty(n)
    u[0], u[1] = u0, u1
    w = 1.0 - h * h * fvals / 12.0
    for i in range(1, n - 1):
        u[i + 1] = (2.0 * u[i] * (1.0 + 5.0 * h * h * fvals[i] / 12.0) - w[i - 1] * u[i - 1]) / w[i + 1]
        if abs(u[i + 1]) > OVERFLOW_LIMIT:
            u[: i + 2] /= abs(u[i + 1])
    if not np.all(np.isfinite(u)):
        raise OverflowError("Numerov integration overflowed")
    return u


def numerov_residual(r: np.ndarray, u: np.ndarray, fvals: np.ndarray) -> float:
    """
    Maximum residual of the fourth-order three-point discretization
    (u[i+1] - 2u[i] + u[i-1])/h^2 - (f u)[i-1] + 10 (f u)[i] + (f u)[i+1]) / 12,
    relative to max |f u|.
    """
    h = r[1] - r[0]
    u = np.real(u)
    fu = fvals * u
    res = (u[2:] - 2 * u[1:-1] + u[:-2]) / (h * h) - (fu[2:] + 10 * fu[1:-1] + fu[:-2]) / 12.0
    return float(np.max(np.abs(res)) / np.max(np.abs(fu)))


def _integrate(fun, s: float, settings: NumerovSettings, k_bar: float):
    """
    Seed with r^s at r_start, integrate with DOP853 over the first wavelength
    (or further while h^2 |f| / 12 is not small), then continue with Numerov.
    """
    st = settings.resolved(k_bar)
    h = st.step(k_bar)
    n = int(math.floor((st.r_max - st.r_start) / h)) + 1
    r = st.r_start + h * np.arange(n)
    fvals = fun(r)
    # r^(l'+1) is not smooth at 0 for non-integer l', which costs Numerov its
    # order near the origin; a high-order adaptive solver covers the first
    # wavelength (and any stiff region) instead
    big = np.nonzero(h * h * np.abs(fvals[: n // 4]) / 12.0 > 0.05)[0]
    m = max(settings.steps_per_wavelength, int(big.max()) + 2 if big.size else 1)
    m = min(m, n - 2)

    def rhs(x, y):
        return [y[1], fun(x) * y[0]]

    # unit value at r_start; the overall scale is arbitrary
    r0 = r[0]
    sol = solve_ivp(
        rhs, (r0, r[m]), [1.0, s / r0], method="DOP853", t_eval=r[: m + 1], rtol=1e-12, atol=1e-300
    )
    if not sol.success:
        raise ArithmeticError(f"seed integration failed: {sol.message}")
    seed = sol.y[0]
    u = np.empty(n)
    u[: m + 1] = seed / np.max(np.abs(seed))
    u[m - 1 :] = _numerov(fvals[m - 1 :], h, u[m - 1], u[m])
    return r, u, fvals, st, m - 1


def reduced_f(coeffs: RadialCoefficients):
    """U''/U for the reduced equation."""
    ll1 = coeffs.ell_prime * (coeffs.ell_prime + 1.0)
    k2, lb2 = coeffs.k_bar ** 2, 2.0 * coeffs.lambda_bar

    def f(r):
        return ll1 / (r * r) - lb2 / r - k2

    return f


def heun_f(params: ModelParams, energy: float, ell: float):
    """U''/U for the full equation with 1 + f0 r kept."""
    p_coef, q_coef = heun_coefficients(params)
    mf, f0, l_sq = params.mass_factor, params.f0, ell * (ell + 1.0)
    e_shift = mf * (energy - params.a) - p_coef

    def f(r):
        g = 1.0 + f0 * r
        return (
            l_sq / (r * r)
            + q_coef / (r * g)
            - (e_shift - mf * (params.b * r + params.c * r * r)) / (g * g)
        )

    return f


def numerov_radial(coeffs: RadialCoefficients, settings: NumerovSettings = NumerovSettings()) -> WaveTable:
    """Numerov solution of the reduced radial equation (arbitrary normalization)."""
    if coeffs.k_bar <= 0:
        raise NotScattering("k_bar must be positive")
    f = reduced_f(coeffs)
    r, u, fvals, st, i0 = _integrate(f, coeffs.ell_prime + 1.0, settings, coeffs.k_bar)
    return WaveTable(
        r, u, "numerov-approx", coeffs=coeffs,
        meta={
            "settings": st, "f_values": fvals, "numerov_start": i0,
            "residual": numerov_residual(r[i0:], u[i0:], fvals[i0:]),
        },
    )


def heun_asymptotics(params: ModelParams, energy: float, ell: float) -> tuple[float, float, float]:
    """
    (K, eta, L(L+1)) of the Coulomb problem that the full equation approaches
    at large r.  Expanding 1/(1 + f0 r)^2 shifts the Coulomb strength to
    Lbar - K^2/f0 and the centrifugal term to l'(l'+1) - 3K^2/f0^2 + 4 Lbar/f0.
    """
    if params.c >= 0:
        raise NotScattering("c must be negative")
    f0 = params.f0
    k_bar = math.sqrt(-2.0 * params.m0 * params.c) / (params.hbar * f0)
    lb = -params.m0 * params.b / (params.hbar ** 2 * f0 * f0)
    ll1 = effective_centrifugal(params, energy, ell)
    lb_eff = lb - k_bar ** 2 / f0
    return k_bar, -lb_eff / k_bar, ll1 - 3.0 * k_bar ** 2 / f0 ** 2 + 4.0 * lb / f0


def numerov_heun(
    params: ModelParams, energy: float, ell: float, settings: NumerovSettings = NumerovSettings()
) -> WaveTable:
    """Numerov solution of the unapproximated radial equation; seed exponent ell + 1."""
    k_bar, eta, ll1 = heun_asymptotics(params, energy, ell)
    f = heun_f(params, energy, ell)
    r, u, fvals, st, i0 = _integrate(f, ell + 1.0, settings, k_bar)
    return WaveTable(
        r, u, "numerov-heun",
        meta={
            "settings": st, "f_values": fvals, "numerov_start": i0,
            "residual": numerov_residual(r[i0:], u[i0:], fvals[i0:]),
            "k_bar": k_bar, "eta": eta, "ll1": ll1,
        },
    )


# ------------------------------------------------------------ phase matching

def _reference(rho: float, eta: float, ll1: float, l_phase: float, corrected: bool) -> tuple[float, float]:
    """(sine-like, cosine-like) asymptotic reference functions at rho."""
    if corrected:
        h = coulomb_hankel_asymptotic(eta, ll1, rho) * complex(math.cos(l_phase), -math.sin(l_phase))
        return h.imag, h.real
    theta = rho - eta * math.log(2.0 * rho) - l_phase
    return math.sin(theta), math.cos(theta)


def fit_asymptotic(
    r: np.ndarray,
    u: np.ndarray,
    i1: int,
    i2: int,
    k_bar: float,
    eta: float,
    ll1: float,
    l_phase: float,
    corrected: bool = True,
) -> tuple[float, float]:
    """
    Solve u(r_i) = amp * (cos(d) s_i + sin(d) c_i) at two grid points.

    Returns (d folded to (-pi/2, pi/2], amp).
    """
    u1, u2 = float(np.real(u[i1])), float(np.real(u[i2]))
    s1, c1 = _reference(k_bar * r[i1], eta, ll1, l_phase, corrected)
    s2, c2 = _reference(k_bar * r[i2], eta, ll1, l_phase, corrected)
    num = u2 * s1 - u1 * s2
    den = u1 * c2 - u2 * c1
    scale = abs(u1) + abs(u2)
    if scale == 0 or math.hypot(num, den) < 1e-12 * scale:
        raise DegenerateMatch("matching points give a degenerate system")
    d = fold_pi(math.atan2(num, den))
    basis1 = math.cos(d) * s1 + math.sin(d) * c1
    basis2 = math.cos(d) * s2 + math.sin(d) * c2
    amp = u1 / basis1 if abs(basis1) >= abs(basis2) else u2 / basis2
    return d, amp


def _match_indices(r: np.ndarray, k_local: float, frac: float, shift: int = 0) -> tuple[int, int]:
    h = r[1] - r[0]
    i1 = int(round((frac * r[-1] - r[0]) / h)) + shift
    i2 = i1 + max(1, int(round(0.5 * math.pi / k_local / h)))
    if i2 >= r.size or i1 < 1:
        raise DegenerateMatch("matching points fall outside the table")
    return i1, i2


def _fit_points(
    table: WaveTable, k_bar: float, eta: float, ll1: float, settings: NumerovSettings
) -> tuple[int, int, int]:
    r = table.r_values
    if k_bar * r[-1] <= 50:
        raise DegenerateMatch("table must extend beyond K r = 50")
    r1 = settings.match_fraction * r[-1]
    k_local = math.sqrt(max(k_bar ** 2 - 2 * eta * k_bar / r1 - ll1 / r1 ** 2, 1e-3 * k_bar ** 2))
    i1, i2 = _match_indices(r, k_local, settings.match_fraction)
    return i1, i2, i2 - i1


def fit_table(
    table: WaveTable,
    k_bar: float,
    eta: float,
    ll1: float,
    l_phase: float,
    settings: NumerovSettings = NumerovSettings(),
    corrected: bool = True,
    unwrap: bool = False,
) -> tuple[float, float]:
    """
    Two-point fit at match_fraction * r_max and a quarter local wavelength further.

    With ``unwrap`` the phase is not folded: the branch is fixed by the number
    of nodes of u inside the matching point (the Pruefer angle of a regular
    solution lies in (N pi, (N+1) pi) after N nodes).
    """
    r, u = table.r_values, np.real(table.u_values)
    i1, i2, q = _fit_points(table, k_bar, eta, ll1, settings)
    try:
        d, amp = fit_asymptotic(r, u, i1, i2, k_bar, eta, ll1, l_phase, corrected)
    except DegenerateMatch:
        i1, i2 = i1 - q, i2 - q
        d, amp = fit_asymptotic(r, u, i1, i2, k_bar, eta, ll1, l_phase, corrected)
    if not unwrap:
        return d, amp
    # evaluate the branch where |u| is larger, away from a node
    i = i1 if abs(u[i1]) >= abs(u[i2]) else i2
    signs = np.signbit(u[: i + 1])
    nodes = int(np.count_nonzero(signs[1:] != signs[:-1]))
    s_i, c_i = _reference(k_bar * r[i], eta, ll1, l_phase, corrected)
    theta = k_bar * r[i] - eta * math.log(2.0 * k_bar * r[i]) - l_phase
    # unwrapped reference phase: principal correction on top of the WKB phase
    theta += math.remainder(math.atan2(s_i, c_i) - theta, 2 * math.pi)
    total = theta + d
    k = round(((nodes + 0.5) * math.pi - total) / math.pi)
    return d + k * math.pi, amp * (-1) ** k


def extract_phase(
    table: WaveTable,
    coeffs: RadialCoefficients,
    settings: NumerovSettings = NumerovSettings(),
    corrected: bool = True,
) -> float:
    """
    Phase delta, modulo pi, of u ~ sin(K r + (Lbar/K) ln(2 K r) - l' pi/2 + delta).

    With ``corrected`` (default) the sine and cosine are replaced by the
    Coulomb asymptotic series so that finite-r distortion terms of order
    (l'(l'+1) + eta^2)/(2 K r) do not bias the result.
    """
    lp = coeffs.ell_prime
    d, _ = fit_table(table, coeffs.k_bar, coeffs.eta, lp * (lp + 1.0), lp * math.pi / 2, settings, corrected)
    return d


def heun_phase_audit(
    params: ModelParams,
    energy: float,
    ell: float,
    coeffs: RadialCoefficients,
    settings: NumerovSettings = NumerovSettings(),
    unwrap: bool = True,
) -> float:
    """
    Phase discrepancy between the full and the reduced equation.

    Each solution is matched to its own asymptotic Coulomb form (the full
    equation has Coulomb strength Lbar - K^2/f0); the constant phases are
    compared in the common convention sin(rho - eta ln 2rho + phase).
    """
    heun = numerov_heun(params, energy, ell, settings)
    k_h, eta_h, ll1_h = heun.meta["k_bar"], heun.meta["eta"], heun.meta["ll1"]
    d_heun, _ = fit_table(heun, k_h, eta_h, ll1_h, 0.0, settings, unwrap=unwrap)
    approx = numerov_radial(coeffs, settings)
    lp = coeffs.ell_prime
    d_approx, _ = fit_table(
        approx, coeffs.k_bar, coeffs.eta, lp * (lp + 1.0), 0.0, settings, unwrap=unwrap
    )
    return abs(d_heun - d_approx) if unwrap else phase_discrepancy(d_heun, d_approx)


# ------------------------------------------------------- angular eigensolver

def _fd_lowest(potential, length: float, n_states: int, grid_points: int) -> np.ndarray:
    h = length / (grid_points + 1)
    x = h * np.arange(1, grid_points + 1)
    diag = 2.0 / (h * h) + potential(x)
    off = np.full(grid_points - 1, -1.0 / (h * h))
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, n_states - 1))
    return np.sort(vals)


def fd_angular_eigen(
    params: ModelParams,
    sector: str,
    n_states: int = 3,
    grid_points: int = 4000,
    lambda_qn: float | None = None,
) -> list[float]:
    """
    Lowest eigenvalues of an angular equation by second-order finite differences.

    ``sector="phi"`` returns Lambda^2 for -Phi'' + V3-term Phi = Lambda^2 Phi on
    0 < phi < pi/(2 alpha).  ``sector="theta"`` returns L^2 = l(l+1) from the
    Liouville form y = sqrt(sin theta) Theta on 0 < theta < pi/2, which needs
    ``lambda_qn`` (defaults to the closed-form ground-state Lambda).
    """
    if grid_points < 500:
        raise ValueError("grid_points must be >= 500")
    mf = params.mass_factor
    if sector == "phi":
        al = params.alpha
        g_d = mf * params.D_phi * (params.D_phi - 1.0) * al * al
        g_c = mf * params.C_phi * (params.C_phi - 1.0) * al * al

        def potential(x):
            return g_d / np.sin(al * x) ** 2 + g_c / np.cos(al * x) ** 2

        length, shift = math.pi / (2 * al), 0.0
    elif sector == "theta":
        if lambda_qn is None:
            from .angular import lambda_closed_form

            lambda_qn = lambda_closed_form(params, 0)
        m_sq = lambda_qn ** 2 + mf * params.B_theta
        g_a = mf * params.A_theta * (params.A_theta - 1.0)

        def potential(x):
            return (m_sq - 0.25) / np.sin(x) ** 2 + g_a / np.cos(x) ** 2

        length, shift = math.pi / 2, -0.25
    else:
        raise ValueError(f"unknown sector {sector!r}")
    fine = _fd_lowest(potential, length, n_states, grid_points) + shift
    coarse = _fd_lowest(potential, length, n_states, grid_points // 2) + shift
    rel = np.abs(fine - coarse) / np.abs(fine)
    if np.any(rel > 1e-2):
        raise GridTooCoarse(f"grid-halving changes eigenvalues by up to {rel.max():.3g} (relative)")
    return [float(v) for v in fine]
