"""
Special-function kernel
=======================

Dependency-free evaluators for the three special functions the solver needs:

* ``log_gamma_complex`` -- log Gamma(z) for complex z (Lanczos, g=7, n=9,
  reflection for Re z < 0.5).  Same branch convention as
  ``scipy.special.loggamma``: continuous everywhere except across the
  negative real axis.
* ``kummer_1f1`` -- Kummer's function M(a, b, z) = 1F1(a; b; z) with complex
  ``a`` and ``z`` and real ``b``.
* ``jacobi_p`` -- Jacobi polynomials P_n^(alpha, beta)(x) by ascending
  recurrence.

Complex values are plain Python ``complex`` numbers.

1F1 evaluation strategy
-----------------------
|z| <= switch radius
    Maclaurin series.  When the summation is ill-conditioned (the sum of
    term magnitudes exceeds the result by more than ``rel_tol / eps``, which
    happens quickly along the imaginary axis) the series is evaluated at
    |z| = 2 on the same ray and continued outward by local Taylor expansions
    of Kummer's ODE.  This keeps double-precision accuracy for |z| up to a
    few hundred.
|z| > switch radius
    The two-exponential asymptotic form, each exponential multiplied by its
    Poincare series (optimally truncated).  The leading terms of the two
    series are exactly the classical two-term large-|z| formula.  If the
    truncated series cannot meet ``rel_tol`` the convergent path is used.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateB, NonConvergence, PoleError

ComplexVal = complex
Number = Union[int, float, complex]

_EPS = 2.220446049250313e-16
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# continuation start radius, and cap on a single Taylor step
_CONT_START = 2.0
_CONT_MAX_STEP = 2.0


@dataclass(frozen=True)
class SeriesControl:
    """Convergence knobs for :func:`kummer_1f1`."""

    rel_tol: float = 1e-14
    max_terms: int = 10000
    asymptotic_switch_radius: float = 30.0

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.asymptotic_switch_radius > 0:
            raise ValueError("asymptotic_switch_radius must be positive")


DEFAULT_CONTROL = SeriesControl()


def _finite(z: complex, what: str) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise OverflowError(f"{what} is not finite: {z!r}")
    return z


def _near_nonpositive_integer(x: complex, tol: float = 1e-12) -> bool:
    if x.real > tol or abs(x.imag) > tol:
        return False
    return abs(x.real - round(x.real)) <= tol


def _log_sinpi(z: complex) -> complex:
    """log(sin(pi z)) with the real part of z reduced mod 2 first."""
    x = math.fmod(z.real, 2.0)
    w = complex(x, z.imag)
    return cmath.log(cmath.sin(math.pi * w))


def log_gamma_complex(z: Number) -> complex:
    """
    Logarithm of the Gamma function for complex argument.

    Parameters
    ----------
    z : complex
        Argument; must not be a nonpositive integer.

    Returns
    -------
    complex
        log Gamma(z).  The imaginary part is the continuous branch that
        vanishes on the positive real axis, so ``exp`` of the result is
        Gamma(z) and the imaginary part is a (not necessarily reduced)
        argument of Gamma(z).

    Raises
    ------
    PoleError
        If z is within 1e-12 of 0, -1, -2, ...
    """
    z = _finite(complex(z), "log_gamma_complex argument")
    if _near_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at z = {z!r}")
    if z.real < 0.5:
        # reflection; the 2*pi*i shift keeps the branch continuous off the real axis
        shift = math.copysign(2.0 * math.pi, z.imag) * math.floor(0.5 * z.real + 0.25)
        return complex(_LOG_PI, shift) - _log_sinpi(z) - log_gamma_complex(1.0 - z)
    zm1 = z - 1.0
    acc = complex(_LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (zm1 + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma_complex(z: Number) -> complex:
    """Gamma(z) as exp(log_gamma_complex(z))."""
    return _finite(cmath.exp(log_gamma_complex(z)), "Gamma")


def _maclaurin(a: complex, b: float, z: complex, ctl: SeriesControl) -> tuple[complex, float]:
    """Sum the Kummer series; also return the sum of |terms| (conditioning)."""
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    abs_total = 1.0
    small = 0
    for n in range(ctl.max_terms):
        term *= (a + n) * z / ((b + n) * (n + 1))
        total += term
        mag = abs(term)
        abs_total += mag
        if mag == 0.0:
            return total, abs_total
        if mag < ctl.rel_tol * abs(total):
            small += 1
            if small >= 3:
                return total, abs_total
        else:
            small = 0
    raise NonConvergence(f"1F1 series did not converge in {ctl.max_terms} terms (z={z!r})")


def _taylor_step(
    a: complex, b: float, zc: complex, w: complex, dw: complex, t: complex, ctl: SeriesControl
) -> tuple[complex, complex]:
    """Advance (w, w') of Kummer's ODE from zc to zc + t by a local Taylor series."""
    # d_n = c_n t^n with c_n the Taylor coefficients of w about zc
    d_prev = w
    d_cur = dw * t
    val = d_prev + d_cur
    dval = d_cur  # sum of n*d_n, equals t*w'(zc+t)
    for n in range(ctl.max_terms):
        d_next = ((zc - b - n) * (n + 1) * d_cur * t + (n + a) * d_prev * t * t) / (
            zc * (n + 1) * (n + 2)
        )
        val += d_next
        dval += (n + 2) * d_next
        scale = abs(val) + abs(dval)
        if abs(d_next) <= 1e-18 * scale and abs(d_cur) <= 1e-18 * scale:
            return val, dval / t
        d_prev, d_cur = d_cur, d_next
    raise NonConvergence("Taylor continuation of 1F1 did not converge")


def _continued(a: complex, b: float, z: complex, ctl: SeriesControl) -> complex:
    r_end = abs(z)
    u = z / r_end
    r = _CONT_START
    zc = r * u
    w, _ = _maclaurin(a, b, zc, ctl)
    dw, _ = _maclaurin(a + 1.0, b + 1.0, zc, ctl)
    dw *= a / b
    # node radii depend only on |z|, so nearby points share all but the last step
    while r < r_end:
        r_next = min(r + min(0.5 * r, _CONT_MAX_STEP), r_end)
        w, dw = _taylor_step(a, b, zc, w, dw, (r_next - r) * u, ctl)
        r = r_next
        zc = r * u
    return w


def _convergent(a: complex, b: float, z: complex, ctl: SeriesControl) -> complex:
    if z == 0:
        return 1.0 + 0.0j
    if abs(z) <= _CONT_START:
        return _maclaurin(a, b, z, ctl)[0]
    try:
        total, abs_total = _maclaurin(a, b, z, ctl)
    except (NonConvergence, OverflowError):
        return _continued(a, b, z, ctl)
    if abs_total * _EPS <= ctl.rel_tol * abs(total):
        return total
    return _continued(a, b, z, ctl)


def _pole_free_lgamma(x: complex) -> complex | None:
    """log Gamma(x), or None where 1/Gamma(x) vanishes."""
    if _near_nonpositive_integer(x):
        return None
    return log_gamma_complex(x)


def _poincare(p: complex, q: complex, w: complex, ctl: SeriesControl) -> tuple[complex, float, bool]:
    """
    Sum (p)_s (q)_s / (s! w^s) truncated at its smallest term.

    Returns the partial sum, the magnitude of the last retained term (error
    estimate) and whether ``rel_tol`` was reached.
    """
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    best_total, best_mag = total, 1.0
    # past this index the terms only grow
    s_tail = abs(w) + abs(p) + abs(q) + 10.0
    for s in range(ctl.max_terms):
        term = term * (p + s) * (q + s) / ((s + 1) * w)
        mag = abs(term)
        if mag == 0.0:
            return total, 0.0, True
        total += term
        if mag < ctl.rel_tol * abs(total):
            return total, mag, True
        if mag < best_mag:
            best_total, best_mag = total, mag
        elif s > s_tail:
            break
    return best_total, best_mag, False


def _asymptotic(a: complex, b: float, z: complex, ctl: SeriesControl) -> tuple[complex, bool]:
    ph = cmath.phase(z)
    # "+" on ]-pi/2, 3pi/2[, "-" on ]-3pi/2, pi/2[; overlap split at ph = 0
    sign = 1.0 if ph >= 0.0 else -1.0
    log_z = cmath.log(z)
    lg_b = log_gamma_complex(b)
    total = 0.0j
    err = 0.0
    scale = 0.0
    ok = True
    lg_a = _pole_free_lgamma(a)
    if lg_a is not None:
        s1, e1, ok1 = _poincare(1.0 - a, b - a, z, ctl)
        t1 = cmath.exp(lg_b - lg_a + z + (a - b) * log_z)
        total += t1 * s1
        err += abs(t1) * e1
        scale += abs(t1 * s1)
        ok = ok and ok1
    lg_ba = _pole_free_lgamma(b - a)
    if lg_ba is not None:
        s2, e2, ok2 = _poincare(a, a - b + 1.0, -z, ctl)
        t2 = cmath.exp(lg_b - lg_ba + sign * 1j * math.pi * a - a * log_z)
        total += t2 * s2
        err += abs(t2) * e2
        scale += abs(t2 * s2)
        ok = ok and ok2
    # near zeros of M the two terms cancel; judge against their size
    ok = ok and err <= ctl.rel_tol * max(abs(total), scale)
    return total, ok


def kummer_1f1(
    a: Number,
    b: float,
    z: Number,
    ctl: SeriesControl = DEFAULT_CONTROL,
    method: str = "auto",
) -> complex:
    """
    Confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).

    Parameters
    ----------
    a : complex
    b : float
        Must not be a nonpositive integer.
    z : complex
    ctl : SeriesControl
    method : {"auto", "series", "asymptotic"}
        ``"series"`` forces the convergent path (Maclaurin series with Taylor
        continuation), ``"asymptotic"`` forces the large-|z| expansion.

    Raises
    ------
    DegenerateB, NonConvergence, OverflowError
    """
    a = _finite(complex(a), "a")
    z = _finite(complex(z), "z")
    b = float(b)
    if not math.isfinite(b):
        raise ValueError("b must be finite")
    if b <= 1e-12 and abs(b - round(b)) <= 1e-12:
        raise DegenerateB(f"b = {b} is a nonpositive integer")
    if method == "series":
        return _finite(_convergent(a, b, z, ctl), "1F1")
    if method == "asymptotic":
        if z == 0:
            raise ValueError("asymptotic form is undefined at z = 0")
        return _finite(_asymptotic(a, b, z, ctl)[0], "1F1")
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if abs(z) <= ctl.asymptotic_switch_radius:
        return _finite(_convergent(a, b, z, ctl), "1F1")
    value, ok = _asymptotic(a, b, z, ctl)
    if ok:
        return _finite(value, "1F1")
    return _finite(_convergent(a, b, z, ctl), "1F1")


def jacobi_p(n: int, alpha: float, beta: float, x):
    """
    Jacobi polynomial P_n^(alpha, beta)(x) by ascending three-term recurrence.

    ``x`` may be a scalar or an array; the result has the same shape.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if not (alpha > -1 and beta > -1):
        raise ValueError("Jacobi parameters must exceed -1")
    xs = np.asarray(x, dtype=float)
    p_prev = np.ones_like(xs)
    if n == 0:
        return p_prev if xs.ndim else float(p_prev)
    p_cur = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (xs - 1.0)
    ab = alpha + beta
    for k in range(2, n + 1):
        c = 2.0 * k + ab
        a1 = 2.0 * k * (k + ab) * (c - 2.0)
        a2 = (c - 1.0) * (alpha * alpha - beta * beta)
        a3 = (c - 2.0) * (c - 1.0) * c
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c
        p_prev, p_cur = p_cur, ((a2 + a3 * xs) * p_cur - a4 * p_prev) / a1
    return p_cur if xs.ndim else float(p_cur)


def coulomb_hankel_asymptotic(eta: float, ll1: float, rho: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """
    Large-rho expansion of the outgoing Coulomb wave without its constant phase.

    Returns exp(i(rho - eta ln 2rho)) * sum_k (a)_k (b)_k / (k! (2 i rho)^k)
    with a + b = 1 + 2 i eta and a b = i eta - eta^2 - ll1, where ``ll1`` is
    L(L+1).  Multiplying by exp(i(sigma_L - L pi/2)) gives G_L + i F_L.
    Only L(L+1) enters, so complex L is allowed implicitly.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    root = cmath.sqrt(1.0 + 4.0 * ll1)
    p = 0.5 * (1.0 + 2j * eta + root)
    q = 0.5 * (1.0 + 2j * eta - root)
    series, _, _ = _poincare(p, q, 2j * rho, ctl)
    return cmath.exp(1j * (rho - eta * math.log(2.0 * rho))) * series
