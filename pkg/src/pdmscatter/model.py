"""
Model parameters, potential and effective radial coefficients.

Units: everything is expressed in the system where hbar and m0 carry the
values stored in :class:`ModelParams` (default hbar = m0 = 1).

The position-dependent mass is m(r) = m0 / f(r)^2 with the linear
deformation f(r) = 1 + f0 r.  The non-central potential is

    V(r, theta, phi) = V1(r) + f^2/r^2 V2(theta) + f^2/(r^2 sin^2 theta) V3(phi)

    V1 = a + b r + c r^2
    V2 = B / sin^2(theta) + A(A-1) / cos^2(theta)
    V3 = alpha^2 D(D-1) / sin^2(alpha phi) + alpha^2 C(C-1) / cos^2(alpha phi)

The deformation term of the radial equation is taken as the sum

    (2 - delta - lambda) (f''/2 + f'/r) / f
      + [(1/2 - delta)(1/2 - lambda) - 1/4] (f'/f)^2,

which with f = 1 + f0 r gives the Heun-form coefficients
Q = (2 - delta - lambda) f0 and P = [(1/2 - lambda)(1/2 - delta) - 1/4] f0^2.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import ComplexAngularMomentum, ConfigError, NotScattering, PoleError

POLE_TOL = 1e-9

CONFIG_KEYS = (
    "hbar", "m0", "a", "b", "c", "A_theta", "B_theta", "C_phi", "D_phi",
    "alpha", "f0", "lambda_ord", "delta_ord",
)
CONFIG_DEFAULTS = {"hbar": 1.0, "m0": 1.0, "lambda_ord": 0.5, "delta_ord": 0.5}


@dataclass(frozen=True)
class ModelParams:
    """
    Physical constants, potential strengths, ordering and deformation parameters.

    ``A_theta``, ``B_theta``, ``C_phi`` and ``D_phi`` are the strengths of the
    theta/phi barrier terms; ``alpha`` is the positive integer multiplying
    phi; ``lambda_ord`` and ``delta_ord`` are the kinetic-ordering parameters.

    The ring strengths may equal 1 (pure-oscillator limits); values below 1,
    negative ``a`` or ``B_theta``, or non-positive ``f0`` are rejected.
    """

    a: float
    b: float
    c: float
    A_theta: float
    B_theta: float
    C_phi: float
    D_phi: float
    alpha: int
    f0: float
    hbar: float = 1.0
    m0: float = 1.0
    lambda_ord: float = 0.5
    delta_ord: float = 0.5

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "alpha":
                continue
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"{f.name} must be a finite number, got {value!r}")
        if isinstance(self.alpha, bool) or int(self.alpha) != self.alpha or self.alpha < 1:
            raise ConfigError(f"alpha must be a positive integer, got {self.alpha!r}")
        object.__setattr__(self, "alpha", int(self.alpha))
        if self.hbar <= 0 or self.m0 <= 0:
            raise ConfigError("hbar and m0 must be positive")
        for name in ("A_theta", "C_phi", "D_phi"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.B_theta < 0:
            raise ConfigError("B_theta must be >= 0")
        if self.a < 0:
            raise ConfigError("a must be >= 0")
        if self.f0 <= 0:
            raise ConfigError("f0 must be > 0")

    @property
    def mass_factor(self) -> float:
        """2 m0 / hbar^2, the factor turning energies into inverse squared lengths."""
        return 2.0 * self.m0 / self.hbar ** 2

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RadialCoefficients:
    """Coefficients of the reduced Coulomb-like radial equation."""

    ell_prime: float
    lambda_bar: float
    k_bar: float
    p_coef: float = 0.0
    q_coef: float = 0.0

    @property
    def eta(self) -> float:
        """Sommerfeld-like ratio -lambda_bar / k_bar."""
        return -self.lambda_bar / self.k_bar


def load_params(path: str | Path) -> ModelParams:
    """
    Read a flat ``key = value`` parameter file.

    Blank lines and ``#`` comments are ignored.  Unknown or duplicate keys,
    missing mandatory keys and unparsable values raise :class:`ConfigError`.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_params(text, source=str(path))


def parse_params(text: str, source: str = "<string>") -> ModelParams:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = int(val) if key == "alpha" else float(val)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {val!r}") from None
    merged = {**CONFIG_DEFAULTS, **values}
    missing = [k for k in CONFIG_KEYS if k not in merged]
    if missing:
        raise ConfigError(f"{source}: missing keys: {', '.join(missing)}")
    return ModelParams(**merged)


def format_params(params: ModelParams) -> str:
    """Inverse of :func:`parse_params` (17 significant digits)."""
    lines = []
    for key in CONFIG_KEYS:
        value = getattr(params, key)
        lines.append(f"{key} = {value}" if key == "alpha" else f"{key} = {value:.17g}")
    return "\n".join(lines) + "\n"


def deformation_f(params: ModelParams, r: float) -> float:
    """f(r) = 1 + f0 r."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return 1.0 + params.f0 * r


def _check_pole(value: float, what: str) -> None:
    # value is the distance (in multiples of pi/2) from the nearest pole
    k = round(value / (0.5 * math.pi))
    if abs(value - k * 0.5 * math.pi) < POLE_TOL:
        raise PoleError(f"{what} = {value!r} lies on a pole of the potential")


def potential_at(params: ModelParams, r: float, theta: float, phi: float) -> float:
    """Full non-central potential V(r, theta, phi)."""
    if r <= 0:
        raise ValueError("r must be > 0")
    _check_pole(theta, "theta")
    _check_pole(params.alpha * phi, "alpha*phi")
    p = params
    v1 = p.a + p.b * r + p.c * r * r
    s2t = math.sin(theta) ** 2
    v2 = p.B_theta / s2t + p.A_theta * (p.A_theta - 1.0) / math.cos(theta) ** 2
    ap = p.alpha * phi
    v3 = p.alpha ** 2 * (
        p.D_phi * (p.D_phi - 1.0) / math.sin(ap) ** 2
        + p.C_phi * (p.C_phi - 1.0) / math.cos(ap) ** 2
    )
    f2_r2 = deformation_f(p, r) ** 2 / (r * r)
    return v1 + f2_r2 * v2 + f2_r2 / s2t * v3


def heun_coefficients(params: ModelParams) -> tuple[float, float]:
    """Return (P, Q) of the Heun-form radial equation."""
    lam, dlt, f0 = params.lambda_ord, params.delta_ord, params.f0
    p_coef = ((0.5 - lam) * (0.5 - dlt) - 0.25) * f0 * f0
    q_coef = (2.0 - dlt - lam) * f0
    return p_coef, q_coef


def effective_centrifugal(params: ModelParams, energy: float, ell: float) -> float:
    """ell'(ell'+1) of the reduced radial equation at this energy."""
    lam, dlt = params.lambda_ord, params.delta_ord
    return (
        ell * (ell + 1.0)
        - params.mass_factor * (energy - params.a) / params.f0 ** 2
        + (0.5 - dlt) * (0.5 - lam)
        - (lam + dlt)
        + 1.75
    )


def radial_coefficients(params: ModelParams, energy: float, ell: float) -> RadialCoefficients:
    """
    Effective angular momentum, Coulomb strength and wave number of the
    reduced radial equation  U'' + (K^2 + 2 Lbar / r - l'(l'+1)/r^2) U = 0.

    Raises
    ------
    NotScattering
        If c >= 0 (K^2 would not be positive).
    ComplexAngularMomentum
        If l'(l'+1) < -1/4 at this energy.
    """
    if params.c >= 0:
        raise NotScattering(
            f"c = {params.c!r}: scattering requires K^2 = -2 m0 c / (hbar f0)^2 > 0, i.e. c < 0"
        )
    x = effective_centrifugal(params, energy, ell)
    if x < -0.25:
        raise ComplexAngularMomentum(
            f"l'(l'+1) = {x!r} < -1/4 at E = {energy!r}: effective angular momentum is complex"
        )
    p_coef, q_coef = heun_coefficients(params)
    hb2 = params.hbar ** 2
    return RadialCoefficients(
        ell_prime=-0.5 + math.sqrt(0.25 + x),
        lambda_bar=-params.m0 * params.b / (hb2 * params.f0 ** 2) + 0.0,  # no signed zero
        k_bar=math.sqrt(-2.0 * params.m0 * params.c) / (params.hbar * params.f0),
        p_coef=p_coef,
        q_coef=q_coef,
    )


def params_for_channel(
    base: ModelParams, f0: float, coeffs: RadialCoefficients, ell: float
) -> tuple[ModelParams, float]:
    """
    Parameters and energy that reproduce the given reduced channel at slope ``f0``.

    ``b``, ``c`` and the energy are rescaled so that ell', lambda_bar and
    k_bar are unchanged; the angular parameters and ``a`` are kept from
    ``base``.  Used by the convergence audit of the 1 + f0 r -> f0 r step.
    """
    mf = base.mass_factor
    params = base.with_(
        f0=f0,
        b=-coeffs.lambda_bar * f0 * f0 * base.hbar ** 2 / base.m0,
        c=-(coeffs.k_bar * f0) ** 2 / mf,
    )
    lp = coeffs.ell_prime
    rest = effective_centrifugal(params, params.a, ell)
    energy = params.a + (rest - lp * (lp + 1.0)) * f0 * f0 / mf
    return params, energy
