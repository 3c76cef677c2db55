"""
Command-line front end.

    pdmscatter [--config PATH] [--jobs N] [--out PATH] SUBCOMMAND ...

Subcommands: ``angular``, ``phase-sweep``, ``wavefunction``, ``verify``.
Exit codes: 0 success, 1 verification or physics failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .angular import ell_closed_form, lambda_closed_form, solve_phi, solve_theta
from .errors import ComplexAngularMomentum, ConfigError, NotScattering, PdmScatterError
from .model import ModelParams, load_params, parse_params, radial_coefficients
from .oracle import (
    NumerovSettings,
    OracleReport,
    extract_phase,
    fd_angular_eigen,
    fit_table,
    heun_phase_audit,
    numerov_heun,
    numerov_radial,
    phase_discrepancy,
)
from .radial import make_channel, scattering_wavefunction
from .specfun import kummer_1f1

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CSV_COLUMNS = (
    "energy", "lambda_qn", "ell_qn", "ell_prime", "lambda_bar", "k_bar",
    "delta_prime", "delta_ell", "norm_modulus", "norm_phase",
)
RESIDUAL_TOL = 1e-9
HEUN_F0 = (0.5, 1.0, 2.0, 5.0, 10.0)
SOURCES = ("closed-form", "numerov-approx", "numerov-heun")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class SweepSpec:
    e_min: float
    e_max: float
    e_count: int
    n_phi: int = 0
    n_theta: int = 0

    def __post_init__(self) -> None:
        if self.e_count < 1:
            raise UsageError("e_count must be >= 1")
        if not self.e_min <= self.e_max:
            raise UsageError("e_min must be <= e_max")
        if self.n_phi < 0 or self.n_theta < 0:
            raise UsageError("quantum numbers must be >= 0")

    def energies(self) -> list[float]:
        if self.e_count == 1:
            return [float(self.e_min)]
        return [float(e) for e in np.linspace(self.e_min, self.e_max, self.e_count)]


def default_config_text() -> str:
    return resources.files("pdmscatter").joinpath("data/default.cfg").read_text(encoding="utf-8")


def read_config(path: str | None) -> ModelParams:
    if path is None:
        return parse_params(default_config_text(), source="default.cfg")
    return load_params(path)


@contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def angular_quantum_numbers(params: ModelParams, n_phi: int, n_theta: int) -> tuple[float, float]:
    lam = lambda_closed_form(params, n_phi)
    return lam, ell_closed_form(params, lam, n_theta)


# ------------------------------------------------------------------- angular

def cmd_angular(params: ModelParams, n_phi: int, n_theta: int, out: str | None) -> int:
    phi = solve_phi(params, n_phi)
    theta = solve_theta(params, phi.lambda_qn, n_theta)
    rows = [
        ("n_phi", str(n_phi)), ("n_theta", str(n_theta)),
        ("lambda_qn", fmt(phi.lambda_qn)), ("ell_qn", fmt(theta.ell_qn)), ("l_sq", fmt(theta.l_sq)),
        ("xi1_sq", fmt(phi.xi1_sq)), ("xi2_sq", fmt(phi.xi2_sq)), ("xi3_sq", fmt(phi.xi3_sq)),
        ("chi1_sq", fmt(theta.chi1_sq)), ("chi2_sq", fmt(theta.chi2_sq)), ("chi3_sq", fmt(theta.chi3_sq)),
        ("phi_residual", fmt(phi.residual)), ("theta_residual", fmt(theta.residual)),
    ]
    with _sink(out) as fh:
        for key, val in rows:
            fh.write(f"{key} = {val}\n")
    ok = abs(phi.residual) < RESIDUAL_TOL and abs(theta.residual) < RESIDUAL_TOL
    if not ok:
        print("quantization residual exceeds 1e-9", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------- phase sweep

def sweep_row(params: ModelParams, energy: float, lam: float, ell: float) -> list[float]:
    ch = make_channel(params, energy, ell)
    c = ch.coeffs
    return [
        energy, lam, ell, c.ell_prime, c.lambda_bar, c.k_bar,
        ch.delta_prime, ch.delta_ell, abs(ch.norm_const), math.atan2(ch.norm_const.imag, ch.norm_const.real),
    ]


def run_sweep(params: ModelParams, spec: SweepSpec, jobs: int = 1):
    """Rows in energy order plus (energy, reason) pairs for skipped energies."""
    if params.c >= 0:
        # fail before touching any energy
        radial_coefficients(params, params.a, 0.0)
    lam, ell = angular_quantum_numbers(params, spec.n_phi, spec.n_theta)

    def one(energy: float):
        try:
            return sweep_row(params, energy, lam, ell), None
        except ComplexAngularMomentum as exc:
            return None, str(exc)

    energies = spec.energies()
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(one, energies))
    rows = [row for row, _ in results if row is not None]
    skipped = [(e, why) for e, (_, why) in zip(energies, results) if why is not None]
    return rows, skipped


def format_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def cmd_phase_sweep(params: ModelParams, spec: SweepSpec, out: str | None, jobs: int) -> int:
    rows, skipped = run_sweep(params, spec, jobs)
    with _sink(out) as fh:
        fh.write(format_csv(rows))
    lines = "".join(f"{fmt(e)}\t{why}\n" for e, why in skipped)
    if out is not None:
        Path(out + ".skipped").write_text(lines, encoding="utf-8")
    elif lines:
        sys.stderr.write("skipped:\n" + lines)
    return EXIT_OK


# -------------------------------------------------------------- wavefunction

def wave_grid(r_min: float, r_max: float, n_points: int) -> np.ndarray:
    if not r_min > 0:
        raise UsageError("r_min must be > 0")
    if n_points < 1:
        raise UsageError("n_points must be >= 1")
    if n_points == 1:
        return np.array([float(r_min)])
    if not r_max > r_min:
        raise UsageError("r_max must exceed r_min")
    return np.linspace(r_min, r_max, n_points)


def numerov_on_grid(params: ModelParams, energy: float, ell: float, r: np.ndarray, source: str) -> np.ndarray:
    """Numerov solution scaled to u ~ 2 sin(...) at large r, splined onto ``r``."""
    coeffs = radial_coefficients(params, energy, ell)
    k = coeffs.k_bar
    settings = NumerovSettings(r_start=min(1e-6 / k, 0.5 * r[0]), r_max=max(400.0 / k, 1.05 * r[-1]))
    lp = coeffs.ell_prime
    if source == "numerov-approx":
        table = numerov_radial(coeffs, settings)
        _, amp = fit_table(table, k, coeffs.eta, lp * (lp + 1.0), lp * math.pi / 2, settings, unwrap=True)
    else:
        table = numerov_heun(params, energy, ell, settings)
        m = table.meta
        _, amp = fit_table(table, m["k_bar"], m["eta"], m["ll1"], 0.0, settings, unwrap=True)
    u = np.real(table.u_values) * (2.0 / amp)
    return CubicSpline(table.r_values, u)(r)


def cmd_wavefunction(
    params: ModelParams, energy: float, r_min: float, r_max: float, n_points: int,
    source: str, n_phi: int, n_theta: int, out: str | None,
) -> int:
    r = wave_grid(r_min, r_max, n_points)
    _, ell = angular_quantum_numbers(params, n_phi, n_theta)
    if source == "closed-form":
        u = scattering_wavefunction(make_channel(params, energy, ell), r).u_values
    else:
        u = numerov_on_grid(params, energy, ell, r, source).astype(complex)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("r", "re_u", "im_u"))
    for ri, ui in zip(r, u):
        w.writerow((fmt(ri), fmt(ui.real), fmt(ui.imag)))
    with _sink(out) as fh:
        fh.write(buf.getvalue())
    return EXIT_OK


# -------------------------------------------------------------------- verify

def _report(name, numeric, reference, tol=None, echo=""):
    disc = abs(numeric - reference)
    passed = None if tol is None else bool(disc <= tol)
    return OracleReport(name, float(numeric), float(reference), float(disc), echo, tol, passed)


def _heun_sweep(params: ModelParams, energy: float, ell: float, settings: NumerovSettings) -> list[OracleReport]:
    out, values = [], []
    for f0 in HEUN_F0:
        p = params.with_(f0=f0)
        try:
            d = heun_phase_audit(p, energy, ell, radial_coefficients(p, energy, ell), settings)
        except (PdmScatterError, ArithmeticError) as exc:
            d, echo = math.nan, f"f0={f0}: {exc}"
        else:
            echo = f"f0={f0}, E={energy}, unwrapped phases, fixed physical parameters"
        values.append(d)
        out.append(OracleReport(f"heun_discrepancy_f0={f0:g}", d, 0.0, d, echo))
    decreasing = all(math.isfinite(v) for v in values) and all(x > y for x, y in zip(values, values[1:]))
    out.append(OracleReport(
        "heun_discrepancy_strictly_decreasing", float(decreasing), 1.0, float(not decreasing),
        "report-only convergence flag",
    ))
    return out


def run_verify(params: ModelParams, energy: float | None = None) -> list[OracleReport]:
    """Run every oracle comparison for one configuration."""
    reports: list[OracleReport] = []
    grid = 4000
    for n in range(3):
        reports.append(_report(f"phi_residual_n={n}", solve_phi(params, n).residual, 0.0, RESIDUAL_TOL))
    fd_phi = fd_angular_eigen(params, "phi", 3, grid)
    for n, v in enumerate(fd_phi):
        ref = lambda_closed_form(params, n) ** 2
        reports.append(_report(f"phi_eigenvalue_n={n}", v, ref, 1e-3 * ref, f"finite differences, {grid} points"))
    lam0 = lambda_closed_form(params, 0)
    fd_theta = fd_angular_eigen(params, "theta", 3, grid, lambda_qn=lam0)
    for n, v in enumerate(fd_theta):
        th = solve_theta(params, lam0, n)
        reports.append(_report(f"theta_residual_n={n}", th.residual, 0.0, RESIDUAL_TOL))
        reports.append(_report(
            f"theta_eigenvalue_n={n}", v, th.l_sq, 1e-3 * th.l_sq, f"finite differences, {grid} points, n_phi=0",
        ))

    ell = ell_closed_form(params, lam0, 0)
    energy = params.a if energy is None else energy
    try:
        ch = make_channel(params, energy, ell)
    except PdmScatterError as exc:
        reports.append(OracleReport("scattering_channel", math.nan, math.nan, math.nan, str(exc), 0.0, False))
        return reports
    c = ch.coeffs
    settings = NumerovSettings()
    d_num = extract_phase(numerov_radial(c, settings), c, settings)
    reports.append(OracleReport(
        "numerov_phase", d_num, ch.delta_prime, phase_discrepancy(d_num, ch.delta_prime),
        f"E={energy}, n_phi=0, n_theta=0, r_max=400/K, 40 steps per wavelength, modulo pi", 1e-3,
        phase_discrepancy(d_num, ch.delta_prime) <= 1e-3,
    ))
    chain = ch.centrifugal_offset + ch.delta_prime
    reports.append(_report("phase_shift_identity", ch.delta_ell, chain, 0.0, "bit-exact"))

    reports.extend(_heun_sweep(params, energy, ell, settings))

    a_par = complex(c.ell_prime + 1.0, -c.lambda_bar / c.k_bar)
    b_par = 2.0 * c.ell_prime + 2.0
    worst = 0.0
    for z_abs in np.linspace(25.0, 35.0, 21):
        z = complex(0.0, -z_abs)
        s = kummer_1f1(a_par, b_par, z, method="series")
        a = kummer_1f1(a_par, b_par, z, method="asymptotic")
        worst = max(worst, abs(s - a) / abs(s))
    reports.append(OracleReport(
        "kummer_overlap", worst, 0.0, worst, "max relative series/asymptotic difference, |z| in [25, 35]",
        1e-6, worst <= 1e-6,
    ))

    r = np.linspace(0.5, 50.0, 400) / c.k_bar
    u = scattering_wavefunction(ch, r).u_values
    contamination = float(np.max(np.abs(u.imag)) / np.max(np.abs(u)))
    reports.append(OracleReport(
        "wavefunction_realness", contamination, 0.0, contamination, "max|Im U| / max|U| on K r in [0.5, 50]",
        1e-8, contamination <= 1e-8,
    ))
    return reports


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def cmd_verify(params: ModelParams, out: str | None, energy: float | None = None) -> int:
    reports = run_verify(params, energy)
    payload = [{k: _json_safe(v) for k, v in rep.as_dict().items()} for rep in reports]
    with _sink(out) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    failed = [rep.quantity for rep in reports if rep.passed is False]
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps values given before the subcommand
    common.add_argument("--config", default=argparse.SUPPRESS, help="parameter file (default: bundled)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker threads for sweeps")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path (default: stdout)")

    parser = argparse.ArgumentParser(prog="pdmscatter", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--config", default=None, help="parameter file (default: bundled)")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("angular", parents=[common], help="angular quantum numbers and residuals")
    p.add_argument("--n-phi", type=int, default=0)
    p.add_argument("--n-theta", type=int, default=0)

    p = sub.add_parser("phase-sweep", parents=[common], help="phase shifts over an energy grid (CSV)")
    p.add_argument("--e-min", type=float, required=True)
    p.add_argument("--e-max", type=float, default=None)
    p.add_argument("--e-count", type=int, default=1)
    p.add_argument("--n-phi", type=int, default=0)
    p.add_argument("--n-theta", type=int, default=0)

    p = sub.add_parser("wavefunction", parents=[common], help="radial wavefunction table (CSV)")
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--n-points", type=int, default=200)
    p.add_argument("--source", choices=SOURCES, default="closed-form")
    p.add_argument("--n-phi", type=int, default=0)
    p.add_argument("--n-theta", type=int, default=0)

    p = sub.add_parser("verify", parents=[common], help="run all oracle checks (JSON)")
    p.add_argument("--energy", type=float, default=None, help="channel energy (default: a)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        params = read_config(args.config)
        if args.command == "angular":
            if args.n_phi < 0 or args.n_theta < 0:
                raise UsageError("quantum numbers must be >= 0")
            return cmd_angular(params, args.n_phi, args.n_theta, args.out)
        if args.command == "phase-sweep":
            e_max = args.e_min if args.e_max is None else args.e_max
            spec = SweepSpec(args.e_min, e_max, args.e_count, args.n_phi, args.n_theta)
            return cmd_phase_sweep(params, spec, args.out, args.jobs)
        if args.command == "wavefunction":
            return cmd_wavefunction(
                params, args.energy, args.r_min, args.r_max, args.n_points,
                args.source, args.n_phi, args.n_theta, args.out,
            )
        return cmd_verify(params, args.out, args.energy)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotScattering as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (PdmScatterError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
