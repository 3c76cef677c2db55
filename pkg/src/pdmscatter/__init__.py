"""
Exact scattering solutions for a position-dependent-mass particle in a
double ring-shaped polynomial potential, with brute-force oracles.
"""

from .angular import (
    PhiSolution,
    ThetaSolution,
    ell_closed_form,
    lambda_closed_form,
    phi_wavefunction,
    solve_phi,
    solve_theta,
    theta_wavefunction,
)
from .errors import (
    AsymptoticDomain,
    ComplexAngularMomentum,
    ConfigError,
    DegenerateB,
    DegenerateMatch,
    GridTooCoarse,
    NegativeDiscriminant,
    NonConvergence,
    NotScattering,
    PdmScatterError,
    PoleError,
)
from .model import (
    ModelParams,
    RadialCoefficients,
    heun_coefficients,
    load_params,
    parse_params,
    potential_at,
    radial_coefficients,
)
from .radial import (
    ScatteringChannel,
    WaveTable,
    asymptotic_wavefunction,
    coulomb_phase,
    make_channel,
    normalization_constant,
    phase_shift,
    scattering_wavefunction,
)
from .specfun import SeriesControl, gamma_complex, jacobi_p, kummer_1f1, log_gamma_complex

__version__ = "0.1.0"
