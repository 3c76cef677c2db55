"""Exception hierarchy shared by every module of the package."""


class PdmScatterError(Exception):
    """Base class for all errors raised by pdmscatter."""


class PoleError(PdmScatterError, ValueError):
    """Argument sits on (or within tolerance of) a pole."""


class NonConvergence(PdmScatterError, ArithmeticError):
    """A series or iteration exhausted its term budget."""


class DegenerateB(PdmScatterError, ValueError):
    """Second Kummer parameter is a nonpositive integer."""


class NegativeDiscriminant(PdmScatterError, ValueError):
    """A square-root argument in a quantization condition is negative."""


class NotScattering(PdmScatterError, ValueError):
    """Parameters do not describe a scattering channel (K-bar squared <= 0)."""


class ComplexAngularMomentum(PdmScatterError, ValueError):
    """Effective angular momentum would be complex for this energy."""


class AsymptoticDomain(PdmScatterError, ValueError):
    """Asymptotic formula requested too close to the origin."""


class DegenerateMatch(PdmScatterError, ArithmeticError):
    """Two-point asymptotic matching is ill-conditioned."""


class GridTooCoarse(PdmScatterError, ArithmeticError):
    """Finite-difference eigenvalues fail the grid-halving consistency check."""


class ConfigError(PdmScatterError, ValueError):
    """Malformed parameter file or invalid parameter values."""
