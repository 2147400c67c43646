"""Exception hierarchy for straingrid."""


class StrainGridError(Exception):
    """Base class for all domain errors raised by this package."""


class ConfigError(StrainGridError):
    """Invalid configuration document or parameter set."""


class SubcriticalPatch(StrainGridError):
    """A patch with beta <= r + gamma: the disease dies out locally and
    the endemic equilibrium (hence the whole reduction) is undefined."""


class ExtinctPatch(StrainGridError):
    """All strain mass vanished in some patch; frequencies are undefined."""


class StiffnessFailure(StrainGridError):
    """The adaptive integrator's step size underflowed."""


class NumericalBlowup(StrainGridError):
    """The right-hand side returned non-finite values."""
