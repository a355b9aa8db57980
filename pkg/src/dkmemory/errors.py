"""Exception hierarchy.

Configuration problems derive from ``ValueError``; numerical failures from
``RuntimeError``.  The CLI maps them onto exit codes 1 and 2.
"""


class ConfigError(ValueError):
    """Invalid parameters, presets or configuration files."""


class DomainError(ConfigError):
    """A formula was evaluated outside its domain of validity."""


class NumericalError(RuntimeError):
    """Base class for failures during a computation."""


class SingularityError(NumericalError):
    pass


class QuadratureError(NumericalError):
    """Grid-refinement check failed for a spectral integral."""


class IntegrationError(NumericalError):
    """The adaptive ODE integrator could not meet its tolerance."""


class TruncationError(NumericalError):
    """A time window was too short for the dynamics to decay."""


class NoClickError(NumericalError):
    """Conditioning on a detection branch of (numerically) zero probability."""


class OutputError(OSError):
    """Reading or writing a file failed; the message names the path."""
