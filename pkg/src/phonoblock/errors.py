"""Exception hierarchy shared across the package.

``PhonoblockError`` is the common base. ``ConfigError`` signals bad user
input (CLI exit code 1); the numerical errors signal solver or state-validity
failures (CLI exit code 2).
"""


class PhonoblockError(Exception):
    """Base class for all package errors."""


class ConfigError(PhonoblockError):
    """Invalid configuration, parameters, or command-line input."""


class ParameterError(ConfigError):
    """A physical parameter violates its declared constraints."""


class SpaceMismatchError(PhonoblockError):
    """Operands live on different Hilbert spaces."""


class NumericalError(PhonoblockError):
    """Base class for numerical failures (residuals, positivity, NaNs)."""


class SteadyStateError(NumericalError):
    """Steady-state solve failed or its residual exceeds tolerance."""


class EvolutionError(NumericalError):
    """Time propagation failed (NaN, trace drift, or step underflow)."""


class StateValidityError(NumericalError):
    """A density matrix violates trace, Hermiticity, or positivity bounds."""


class UnpopulatedModeError(NumericalError):
    """Correlation function requested for a mode with vanishing occupation."""


class SingularSystemError(NumericalError):
    """A linear system arising from a parameter degeneracy is singular."""


class SweepError(PhonoblockError):
    """A parameter sweep could not produce any valid rows."""
