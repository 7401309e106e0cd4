"""Exception types shared across the toolkit.

Every failure mode surfaced by the public API maps onto one of these, so
callers (including the CLI) can translate them to exit codes without
string-matching messages.
"""


class QslLabError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(QslLabError):
    """Matrix arguments with incompatible or unsupported dimensions."""


class PositivityError(QslLabError):
    """A density matrix violated positive semidefiniteness beyond slack."""


class InvariantViolationError(QslLabError):
    """A produced value broke a documented invariant (e.g. |q| > 1)."""


class ParameterError(QslLabError):
    """Unphysical or out-of-range model parameter."""


class DomainError(QslLabError):
    """Argument outside the function's domain (e.g. negative frequency)."""


class AccuracyError(QslLabError):
    """Quadrature failed to reach the requested tolerance.

    Carries the achieved error estimate in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DegenerateInputError(QslLabError):
    """Input makes the requested quantity vacuous (e.g. zero coherence)."""


class CapacityError(QslLabError):
    """Requested hierarchy exceeds the configured memory budget."""


class ConvergenceError(QslLabError):
    """Refinement loop exhausted its budget before reaching tolerance.

    ``last_delta`` holds the most recent refinement delta, ``achieved``
    the last (L, K) pair that was actually integrated.
    """

    def __init__(self, message, last_delta=None, achieved=None):
        super().__init__(message)
        self.last_delta = last_delta
        self.achieved = achieved


class OracleInapplicableError(QslLabError):
    """Analytic reference requested for a configuration it does not cover."""


class ConfigError(QslLabError):
    """Scenario configuration is malformed; carries line/key context."""

    def __init__(self, message, line=None, key=None):
        super().__init__(message)
        self.line = line
        self.key = key
