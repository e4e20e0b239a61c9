"""Exception hierarchy, warning classes, and process exit codes."""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4


class RotobhError(Exception):
    """Base class for all package errors.

    ``code`` is the short machine-readable tag used in sentinel grid
    cells (``error:<code>``); ``exit_status`` is what the CLI returns
    when the error escapes a subcommand.
    """

    code = "error"
    exit_status = EXIT_DOMAIN


class ConfigError(RotobhError):
    """Invalid configuration, flags, or argument combinations."""

    code = "config"
    exit_status = EXIT_CONFIG


class DomainError(RotobhError):
    """Input outside the mathematical domain of an operation."""

    code = "domain"
    exit_status = EXIT_DOMAIN


class DegenerateGapError(DomainError):
    """mu/U sits on a lobe corner, so a perturbative gap vanishes."""

    code = "degenerate-gap"


class OutOfReachError(DomainError):
    """No rotation angle can reach the phase boundary at this hopping."""

    code = "out-of-reach"


class OutOfRangeError(DomainError):
    """Measured order-parameter change exceeds the attainable maximum."""

    code = "out-of-range"


class InvalidExpansionError(DomainError):
    """Quartic Landau coefficient is not positive; expansion unusable."""

    code = "invalid-expansion"


class ConvergenceError(RotobhError):
    """An iterative solver failed to meet its tolerance."""

    code = "no-convergence"
    exit_status = EXIT_CONVERGENCE


class TruncationWarning(UserWarning):
    """Ground state carries weight on the highest kept Fock level."""


class FitQualityWarning(UserWarning):
    """Least-squares residual RMS exceeds the documented threshold."""
