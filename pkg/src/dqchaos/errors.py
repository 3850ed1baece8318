"""Exception hierarchy shared by all dqchaos modules."""


class DQChaosError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(DQChaosError, ValueError):
    """Invalid parameters or campaign configuration."""


class NumericalGuardError(DQChaosError, RuntimeError):
    """A numerical safety guard tripped during a run."""


class TruncationError(NumericalGuardError):
    """Probability leaked into the outer edge of the momentum basis."""

    def __init__(self, message, edge_probability=None, kick=None):
        super().__init__(message)
        self.edge_probability = edge_probability
        self.kick = kick


class SubstepResolutionError(NumericalGuardError):
    """Jump probability per substep too large for first-order substepping."""


class IntegrationError(NumericalGuardError):
    """Density-matrix integration violated trace/Hermiticity/positivity."""


class NotChaoticError(DQChaosError, ValueError):
    """Non-positive Lyapunov exponent passed where chaos is assumed."""


class ConvergenceError(NumericalGuardError):
    """Lyapunov estimate scattered too much across initial conditions."""


class DivergenceError(NumericalGuardError):
    """Classical orbit escaped the allowed momentum range."""


class FormatError(DQChaosError, ValueError):
    """Malformed file; carries the offending line or byte offset."""

    def __init__(self, message, path=None, line=None, offset=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.path = path
        self.line = line
        self.offset = offset


class IntegrityError(DQChaosError):
    """File content does not match its recorded fingerprint."""
