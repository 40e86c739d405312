"""Exception types shared across the package.

Exit-code mapping used by the CLI: ConfigurationError and
InfeasibilityError map to exit 2, DivergenceError to exit 3.
"""


class ConfigurationError(ValueError):
    """A config, parameter block, or override path is invalid."""


class InfeasibilityError(ConfigurationError):
    """Parameters violate a feasibility inequality (e.g. gain floor below
    the disturbance bound), so the requested guarantee cannot hold."""


class DivergenceError(RuntimeError):
    """Simulation produced a non-finite state."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


class AuditError(ValueError):
    """Trajectory and bound report were produced from different parameters."""
