"""Exception hierarchy shared across the package."""


class TaskGrowthError(Exception):
    """Base class for all model errors."""


class ConfigError(TaskGrowthError):
    """Malformed or inconsistent configuration input."""


class ModelDomainError(TaskGrowthError):
    """Inputs outside the model's mathematical domain (e.g. sigma = 1)."""


class ProfileViolationError(ModelDomainError):
    """Productivity profile pair violates the ratio-monotonicity assumption."""


class NonFiniteStateError(TaskGrowthError):
    """A simulation state component became NaN or infinite."""

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index
