"""Exception types shared across the package."""


class DomainError(ValueError):
    """Evaluation time (or grid point) outside the valid domain."""


class ExcludedRegionError(ValueError):
    """Background with (1+sigma)*H < 0 and sigma < 0: the curved mass diverges
    to -infinity at the horizon and no solver or checker accepts it."""


class PreconditionError(ValueError):
    """A stated hypothesis of an operation does not hold for the inputs."""


class ConfigurationError(ValueError):
    """Inconsistent or unsupported run configuration."""


class PoleError(ValueError):
    """Requested evaluation at or past a finite-time pole."""

    def __init__(self, message: str, pole_time: float):
        super().__init__(message)
        self.pole_time = pole_time
