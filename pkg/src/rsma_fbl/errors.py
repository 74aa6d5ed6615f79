"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class InfeasibleError(RuntimeError):
    """No power allocation meets the throughput targets inside the blocklength box."""


class ScenarioError(ValueError):
    """A scenario file is malformed; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
