"""Exception types shared across the package."""


class ZeroCyclesError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(ZeroCyclesError, ValueError):
    """Input violates a documented precondition."""


class NoTopElementError(InvalidInputError):
    """The poset has no greatest element, so [0, 1] does not exist."""


class ResourceLimitError(ZeroCyclesError):
    """A configured size guard was tripped.

    ``guard`` names the limit that was exceeded so callers (and the CLI)
    can report it.
    """

    def __init__(self, guard, value, limit):
        self.guard = guard
        self.value = value
        self.limit = limit
        super().__init__(f"{guard}: {value} exceeds limit {limit}")
