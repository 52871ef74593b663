"""Exception types shared across the package."""


class QuatspinError(ValueError):
    """Base class for all errors raised by quatspin."""


class DomainError(QuatspinError):
    """An argument lies outside the domain of the operation (e.g. zero)."""


class ArgumentError(QuatspinError):
    """An argument is well-formed but not acceptable (wrong prime, not a unit...)."""


class UnrepresentableError(QuatspinError):
    """No element with the requested property exists."""


class SearchAborted(QuatspinError):
    """A witness search hit its resource limit before finishing."""

    def __init__(self, message: str, scanned: int) -> None:
        super().__init__(message)
        self.scanned = scanned
