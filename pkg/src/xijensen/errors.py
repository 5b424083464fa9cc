"""Exception types shared across the package."""


class InputError(ValueError):
    """Arguments violate an operation's preconditions."""


class DomainError(InputError):
    """A numeric argument lies outside the function's domain."""


class PrecisionExhausted(ArithmeticError):
    """A certified computation could not reach its target within the limits.

    ``achieved`` carries the best relative error bound obtained, when known.
    """

    def __init__(self, message: str, achieved=None):
        super().__init__(message)
        self.achieved = achieved
