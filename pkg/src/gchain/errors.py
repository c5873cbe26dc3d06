"""Exception hierarchy shared by all gchain modules."""


class GChainError(Exception):
    """Base class for gchain errors."""


class InvalidArgumentError(GChainError, ValueError):
    pass


class NumericFailureError(GChainError, ArithmeticError):
    pass


class ResourceLimitError(GChainError):
    pass


class SectionInvalidError(InvalidArgumentError):
    """A finite section Σ_n of a chain failed the uncertainty inequality."""

    def __init__(self, n, message=None):
        self.n = n
        super().__init__(message or f"finite section n={n} is not a G-matrix")


class SpecParseError(InvalidArgumentError):
    """Chain-spec document could not be parsed; message carries the location."""
