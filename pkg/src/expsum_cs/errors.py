class InvalidParameterError(ValueError):
    """A numeric argument is outside the domain where the quantity is defined."""


class InvalidModulusError(InvalidParameterError):
    """The cyclic group order is below 2."""
