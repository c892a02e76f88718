class DomainError(ValueError):
    """Argument outside the domain where a function is defined."""


class NumericError(ArithmeticError):
    """A series, recurrence or quadrature failed to reach its tolerance."""
