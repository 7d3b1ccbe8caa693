"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a formula is valid."""


class IntegrabilityError(DomainError):
    """The requested integral against a power-law measure does not converge."""


class NumericalError(ArithmeticError):
    """A numerical routine failed to reach its stated tolerance."""


class QuadratureError(NumericalError):
    pass


class ConfigError(ValueError):
    """Invalid experiment configuration."""
