"""Exception types shared across the package."""


class WeylcovError(ValueError):
    """Base class for every error raised deliberately by weylcov."""


class DimensionError(WeylcovError):
    """Shapes or tensor-factor dimensions do not fit together."""


class ContractError(WeylcovError):
    """An input violates a documented numerical contract (Hermiticity, norm, ...)."""


class PreconditionError(WeylcovError):
    """A mathematical hypothesis of a check is not satisfied by the input."""
