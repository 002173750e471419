"""Exception types shared across the package."""


class NumericFailure(RuntimeError):
    """A numerical routine produced an unusable result (singular inverse,
    trace drift, failed validation of an evolved state, ...)."""


class DegenerateSpectrumError(RuntimeError):
    """Spectral evolution is refused for (near-)degenerate Liouvillians."""


class UnsupportedRegimeError(ValueError):
    """Closed-form expressions were requested outside their validity regime."""


class UnitaryConstructionError(RuntimeError):
    """The slowest-mode elimination unitary could not be constructed."""
