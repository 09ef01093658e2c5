"""Exception and warning types shared across the package."""


class GrwLabError(Exception):
    """Base class for all grwlab errors."""


class ZeroNormError(GrwLabError):
    """State has (numerically) zero norm and cannot be normalized.

    Typically signals a fully annihilated state, e.g. a compact-support
    hit whose window contained no amplitude.
    """


class NotNormalizedError(GrwLabError):
    """A state or weight vector violates the unit-norm contract."""


class NonFiniteInputError(GrwLabError):
    """An input array or scalar contains NaN or infinity."""


class MassMismatchError(GrwLabError):
    """Length of the per-particle mass list does not match the state."""


class DegenerateRegionError(GrwLabError):
    """A spatial interval is empty (upper edge not above lower edge)."""


class ZeroProfileError(GrwLabError):
    """A density profile has zero norm; similarity is undefined."""


class GridTooCoarseError(GrwLabError):
    """Grid resolution is insufficient for the requested measurement."""


class ConfigError(GrwLabError):
    """A run configuration failed validation (carries a field-level message)."""


class BoundaryContamination(UserWarning):
    """Probability density has reached the periodic box edges.

    Emitted as a warning by the propagator; scenarios that require strictly
    clean unitary evolution raise it as an error instead.
    """
