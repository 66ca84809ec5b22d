"""Exception types shared across the package."""


class PoolRiskError(ValueError):
    """Base class for input and numerical errors raised by poolrisk."""


class InvariantError(PoolRiskError):
    """A domain object violates one of its structural invariants."""


class SupportCapError(PoolRiskError):
    """A convolution would exceed the configured support cap."""


class AlignmentError(PoolRiskError):
    """Two lattice laws do not live on a common grid."""


class DomainError(PoolRiskError):
    """An argument lies outside the (interior of the) utility domain."""


class ImageError(PoolRiskError):
    """A value lies outside the image of a utility function."""
