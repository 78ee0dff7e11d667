"""Exception hierarchy for elastica.

Every domain failure raises a subclass of :class:`ElasticaError`, so callers
(and the CLI) can distinguish domain errors from programming errors.
"""


class ElasticaError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidArgumentError(ElasticaError):
    """An argument violates a documented precondition (base mismatch,
    non-positive length, unknown option, ...)."""


class InjectivityError(ElasticaError):
    """A log/transport was requested between points at or beyond the
    injectivity radius (e.g. antipodal points on a sphere)."""


class ImmersionError(ElasticaError):
    """A discrete curve has a node speed below the immersion threshold."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class AdjacencyError(ElasticaError):
    """Adjacent samples (in theta or in time) are too far apart for
    logs/transports to be well defined."""


class UnsupportedOrderError(ElasticaError):
    """A derivative or metric order outside the supported range."""


class SolverError(ElasticaError):
    """A linear solve failed (non-SPD assembly, degenerate system)."""


class InitFailureError(ElasticaError):
    """Path initialisation failed; carries the offending node index."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
