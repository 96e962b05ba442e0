"""Typed exceptions raised across the package."""


class MulapError(Exception):
    """Base class for all package errors."""


class NonpositiveWeight(MulapError, ValueError):
    """An edge weight is zero or negative."""


class NonpositiveMeasure(MulapError, ValueError):
    """A vertex measure is zero or negative."""


class SelfLoop(MulapError, ValueError):
    """An edge joins a vertex to itself."""


class DanglingEdge(MulapError, ValueError):
    """An edge endpoint is not a valid vertex id."""


class OneSidedEdge(MulapError, ValueError):
    """A directed arc has no reverse orientation.

    Adjacency must be symmetric even when weights are not: every listed
    arc x->y needs a matching arc y->x (weights may differ).
    """


class UnknownVertex(MulapError, KeyError):
    """A vertex id or label does not exist in the graph."""


class Disconnected(MulapError, ValueError):
    """The requested vertices lie in different components."""


class LengthMismatch(MulapError, ValueError):
    """A vertex function does not match the graph's vertex count."""


class NonpositiveFunction(MulapError, ValueError):
    """A function required to be positive dips below the floor."""


class NonpositiveInitialData(NonpositiveFunction):
    """Initial data for a heat solve is not positive."""


class HypothesisViolated(MulapError, ValueError):
    """The differential inequality assumed by a check fails pointwise."""

    def __init__(self, message, witness=None, excess=None):
        super().__init__(message)
        self.witness = witness
        self.excess = excess


class AsymmetricWeights(MulapError, ValueError):
    """An operation requiring w_xy = w_yx got an asymmetric graph."""


class StepRejected(MulapError, RuntimeError):
    """Time stepping could not maintain positivity within the retry budget."""


class IndexOutOfRange(MulapError, IndexError):
    """A time-grid index is out of range."""


class ResidualTooLarge(MulapError, ValueError):
    """A heat solution does not satisfy its equation within tolerance."""


class GridMismatch(MulapError, ValueError):
    """Segment times do not lie on the uniform grid of the path bound."""


class BadParameters(MulapError, ValueError):
    """Arguments violate a documented precondition."""


class Overflow(MulapError, ArithmeticError):
    """A power term overflowed; the inputs are outside the usable range."""


class GenerationExhausted(MulapError, RuntimeError):
    """Random generation could not satisfy a constraint within the retry cap."""


class IoError(MulapError, OSError):
    """A file could not be read, parsed, or written."""
