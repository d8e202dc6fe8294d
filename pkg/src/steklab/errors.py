"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: UsageError -> 2, NumericalError -> 3,
PreconditionError (and subclasses) -> 4.
"""


class SteklabError(Exception):
    """Base class for all package errors."""


class UsageError(SteklabError):
    """Invalid arguments or inconsistent request."""


class MeshError(SteklabError):
    """Mesh fails a structural invariant (indices, facet counts, degeneracy)."""


class NumericalError(SteklabError):
    """A solver failed to converge or produced an unusable factorization."""


class PreconditionError(SteklabError):
    """A documented precondition or hypothesis does not hold for the inputs."""


class HypothesisViolation(PreconditionError):
    """The ball-measure hypothesis of the packing construction fails."""


class ResolutionError(PreconditionError):
    """The mesh is too coarse to resolve a requested length scale."""


class NonTransverseSample(PreconditionError):
    """A sampled plane grazes the mesh; the sample must be redrawn."""


class TruncationError(PreconditionError):
    """A truncated spectrum cannot be certified complete from the given data."""
