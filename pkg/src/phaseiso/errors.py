"""Exception types raised by the toolkit."""


class ToolkitError(Exception):
    """Base class for all phaseiso errors."""


class DimensionMismatch(ToolkitError):
    """Vector length does not match the owning space."""


class UnsupportedNorm(ToolkitError):
    """Operation requires the euclidean norm (or a real-field p-norm)."""


class AlreadyReal(ToolkitError):
    """realify called on a real-field vector."""


class InvalidMapSpec(ToolkitError):
    """Map construction violated an invariant (non-orthogonal generator, duplicate table points, ...)."""


class OutOfDomain(ToolkitError):
    """Point is not in the map's domain (absent from table, off the admissible line)."""


class MissingZeroImage(ToolkitError):
    """A condition needs f(0) but the sample table has no zero point."""


class NeedsEvaluableMap(ToolkitError):
    """Condition evaluates f at derived points and cannot run on a bare table."""


class RealFieldUnsupported(ToolkitError):
    """Root-of-unity condition with n > 2 requested on a real space."""


class MagnitudeMismatch(ToolkitError):
    """A sign-graph edge has inconsistent inner-product magnitudes (absolute-inner-product condition violated)."""


class InconsistentCycle(ToolkitError):
    """Sign propagation met an edge that contradicts already-assigned signs."""

    def __init__(self, i: int, j: int, message: str | None = None):
        self.pair = (i, j)
        super().__init__(message or f"edge ({i}, {j}) contradicts propagated signs")


class TooManyNodes(ToolkitError):
    """Brute-force sign enumeration refused: node count above the cap."""


class RankDeficient(ToolkitError):
    """Samples do not span the domain; the linear generator is underdetermined."""


class NotPhaseEquivalent(ToolkitError):
    """Input data is not phase-equivalent to a linear isometry within tolerance."""


class SchemaError(ToolkitError):
    """A JSON document does not match the published schema."""
