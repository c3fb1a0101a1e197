"""Exception hierarchy for the engine."""


class BlockcohError(Exception):
    """Base class for all engine errors."""


class SpaceError(BlockcohError):
    """Invalid ambient space description."""


class BundleError(BlockcohError):
    """Bundle expression invalid on the given space."""


class ParseError(BlockcohError):
    """Syntax error in the bundle or space DSL, with a position."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class SymbolicValueError(BlockcohError):
    """A numeric answer was requested for a symbolic (psi) bundle."""


class UnsupportedTensorError(BlockcohError):
    """Slotwise tensor product outside the supported reduction table."""


class RecursionAmbiguityError(BlockcohError):
    """A long-exact-sequence rank could not be resolved from the base tables."""


class HypothesisViolation(BlockcohError):
    """Input violates a criterion's hypotheses (e.g. a quadric factor of dim 2)."""


class PreconditionError(BlockcohError):
    """Operation precondition not met (e.g. non-normalized input)."""
