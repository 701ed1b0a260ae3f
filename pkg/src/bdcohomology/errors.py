"""Exception types shared across the package."""


class BDError(Exception):
    """Base class for all package-specific errors."""


class FieldError(BDError):
    """Arithmetic or construction error in the field tower."""


class AdjoinError(FieldError):
    """Attempt to adjoin a square root that already exists constructively."""


class ParseError(FieldError):
    """Malformed field-element text."""


class NotConstructivelyRepresentable(FieldError):
    """A required square root or norm solution lies outside the constructive
    closure this tower model can reach (e.g. a norm equation whose residual
    polynomial factor has degree >= 3 with no rational root)."""


class LieAlgebraError(BDError):
    """Inconsistent Lie algebra data (membership, bracket closure, pairing)."""


class TripleError(BDError):
    """Invalid Belavin-Drinfeld triple data."""


class CohomologyError(BDError):
    """Classification failure: a reduction step could not produce a witness."""

class NotInGroup(CohomologyError):
    """Matrix fails the defining-form membership test for the group."""


class BlockHypothesisViolated(CohomologyError):
    """X^-1 sigma(X) has support outside the declared column blocks."""


class NotACocycle(CohomologyError):
    """Matrix fails the Galois-twist centralizer condition."""


class NotTwistedCocycle(CohomologyError):
    """Matrix fails the sigma0-twisted centralizer condition."""


class FormsInequivalent(CohomologyError):
    """A diagonal form could not be carried to the standard one over the
    base field."""


class SingularD(CohomologyError):
    """Diagonal datum contains a zero entry."""


class BudgetExceeded(BDError):
    """Requested rank is above the configured work budget."""
