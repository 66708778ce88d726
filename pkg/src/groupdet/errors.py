"""Exception hierarchy.

Every domain error carries a stable ``code`` (the class name) and the name of
the module that raised it, so the CLI can report ``module:Code`` uniformly.
"""


class GroupDetError(Exception):
    """Base class for all domain errors raised by the package."""

    module = "groupdet"

    @property
    def code(self) -> str:
        return type(self).__name__


# -- group-core ---------------------------------------------------------------

class GroupError(GroupDetError):
    module = "group-core"


class BadFormat(GroupError):
    pass


class NonLatinSquare(GroupError):
    pass


class NonAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NotAbelian(GroupError):
    pass


class DegenerateEigenspaces(GroupError):
    pass


class ToleranceViolation(GroupError):
    pass


# -- detfact ------------------------------------------------------------------

class DetFactError(GroupDetError):
    module = "detfact"


class OrderTooLarge(DetFactError):
    pass


class FactorizationMismatch(DetFactError):
    pass


class ProjectorRankMismatch(DetFactError):
    pass


class BlockLeakage(DetFactError):
    pass


# -- pde-kernel ---------------------------------------------------------------

class PdeError(GroupDetError):
    module = "pde-kernel"


class NotOnVariety(PdeError):
    pass


class StencilOverflow(PdeError):
    pass


class ChartSingular(PdeError):
    pass


class SizeTooLarge(PdeError):
    pass


class DomainViolation(PdeError):
    pass


class QuadratureNonConvergence(PdeError):
    pass


class SeriesDomain(PdeError):
    pass


class GammaPole(GroupDetError):
    module = "pde-kernel"


# -- efun ---------------------------------------------------------------------

class EfunError(GroupDetError):
    module = "efun"


class RangeError(EfunError):
    pass


class ResonantExponents(EfunError):
    pass


class TruncationTooSmall(EfunError):
    pass


class IncompatibleBoundaryData(EfunError):
    pass


class VerificationError(EfunError):
    """Two independent computations of the same exact quantity disagree."""


# -- frobgroup ----------------------------------------------------------------

class FrobGroupError(GroupDetError):
    module = "frobgroup"


class SingularFrobenius(FrobGroupError):
    pass


class MissingCharacterTable(FrobGroupError):
    pass


# -- afrob --------------------------------------------------------------------

class AfrobError(GroupDetError):
    module = "afrob"


class OnHyperplane(AfrobError):
    pass


class NonPositiveCoordinate(AfrobError):
    pass


# -- cli ----------------------------------------------------------------------

class UsageError(GroupDetError):
    module = "cli"


class InvalidArgument(GroupDetError, ValueError):
    """A precondition on an argument (not on the data) was violated."""
