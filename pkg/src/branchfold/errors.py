"""Exception hierarchy shared by every module.

All errors derive from :class:`BranchfoldError` so callers (and the CLI) can
map them to exit code 2 in one place.
"""


class BranchfoldError(Exception):
    """Base class for all library errors."""


class InputError(BranchfoldError):
    """Malformed user input."""


class DuplicateVertexInSimplex(InputError):
    pass


class UnknownVertex(InputError):
    pass


class ApexCollision(InputError):
    pass


class NotPseudoManifold(BranchfoldError):
    pass


class NotOrientable(BranchfoldError):
    pass


class MisalignedSubcomplex(InputError):
    pass


class GroupTooLarge(BranchfoldError):
    pass


class NotSubgroup(BranchfoldError):
    pass


class CocycleInvalid(BranchfoldError):
    pass


class BaseNotPseudoManifold(BranchfoldError):
    pass


class BranchLocusNotGood(BranchfoldError):
    pass


class IncompatibleComplexes(BranchfoldError):
    pass


class TotalNotConnected(BranchfoldError):
    pass


class BasesDiffer(BranchfoldError):
    pass


class NeitherRegular(BranchfoldError):
    pass


class DimensionNotTwo(BranchfoldError):
    pass


class NotSimplicial(BranchfoldError):
    pass


class NotEffective(BranchfoldError):
    pass


class ActionInvalid(BranchfoldError):
    pass


class NotGoodAction(BranchfoldError):
    pass


class NotConical(BranchfoldError):
    pass


class NotCodimTwo(BranchfoldError):
    pass


class NotEquivalent(BranchfoldError):
    pass


class InconsistentModels(BranchfoldError):
    pass


class ChartInvalid(BranchfoldError):
    pass


class SingularLocusNotCodimTwo(BranchfoldError):
    pass


class NotABranchedCovering(BranchfoldError):
    pass


class NotLiftable(BranchfoldError):
    pass


class OrientationViolation(BranchfoldError):
    pass


class ParamOutOfRange(InputError):
    pass


class IOFailure(BranchfoldError):
    pass
