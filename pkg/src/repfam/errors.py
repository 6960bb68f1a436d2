"""Exception hierarchy shared by every module."""


class RepfamError(Exception):
    """Base class for all library errors."""


class InputError(RepfamError, ValueError):
    """Malformed or out-of-contract input."""


class BudgetError(RepfamError):
    """A configured enumeration or retry budget was exhausted."""


# ffmat
class SingularPivot(InputError):
    pass


class DimensionMismatch(InputError):
    pass


# matroid
class SelfLoop(InputError):
    pass


class ModulusTooSmall(InputError):
    pass


class DependentContractionSet(InputError):
    pass


# repset
class SetNotIndependent(InputError):
    pass


class RankTooSmall(InputError):
    pass


class GroundMismatch(InputError):
    pass


class TruncationFailed(RepfamError):
    pass


# sepcol
class VerificationBudgetExceeded(BudgetError):
    pass


# product
class ClassTooLarge(InputError):
    pass


# mld
class CyclicCircuit(InputError):
    pass


class NoOutput(InputError):
    pass


class NegativeConstant(InputError):
    pass


class KTooLarge(InputError):
    pass


# twdp
class InvalidDecomposition(InputError):
    pass


class NoSolution(RepfamError):
    pass


# oracle
class BudgetExceeded(BudgetError):
    pass


# cli
class UsageError(InputError):
    pass
