"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can map
failures onto exit statuses without string matching.
"""


class ArrtopoError(Exception):
    code = "error"


class InputError(ArrtopoError):
    code = "input"


class BudgetError(ArrtopoError):
    code = "budget"


# arrangement-core
class DuplicateHyperplane(InputError):
    code = "DuplicateHyperplane"


class ZeroForm(InputError):
    code = "ZeroForm"


class DimensionMismatch(InputError):
    code = "DimensionMismatch"


class UnsupportedRank(InputError):
    code = "UnsupportedRank"


class IndexOutOfRange(InputError):
    code = "IndexOutOfRange"


class UnknownName(InputError):
    code = "UnknownName"


# os-resonance
class ZeroVector(InputError):
    code = "ZeroVector"


class NonProjective(InputError):
    code = "NonProjective"


# multinets
class MultinetViolation(ArrtopoError):
    code = "MultinetViolation"


class UnequalWeights(MultinetViolation):
    code = "UnequalWeights"


class UncoveredCrossing(MultinetViolation):
    code = "UncoveredCrossing"


class InconsistentNX(MultinetViolation):
    code = "InconsistentNX"


class DisconnectedClass(MultinetViolation):
    code = "DisconnectedClass"


class IdentityFailure(MultinetViolation):
    code = "IdentityFailure"


class MalformedMultinet(MultinetViolation, InputError):
    code = "MalformedMultinet"


class SearchBudgetExceeded(BudgetError):
    code = "SearchBudgetExceeded"

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial if partial is not None else []


# braids / jump loci
class NotCommutatorRelators(InputError):
    code = "NotCommutatorRelators"


class TorsionAbelianization(InputError):
    code = "TorsionAbelianization"


class FieldMismatch(InputError):
    code = "FieldMismatch"


class ContextTooSmall(InputError):
    code = "ContextTooSmall"


class NonGeneric(ArrtopoError):
    code = "NonGeneric"


# milnor
class NonPrimitiveMultiplicity(InputError):
    code = "NonPrimitiveMultiplicity"


class BadPrime(InputError):
    code = "BadPrime"


class BudgetExceeded(BudgetError):
    code = "BudgetExceeded"


# boundary
class NonEssential(InputError):
    code = "NonEssential"


class SimplificationFailure(ArrtopoError):
    code = "SimplificationFailure"

    def __init__(self, msg, raw=None):
        super().__init__(msg)
        self.raw = raw
