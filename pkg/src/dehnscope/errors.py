"""Exception hierarchy shared by all dehnscope modules."""


class DehnscopeError(Exception):
    pass


class DimensionMismatch(DehnscopeError, ValueError):
    pass


class StructureError(DehnscopeError, ValueError):
    """Malformed algebra input (unknown label, wrong weight length, ...)."""


class NotGraded(DehnscopeError, ValueError):
    pass


class NotNilpotent(DehnscopeError):
    pass


class NotAnIdeal(DehnscopeError):
    pass


class FieldNotSplit(DehnscopeError):
    pass


class NotADerivation(DehnscopeError):
    pass


class NonCommutingAction(DehnscopeError):
    pass


class InvalidAlgebra(DehnscopeError):
    """Raised when a classifier receives an algebra that fails validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"{len(self.violations)} validation violation(s): {lines}")


class NotStandardSolvable(DehnscopeError):
    pass


class NonArchimedeanUnsupported(DehnscopeError):
    pass


class NotMixedType(DehnscopeError):
    pass


class MissingResidueCardinality(DehnscopeError):
    pass


class StarConditionViolated(DehnscopeError):
    pass


class InvalidParameter(DehnscopeError, ValueError):
    pass


class UnknownFamily(DehnscopeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ParseError(DehnscopeError):
    def __init__(self, message, locus=None):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)


class ValidationError(DehnscopeError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("algebra failed validation:\n" + "\n".join(
            f"  - {v}" for v in self.violations))
