"""Exception hierarchy shared by every module of the package."""


class GradvalError(Exception):
    """Base class for all library errors."""


class MathematicalFailure(GradvalError):
    """A computation hit a mathematical obstruction (CLI exit code 1)."""


class UsageError(GradvalError):
    """Bad input, config, or request (CLI exit code 2)."""


class NotASublattice(MathematicalFailure):
    pass


class InfiniteIndex(MathematicalFailure):
    pass


class FieldMismatch(UsageError):
    pass


class ParentMismatch(UsageError):
    pass


class NegativeValue(MathematicalFailure):
    pass


class ZeroElement(MathematicalFailure):
    pass


class NonHomogeneous(MathematicalFailure):
    pass


class UnsupportedExtension(MathematicalFailure):
    pass


class UnsupportedComparison(MathematicalFailure):
    pass


class WrongMode(UsageError):
    pass


class NoDominatedExtension(MathematicalFailure):
    """Raised only if the enumeration finds nothing; carries diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class IncompleteUniverse(UsageError):
    pass


class NotGStable(MathematicalFailure):
    def __init__(self, message, missing=None):
        super().__init__(message)
        self.missing = missing


class NoNeighborhoodInPool(MathematicalFailure):
    def __init__(self, message, uncovered=None):
        super().__init__(message)
        self.uncovered = uncovered or []


class BasisConstructionFailure(MathematicalFailure):
    pass


class ParseError(UsageError):
    def __init__(self, message, column):
        super().__init__(f"{message} at column {column}")
        self.column = column


class UnknownSuite(UsageError):
    pass


class ConfigError(UsageError):
    pass
