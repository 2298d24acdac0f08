"""Exception hierarchy shared by every layer of the package."""


class MultirelError(Exception):
    """Base class for all errors raised by multirel."""


class CardinalityLimit(MultirelError):
    """An object type would exceed the configured size caps."""


class TypeMismatch(MultirelError):
    """Operands of an operation have incompatible object types."""


class EmptyFamily(MultirelError):
    """A big inner operation was applied to an empty family."""


class ResultTooLarge(MultirelError):
    """An enumeration would produce more results than the configured cap."""


class SpaceTooLarge(MultirelError):
    """A quantifier or subclass sweep exceeds the enumeration cap."""

    def __init__(self, message, space=None):
        super().__init__(message)
        self.space = space


class NotUpClosed(MultirelError):
    """Parikh composition was given an argument that is not up-closed."""


class NotUnivalent(MultirelError):
    """A univalent multirelation was required."""


class UnknownDemo(MultirelError):
    """No demo is registered under the requested name."""


class LawSyntaxError(MultirelError):
    """Malformed law-file or expression source."""

    def __init__(self, message, line=None, column=None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class LawTypeError(MultirelError):
    """A term or formula is ill-typed."""
