"""Exception hierarchy shared by every module."""


class NdGameError(ValueError):
    """Base class for all errors raised by ndgame."""


class CycleError(NdGameError):
    pass


class UnknownOutcome(NdGameError):
    pass


class EmptyRestriction(NdGameError):
    pass


class ChainError(NdGameError):
    pass


class EmptySet(NdGameError):
    pass


class ShapeMismatch(NdGameError):
    pass


class MalformedProfile(NdGameError):
    pass


class UnknownAgent(NdGameError):
    pass


class UnknownStrategy(NdGameError):
    pass


class UnknownNode(NdGameError):
    pass


class EmptyCell(NdGameError):
    pass


class CapExceeded(NdGameError):
    pass


class KindError(NdGameError):
    pass


class CollapsedToBottom(NdGameError):
    """The prefixpoint iteration reached bottom.

    Carries the partial trace so the caller can see which round emptied
    which cell.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class ParseError(NdGameError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(NdGameError):
    def __init__(self, message, identifier=None, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.identifier = identifier
        self.line = line
