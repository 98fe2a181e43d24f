"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class IsmtError(Exception):
    """Base class for all errors raised by this package."""


class DisconnectedInput(IsmtError):
    pass


class EmptySubset(IsmtError):
    pass


class VertexNotInTree(IsmtError):
    pass


class InvalidTree(IsmtError):
    pass


class EmptyTerminalSet(IsmtError):
    pass


class InfeasibleInstance(IsmtError):
    """Fewer than two non-terminal vertices: every tree has two leaves, so no
    tree can keep all terminals internal."""


class NotMetric(IsmtError):
    pass


class TerminalCapExceeded(IsmtError):
    pass


class EmptyCandidateSet(IsmtError):
    pass


class NotALeaf(IsmtError):
    pass


class DegreeParityViolation(IsmtError):
    pass


class InstanceTooLarge(IsmtError):
    pass


class SpecInvalid(IsmtError):
    pass


class ParseError(IsmtError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
