"""Exception types shared across the package."""

from __future__ import annotations


class QBlueError(Exception):
    """Base class for all package-specific errors."""


class LayoutError(QBlueError):
    """Site-list mismatch between subexpressions.

    Carries the path of the offending subexpression plus both conflicting
    site lists so diagnostics can point at the exact spot.
    """

    def __init__(self, message, path="root", left=None, right=None):
        self.path = path
        self.left = left
        self.right = right
        detail = message
        if left is not None and right is not None:
            from .expr import layout_str
            detail = (f"{message} at {path}: "
                      f"[{layout_str(left)}] vs [{layout_str(right)}]")
        super().__init__(detail)


class DimensionCapError(QBlueError):
    """Requested dense-matrix work above the supported dimension cap."""


class NonHermitianError(QBlueError):
    """Operation requires a Hermitian operator but got a plain one."""


class EncodingError(QBlueError):
    """Layout cannot be encoded by the requested particle transformation."""


class CompileError(QBlueError):
    """Program cannot be compiled to a circuit or schedule."""


class FitError(CompileError):
    """Hamiltonian terms not covered by the machine's interaction templates."""

    def __init__(self, message, uncovered=()):
        self.uncovered = tuple(uncovered)
        super().__init__(message)


class ParseError(QBlueError):
    """Surface-syntax error with line/column position."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})")


class StateFormatError(QBlueError):
    """Malformed state-literal text."""
