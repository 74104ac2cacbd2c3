"""Exception hierarchy shared across the package.

The command line maps these onto stable exit codes, so new failure modes
should reuse an existing class when they describe the same kind of problem.
"""

from __future__ import annotations


class PentachainError(Exception):
    """Base class for all package errors."""


class ParseError(PentachainError):
    """Malformed triangulation or geometry input text."""


class ValidationError(PentachainError):
    """Gluing table is not a closed oriented pseudo-manifold."""


class MoveError(ValidationError):
    """A bistellar move was requested at an invalid site."""


class DegenerateGeometryError(PentachainError):
    """No usable plane coordinates: some face circulation vanishes."""


class NotAcyclicError(PentachainError):
    """The assembled complex fails the acyclicity rank pattern."""

    def __init__(self, ranks, expected):
        super().__init__(f"complex is not acyclic: ranks {ranks}, expected {expected}")
        self.ranks = tuple(ranks)
        self.expected = tuple(expected)


class TorsionError(PentachainError):
    """A requested minor partition is invalid (some minor vanishes)."""


class InvarianceError(PentachainError):
    """A verification walk observed a change of the invariant."""
