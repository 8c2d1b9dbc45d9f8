"""Exception hierarchy shared across the package.

Every error carries a stable machine-readable ``code`` so front ends can
map failures to exit codes or diagnostics without parsing messages.
"""

from __future__ import annotations


class ArchError(Exception):
    """Base class for all errors raised by this package."""

    code = "ARCH_ERROR"


class SubsetNotInUniverseError(ArchError):
    code = "SUBSET_NOT_IN_UNIVERSE"


class NotASubsetError(ArchError):
    code = "NOT_A_SUBSET"


class DuplicateViewError(ArchError):
    code = "DUPLICATE_VIEW"

    def __init__(self, message: str, labels: tuple[str, ...] = ()):
        super().__init__(message)
        self.labels = labels


class NotAPartitionError(ArchError):
    code = "NOT_A_PARTITION"


class NotBncError(ArchError):
    code = "NOT_BNC"


class EmptyUniverseError(ArchError):
    code = "EMPTY_UNIVERSE"


class IndexOutOfRangeError(ArchError):
    code = "INDEX_OUT_OF_RANGE"


class SearchBudgetError(ArchError):
    """The search hit its node budget before finding a witness or a proof
    of nonexistence.  Deliberately distinct from a ``None`` result."""

    code = "SEARCH_BUDGET_EXCEEDED"


class NotComposableError(ArchError):
    code = "NOT_COMPOSABLE"


class NotSingleRelationBncError(ArchError):
    code = "NOT_SINGLE_RELATION_BNC"


class JunctionShapeError(ArchError):
    code = "JUNCTION_SHAPE_MISMATCH"


class ParseError(ArchError):
    """Syntax error with a 1-based source position and the token set that
    would have been accepted at that point."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int, column: int,
                 expected: tuple[str, ...] = (), found: str | None = None):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        self.found = found
        super().__init__(f"{line}:{column}: {message}")


class SchemaError(ArchError):
    """Structurally valid text whose content violates model invariants."""

    code = "SCHEMA_ERROR"

    def __init__(self, message: str, violations=()):
        self.violations = tuple(violations)
        super().__init__(message)
