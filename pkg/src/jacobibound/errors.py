"""Exception types shared across the toolkit."""

from __future__ import annotations

from typing import Iterable


class JacobiboundError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(JacobiboundError, ValueError):
    """Input shapes do not line up (non-square grid, wrong vector length)."""


class GuardError(JacobiboundError, ValueError):
    """A size guard protecting a brute-force operation was exceeded."""


class StructuralDegeneracyError(JacobiboundError, ValueError):
    """No finite transversal exists.

    Carries a Hall-violator witness: a set of rows whose finite entries
    together reach fewer columns than there are rows.  Indices are stored
    0-based; the message renders them 1-based.
    """

    def __init__(self, rows: Iterable[int], cols: Iterable[int]):
        self.rows = tuple(sorted(rows))
        self.cols = tuple(sorted(cols))
        rows_s = ", ".join(str(r + 1) for r in self.rows)
        cols_s = ", ".join(str(c + 1) for c in self.cols)
        super().__init__(
            f"no finite transversal: rows {{{rows_s}}} match only columns {{{cols_s}}}"
        )


class InfeasibilityError(JacobiboundError, ValueError):
    """The attachment process cannot reach some rows."""

    def __init__(self, stuck_rows: Iterable[int], message: str | None = None):
        self.stuck_rows = tuple(sorted(stuck_rows))
        if message is None:
            rows_s = ", ".join(str(r + 1) for r in self.stuck_rows)
            message = f"attachment stalls: rows {{{rows_s}}} cannot be attached"
        super().__init__(message)


class DegenerateColumnError(JacobiboundError, ValueError):
    """A beta value is -inf where a finite one is required."""


class EvaluationError(JacobiboundError, ValueError):
    """A required point assignment is missing during exact evaluation."""


class ParseError(JacobiboundError, ValueError):
    """Text input was rejected; carries a 1-based position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
