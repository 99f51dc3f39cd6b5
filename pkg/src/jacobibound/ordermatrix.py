"""Order matrices over the max-plus domain N ∪ {-inf}.

An order matrix records, for every equation/unknown pair of a square ODE
system, the highest derivative order with which the unknown occurs.  The
absorbing NEG_INF marks absence (the strong convention); replacing it by 0
gives the weak convention.  The brute-force permutation scan implemented
here is deliberately naive: it is the oracle that anchors the fast
combinatorial algorithms layered on top of this module.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, GuardError, ParseError


class _NegInfinity:
    """Absorbing bottom element of the order domain.

    A dedicated singleton rather than a sentinel integer: addition with it
    cannot silently produce a finite value, and it orders below every int.
    """

    __slots__ = ()
    _instance: "_NegInfinity | None" = None

    def __new__(cls) -> "_NegInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "-inf"

    def __lt__(self, other):
        if isinstance(other, int):
            return True
        if other is self:
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, int) or other is self:
            return True
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, int) or other is self:
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, int):
            return False
        if other is self:
            return True
        return NotImplemented

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("jacobibound.NEG_INF")

    def __add__(self, other):
        if isinstance(other, int) or other is self:
            return self
        return NotImplemented

    __radd__ = __add__

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


NEG_INF = _NegInfinity()

OrderValue = int | _NegInfinity


def is_finite(value: OrderValue) -> bool:
    return value is not NEG_INF


def order_add(a: OrderValue, b: OrderValue) -> OrderValue:
    """Max-plus addition: NEG_INF absorbs, finite values add."""
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a + b


def order_max(values: Iterable[OrderValue]) -> OrderValue:
    """Maximum of order values; NEG_INF for an empty iterable."""
    best: OrderValue = NEG_INF
    for v in values:
        if v is not NEG_INF and (best is NEG_INF or v > best):
            best = v
    return best


def _check_entry(value: OrderValue) -> None:
    if value is NEG_INF:
        return
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"matrix entries must be ints or NEG_INF, got {value!r}")
    if value < 0:
        raise ValueError(f"finite orders must be >= 0, got {value}")


@dataclass(frozen=True)
class OrderMatrix:
    """Square grid of derivative orders; entries are ints >= 0 or NEG_INF."""

    entries: tuple[tuple[OrderValue, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0:
            raise DimensionError("an order matrix needs at least one row")
        for row in self.entries:
            if len(row) != n:
                raise DimensionError(
                    f"matrix is not square: {n} rows but a row of length {len(row)}"
                )
            for v in row:
                _check_entry(v)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[OrderValue | None]]) -> "OrderMatrix":
        """Build a matrix from nested iterables; None reads as NEG_INF."""
        conv = tuple(
            tuple(NEG_INF if v is None else v for v in row) for row in rows
        )
        return cls(conv)

    def entry(self, i: int, j: int) -> OrderValue:
        return self.entries[i][j]

    def row(self, i: int) -> tuple[OrderValue, ...]:
        return self.entries[i]

    def finite_columns(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, v in enumerate(self.entries[i]) if v is not NEG_INF)

    def column_max(self, j: int) -> OrderValue:
        return order_max(row[j] for row in self.entries)

    def add_to_rows(self, increments: Sequence[int]) -> "OrderMatrix":
        """Return the matrix with increments[i] added to every finite entry of row i."""
        if len(increments) != self.n:
            raise DimensionError(
                f"expected {self.n} row increments, got {len(increments)}"
            )
        return OrderMatrix(
            tuple(
                tuple(order_add(v, inc) for v in row)
                for row, inc in zip(self.entries, increments)
            )
        )

    def __str__(self) -> str:
        cells = [[repr(v) for v in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


@dataclass(frozen=True)
class Permutation:
    """Bijection of 0-based row indices onto column indices."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.images)


def transversal_sum(A: OrderMatrix, sigma: Permutation) -> OrderValue:
    """Sum of A[i][sigma(i)] over all rows, absorbing to NEG_INF."""
    if len(sigma) != A.n:
        raise DimensionError(
            f"permutation of length {len(sigma)} does not fit a {A.n}x{A.n} matrix"
        )
    total = 0
    for i, j in enumerate(sigma.images):
        v = A.entries[i][j]
        if v is NEG_INF:
            return NEG_INF
        total += v
    return total


_BRUTE_FORCE_LIMIT = 9


def brute_force_jacobi_number(A: OrderMatrix) -> OrderValue:
    """Maximal transversal sum found by scanning all n! permutations.

    This is the test oracle for the fast minimal-canon algorithm; the n <= 9
    guard keeps the factorial scan tractable.
    """
    if A.n > _BRUTE_FORCE_LIMIT:
        raise GuardError(
            f"brute-force scan is limited to n <= {_BRUTE_FORCE_LIMIT}, got n = {A.n}"
        )
    entries = A.entries
    best: OrderValue = NEG_INF
    for images in itertools.permutations(range(A.n)):
        total = 0
        for i, j in enumerate(images):
            v = entries[i][j]
            if v is NEG_INF:
                total = None
                break
            total += v
        if total is not None and (best is NEG_INF or total > best):
            best = total
    return best


def _max_bipartite_matching(
    n: int, adj: Sequence[Sequence[int]]
) -> tuple[list[int | None], list[int | None], tuple[list[int], list[int]] | None]:
    """Maximum bipartite matching via BFS augmenting paths.

    Returns (match_col, match_row, witness); witness is None when the
    matching is perfect, otherwise a Hall-violator pair (rows, cols) with
    strictly fewer reachable columns than rows.
    """
    match_col: list[int | None] = [None] * n
    match_row: list[int | None] = [None] * n
    for start in range(n):
        pred: dict[int, int] = {}  # column -> row it was reached from
        queue = [start]
        seen_rows = {start}
        free_col: int | None = None
        qi = 0
        while qi < len(queue) and free_col is None:
            r = queue[qi]
            qi += 1
            for c in adj[r]:
                if c in pred:
                    continue
                pred[c] = r
                owner = match_row[c]
                if owner is None:
                    free_col = c
                    break
                seen_rows.add(owner)
                queue.append(owner)
        if free_col is None:
            return match_col, match_row, (sorted(seen_rows), sorted(pred))
        c: int | None = free_col
        while c is not None:
            r = pred[c]
            nxt = match_col[r]
            match_col[r] = c
            match_row[c] = r
            c = nxt
    return match_col, match_row, None


def has_finite_transversal(A: OrderMatrix) -> bool:
    """True iff a permutation avoiding every NEG_INF entry exists.

    Decided by augmenting-path matching on the bipartite graph of finite
    entries, so it stays polynomial on sizes far beyond the brute-force
    guard.
    """
    adj = [A.finite_columns(i) for i in range(A.n)]
    return _max_bipartite_matching(A.n, adj)[2] is None


def to_weak(A: OrderMatrix) -> OrderMatrix:
    """Rewrite under the weak convention: every NEG_INF entry becomes 0."""
    return OrderMatrix(
        tuple(tuple(0 if v is NEG_INF else v for v in row) for row in A.entries)
    )


def isoperimetric_matrix(exponents: Sequence[int]) -> OrderMatrix:
    """Order matrix of an isoperimetric system: entry (i, j) is e_i + e_j."""
    if len(exponents) == 0:
        raise ValueError("need at least one exponent")
    for e in exponents:
        if not isinstance(e, int) or isinstance(e, bool) or e < 0:
            raise ValueError(f"exponents must be non-negative ints, got {e!r}")
    return OrderMatrix(
        tuple(tuple(ei + ej for ej in exponents) for ei in exponents)
    )


# ---------------------------------------------------------------------------
# Matrix JSON format: {"n": int, "entries": [[int|null, ...], ...]}
# null encodes NEG_INF.  This module owns the exact grammar.
# ---------------------------------------------------------------------------


def matrix_to_json_dict(A: OrderMatrix) -> dict:
    return {
        "n": A.n,
        "entries": [
            [None if v is NEG_INF else v for v in row] for row in A.entries
        ],
    }


def matrix_from_json_dict(obj: object) -> OrderMatrix:
    if not isinstance(obj, dict):
        raise ParseError("matrix JSON must be an object with 'n' and 'entries'")
    if set(obj) != {"n", "entries"}:
        raise ParseError(
            f"matrix JSON must have exactly the keys 'n' and 'entries', got {sorted(obj)}"
        )
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {n!r}")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n:
        raise ParseError(f"'entries' must be a list of {n} rows")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {i + 1} must be a list of {n} values")
        conv: list[OrderValue] = []
        for j, v in enumerate(row):
            if v is None:
                conv.append(NEG_INF)
            elif isinstance(v, int) and not isinstance(v, bool) and v >= 0:
                conv.append(v)
            else:
                raise ParseError(
                    f"entry ({i + 1}, {j + 1}) must be a non-negative integer or null, got {v!r}"
                )
        rows.append(tuple(conv))
    return OrderMatrix(tuple(rows))


def matrix_to_json_text(A: OrderMatrix) -> str:
    return json.dumps(matrix_to_json_dict(A), indent=2) + "\n"


def matrix_from_json_text(text: str) -> OrderMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return matrix_from_json_dict(obj)
