"""Minimal-canon computation in O(n^3).

A multiplier vector lambda is a *canon* for an order matrix A when the
row-raised matrix (a_ij + lambda_i) contains n transversal maxima: entries
maximal in their columns, one per row, in pairwise distinct columns.  The
algorithm below computes the componentwise-minimal such vector ell together
with the derived quantities Lambda = max ell, alpha_i = Lambda - ell_i,
beta_j = max_i (a_ij - alpha_i) and the Jacobi number J, and records a full
step trace.

The main loop alternates three moves on the raised matrix:

* star a column-maximal entry sitting in an unmatched row and column;
* augment along a path of same-column ties between starred entries,
  which grows the transversal set by one; and
* when no augmenting path exists, partition rows into first class
  (reachable from a starred entry in an unmatched column), third class
  (rows that can pass a tie down to an unmatched row, plus the unmatched
  rows themselves) and second class (the rest), then raise every
  third-class row by the least amount that ties some starred value in a
  first- or second-class row.

Raising stops exactly at ties, so starred entries stay column-maximal
throughout; the class partition is recomputed from scratch after each
raise, which keeps the reasoning simple at the same cubic total cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Sequence

from .errors import DimensionError, GuardError, StructuralDegeneracyError
from .ordermatrix import (
    NEG_INF,
    OrderMatrix,
    OrderValue,
    _max_bipartite_matching,
)


class StepKind(Enum):
    PREPARATION = "Preparation"
    AUGMENT = "Augment"
    RAISE_THIRD_CLASS = "RaiseThirdClass"


@dataclass(frozen=True)
class RowClasses:
    """Row partition in effect during a raise step (0-based row indices)."""

    first: tuple[int, ...]
    second: tuple[int, ...]
    third: tuple[int, ...]
    lower: tuple[int, ...]


@dataclass(frozen=True)
class TraceStep:
    kind: StepKind
    row_increments: tuple[int, ...]
    classes: RowClasses | None = None

    def __post_init__(self):
        if any(inc < 0 for inc in self.row_increments):
            raise ValueError("trace increments must be non-negative")
        if self.kind is StepKind.RAISE_THIRD_CLASS:
            if not any(inc > 0 for inc in self.row_increments):
                raise ValueError("a raise step must increase at least one row")
            if self.classes is None:
                raise ValueError("a raise step must carry the class partition")


@dataclass(frozen=True)
class CanonResult:
    """Output of the minimal-canon algorithm.

    All indices are 0-based.  `starred` lists the chosen transversal-maxima
    positions sorted by row; the positions depend on tie-breaking, while
    ell, Lambda, alpha, beta and jacobi_number are canonical.
    """

    ell: tuple[int, ...]
    Lambda: int
    alpha: tuple[int, ...]
    beta: tuple[OrderValue, ...]
    jacobi_number: OrderValue
    starred: tuple[tuple[int, int], ...]
    trace: tuple[TraceStep, ...]

    @property
    def n(self) -> int:
        return len(self.ell)

    def __post_init__(self):
        n = len(self.ell)
        if not (len(self.alpha) == len(self.beta) == len(self.starred) == n):
            raise DimensionError("canon result fields must all have length n")
        if self.Lambda != max(self.ell):
            raise ValueError("Lambda must equal max(ell)")
        if any(a + l != self.Lambda for a, l in zip(self.alpha, self.ell)):
            raise ValueError("alpha_i + ell_i must equal Lambda")
        if len({i for i, _ in self.starred}) != n or len({j for _, j in self.starred}) != n:
            raise ValueError("starred positions must cover distinct rows and columns")
        if all(b is not NEG_INF for b in self.beta):
            total = sum(self.alpha) + sum(b for b in self.beta)
            if total != self.jacobi_number:
                raise ValueError("jacobi_number must equal sum(alpha) + sum(beta)")


class _Solver:
    """Mutable working state for one minimal-canon run.

    Entries are plain ints with None standing in for NEG_INF; every value
    mutation goes through the per-row finite-column lists, so absent
    entries are never touched.
    """

    def __init__(self, A: OrderMatrix):
        self.n = A.n
        self.orig = A.entries
        self.vals: list[list[int | None]] = [
            [None if v is NEG_INF else v for v in row] for row in A.entries
        ]
        self.fin: list[list[int]] = [
            [j for j, v in enumerate(row) if v is not None] for row in self.vals
        ]
        self.ell = [0] * self.n
        self.match_col: list[int | None] = [None] * self.n
        self.match_row: list[int | None] = [None] * self.n
        self.matched = 0
        self.trace: list[TraceStep] = []
        # phase caches, valid until the next raise
        self.colmax: list[int | None] = [None] * self.n
        self.tight_rows: list[list[int]] = []
        self.row_tight: list[list[int]] = []
        self._first_class = bytearray(self.n)

    # -- preparation --------------------------------------------------

    def prepare(self) -> tuple[int, ...]:
        """Raise each row just enough to tie some column maximum.

        Single top-to-bottom pass; row i is raised by
        max(0, min over finite columns of (column max - entry)).  The raise
        only ever ties an existing maximum, so earlier rows keep theirs and
        the column maxima never move during the pass.
        """
        n = self.n
        colmax: list[int | None] = [None] * n
        for i in range(n):
            row = self.vals[i]
            for j in self.fin[i]:
                v = row[j]
                if colmax[j] is None or v > colmax[j]:
                    colmax[j] = v
        inc = [0] * n
        for i in range(n):
            if not self.fin[i]:
                raise StructuralDegeneracyError([i], [])
            row = self.vals[i]
            gap = min(colmax[j] - row[j] for j in self.fin[i])
            if gap > 0:
                inc[i] = gap
                self.ell[i] += gap
                for j in self.fin[i]:
                    row[j] += gap
        self.trace.append(TraceStep(StepKind.PREPARATION, tuple(inc)))
        return tuple(inc)

    # -- phase caches ---------------------------------------------------

    def rebuild(self) -> None:
        n = self.n
        colmax: list[int | None] = [None] * n
        for i in range(n):
            row = self.vals[i]
            for j in self.fin[i]:
                v = row[j]
                if colmax[j] is None or v > colmax[j]:
                    colmax[j] = v
        tight_rows: list[list[int]] = [[] for _ in range(n)]
        row_tight: list[list[int]] = [[] for _ in range(n)]
        for i in range(n):
            row = self.vals[i]
            rt = row_tight[i]
            for j in self.fin[i]:
                if row[j] == colmax[j]:
                    tight_rows[j].append(i)
                    rt.append(j)
        self.colmax = colmax
        self.tight_rows = tight_rows
        self.row_tight = row_tight

    # -- transversal growth ----------------------------------------------

    def _star(self, r: int, c: int) -> None:
        self.match_col[r] = c
        self.match_row[c] = r
        self.matched += 1
        self.trace.append(TraceStep(StepKind.AUGMENT, (0,) * self.n))

    def direct_adds(self) -> None:
        # Column-maximal entries in unmatched rows and columns can be
        # starred outright; ties break by lowest (row, column).
        for r in range(self.n):
            if self.match_col[r] is None:
                for j in self.row_tight[r]:
                    if self.match_row[j] is None:
                        self._star(r, j)
                        break

    def bfs_augment(self) -> bool:
        """Attempt one augmentation; on failure remember the first class."""
        n = self.n
        parent = [-1] * n
        entry = [-1] * n
        visited = bytearray(n)
        queue: list[int] = []
        for i in range(n):
            if self.match_col[i] is not None:
                for j in self.row_tight[i]:
                    if self.match_row[j] is None:
                        queue.append(i)
                        visited[i] = 1
                        entry[i] = j
                        break
        qi = 0
        while qi < len(queue):
            i = queue[qi]
            qi += 1
            c = self.match_col[i]
            for r in self.tight_rows[c]:
                if not visited[r]:
                    visited[r] = 1
                    parent[r] = i
                    if self.match_col[r] is None:
                        self._apply_augment(r, parent, entry)
                        return True
                    queue.append(r)
        self._first_class = visited
        return False

    def _apply_augment(self, r: int, parent: list[int], entry: list[int]) -> None:
        path = [r]
        while parent[path[-1]] != -1:
            path.append(parent[path[-1]])
        path.reverse()  # origin .. unmatched row
        freed = [self.match_col[x] for x in path]
        origin = path[0]
        self.match_col[origin] = entry[origin]
        self.match_row[entry[origin]] = origin
        for t in range(1, len(path)):
            c = freed[t - 1]
            self.match_col[path[t]] = c
            self.match_row[c] = path[t]
        self.matched += 1
        self.trace.append(TraceStep(StepKind.AUGMENT, (0,) * self.n))

    # -- raising ----------------------------------------------------------

    def classify_and_raise(self) -> None:
        n = self.n
        first = self._first_class
        in_third = bytearray(n)
        lower = []
        stack = []
        for r in range(n):
            if self.match_col[r] is None:
                in_third[r] = 1
                lower.append(r)
                stack.append(r)
        # backward closure: a matched row joins the third class when some
        # third-class row ties the starred value of its matched column
        while stack:
            r = stack.pop()
            for c in self.row_tight[r]:
                i = self.match_row[c]
                if i is not None and not in_third[i] and not first[i]:
                    in_third[i] = 1
                    stack.append(i)
        delta: int | None = None
        for r in range(n):
            if not in_third[r]:
                continue
            row = self.vals[r]
            for c in self.fin[r]:
                owner = self.match_row[c]
                if owner is not None and in_third[owner]:
                    continue  # starred value in a third-class row: not a target
                gap = self.colmax[c] - row[c]
                if delta is None or gap < delta:
                    delta = gap
        if delta is None:
            raise RuntimeError(
                "raise step stalled although a finite transversal exists"
            )
        if delta <= 0:
            raise RuntimeError("raise step computed a non-positive increment")
        inc = [0] * n
        for r in range(n):
            if in_third[r]:
                inc[r] = delta
                self.ell[r] += delta
                row = self.vals[r]
                for j in self.fin[r]:
                    row[j] += delta
        classes = RowClasses(
            first=tuple(i for i in range(n) if first[i]),
            second=tuple(
                i
                for i in range(n)
                if self.match_col[i] is not None and not first[i] and not in_third[i]
            ),
            third=tuple(
                i for i in range(n) if in_third[i] and self.match_col[i] is not None
            ),
            lower=tuple(lower),
        )
        self.trace.append(TraceStep(StepKind.RAISE_THIRD_CLASS, tuple(inc), classes))

    # -- orchestration ------------------------------------------------------

    def run(self) -> None:
        self.prepare()
        raise_budget = self.n * self.n + 2 * self.n + 10
        while self.matched < self.n:
            self.rebuild()
            self.direct_adds()
            while self.matched < self.n and self.bfs_augment():
                pass
            if self.matched < self.n:
                self.classify_and_raise()
                raise_budget -= 1
                if raise_budget < 0:
                    raise RuntimeError("raise budget exhausted; algorithm diverged")

    def result(self) -> CanonResult:
        n = self.n
        ell = tuple(self.ell)
        Lambda = max(ell)
        alpha = tuple(Lambda - l for l in ell)
        beta: list[OrderValue] = []
        for j in range(n):
            best: int | None = None
            for i in range(n):
                v = self.orig[i][j]
                if v is NEG_INF:
                    continue
                cand = v - alpha[i]
                if best is None or cand > best:
                    best = cand
            beta.append(NEG_INF if best is None else best)
        starred = tuple((i, self.match_col[i]) for i in range(n))
        jacobi = sum(self.orig[i][c] for i, c in starred)
        return CanonResult(
            ell=ell,
            Lambda=Lambda,
            alpha=alpha,
            beta=tuple(beta),
            jacobi_number=jacobi,
            starred=starred,
            trace=tuple(self.trace),
        )


def prepare(A: OrderMatrix) -> tuple[OrderMatrix, tuple[int, ...]]:
    """Raise rows so each contains a column-maximal entry.

    Returns the prepared matrix and the per-row increments.  Rows without
    any finite entry cannot be prepared and raise a structural-degeneracy
    error.
    """
    solver = _Solver(A)
    inc = solver.prepare()
    return A.add_to_rows(inc), inc


def is_canon(A: OrderMatrix, lam: Sequence[int]) -> bool:
    """True iff (a_ij + lam_i) contains n transversal maxima.

    Decided by bipartite matching between rows and columns over the
    column-maximal positions of the raised matrix.
    """
    if len(lam) != A.n:
        raise DimensionError(f"expected {A.n} multipliers, got {len(lam)}")
    for l in lam:
        if not isinstance(l, int) or isinstance(l, bool) or l < 0:
            raise ValueError(f"multipliers must be non-negative ints, got {l!r}")
    n = A.n
    vals = [
        [None if v is NEG_INF else v + l for v in row]
        for row, l in zip(A.entries, lam)
    ]
    colmax: list[int | None] = [None] * n
    for row in vals:
        for j, v in enumerate(row):
            if v is not None and (colmax[j] is None or v > colmax[j]):
                colmax[j] = v
    adj = [
        [j for j, v in enumerate(row) if v is not None and v == colmax[j]]
        for row in vals
    ]
    return _max_bipartite_matching(n, adj)[2] is None


def minimal_canon(A: OrderMatrix) -> CanonResult:
    """Componentwise-minimal canon of A, with trace.

    Requires a finite transversal; refuses degenerate matrices with a
    structural-degeneracy error carrying the Hall-violator witness, since
    the multipliers are undefined there.
    """
    adj = [A.finite_columns(i) for i in range(A.n)]
    witness = _max_bipartite_matching(A.n, adj)[2]
    if witness is not None:
        raise StructuralDegeneracyError(*witness)
    solver = _Solver(A)
    solver.run()
    return solver.result()


def jacobi_number(A: OrderMatrix) -> OrderValue:
    """Maximal transversal sum via the fast algorithm; NEG_INF if degenerate."""
    adj = [A.finite_columns(i) for i in range(A.n)]
    if _max_bipartite_matching(A.n, adj)[2] is not None:
        return NEG_INF
    solver = _Solver(A)
    solver.run()
    return solver.result().jacobi_number


_BRUTE_N_LIMIT = 4
_BRUTE_BOX_LIMIT = 6


def brute_force_minimal_canon(A: OrderMatrix, box: int) -> tuple[int, ...]:
    """Smallest canon found by exhaustive scan of [0, box]^n.

    Candidates are tried in lexicographic-sum order (by total, then
    lexicographically), so the first canon found has minimal sum; since the
    componentwise-minimal canon has strictly smaller sum than any other,
    the scan returns it whenever it lies inside the box.
    """
    if A.n > _BRUTE_N_LIMIT:
        raise GuardError(f"brute-force canon scan is limited to n <= {_BRUTE_N_LIMIT}")
    if not isinstance(box, int) or isinstance(box, bool) or box < 0:
        raise ValueError(f"box must be a non-negative int, got {box!r}")
    if box > _BRUTE_BOX_LIMIT:
        raise GuardError(f"brute-force canon box is limited to {_BRUTE_BOX_LIMIT}")
    candidates = sorted(product(range(box + 1), repeat=A.n), key=lambda t: (sum(t), t))
    for lam in candidates:
        if is_canon(A, lam):
            return lam
    raise ValueError(f"no canon within [0, {box}]^{A.n}")


# ---------------------------------------------------------------------------
# JSON serialization (consumed by the CLI; 1-based indices in the output)
# ---------------------------------------------------------------------------


def _order_value_to_json(v: OrderValue) -> int | None:
    return None if v is NEG_INF else v


def classes_to_json_dict(classes: RowClasses | None) -> dict | None:
    if classes is None:
        return None
    return {
        "first": [r + 1 for r in classes.first],
        "second": [r + 1 for r in classes.second],
        "third": [r + 1 for r in classes.third],
        "lower": [r + 1 for r in classes.lower],
    }


def trace_to_json_list(trace: Sequence[TraceStep]) -> list[dict]:
    return [
        {
            "kind": step.kind.value,
            "rowIncrements": list(step.row_increments),
            "classes": classes_to_json_dict(step.classes),
        }
        for step in trace
    ]


def canon_to_json_dict(result: CanonResult) -> dict:
    return {
        "ell": list(result.ell),
        "Lambda": result.Lambda,
        "alpha": list(result.alpha),
        "beta": [_order_value_to_json(b) for b in result.beta],
        "jacobiNumber": _order_value_to_json(result.jacobi_number),
        "starred": [[i + 1, j + 1] for i, j in result.starred],
    }
