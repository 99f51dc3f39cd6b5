"""Differentiation orders for resolvent representations.

Given a system whose order matrix has Jacobi number J and a chosen
primitive-element variable (column j0), the attachment process determines
how often each equation must be differentiated so that elimination can
produce one equation of order J in the chosen variable plus expressions
for the others.  Starting from the raised canon with its starred
transversal, the row i0 starred in column j0 repeatedly pulls in further
rows: the currently attached rows are raised together by the least amount
that makes an attached entry tie the starred value of a not-yet-attached
row, which then joins.  A final uniform raise brings the starred entry of
row i0 up to J.  The per-row totals (relative to the original matrix) are
the differentiation orders h.

The minor-transversal characterization — h_i equals the maximal
transversal sum of the matrix with row i and column j0 removed — is
implemented independently as a cross-check oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .canon import CanonResult, minimal_canon
from .errors import DimensionError, InfeasibilityError
from .ordermatrix import (
    NEG_INF,
    OrderMatrix,
    OrderValue,
    _max_bipartite_matching,
    brute_force_jacobi_number,
    matrix_to_json_dict,
)


@dataclass(frozen=True)
class ResolventPlan:
    """Differentiation orders for one choice of primitive-element column.

    Indices are 0-based.  a_double_prime is the matrix after the attachment
    closure, a_triple_prime after the final uniform raise; the latter always
    equals the original matrix with row i raised by h_i.
    """

    j0: int
    i0: int
    h: tuple[int, ...]
    a_double_prime: OrderMatrix
    a_triple_prime: OrderMatrix
    resolvent_order: OrderValue


def _validate_canon(A: OrderMatrix, canon: CanonResult) -> None:
    if canon.n != A.n:
        raise DimensionError(
            f"canon of size {canon.n} does not match a {A.n}x{A.n} matrix"
        )
    raised = A.add_to_rows(canon.ell)
    for i, j in canon.starred:
        v = raised.entries[i][j]
        if v is NEG_INF or v != raised.column_max(j):
            raise ValueError(
                "canon does not belong to this matrix: "
                f"starred entry ({i + 1}, {j + 1}) is not column-maximal"
            )


def resolvent_orders(A: OrderMatrix, canon: CanonResult, j0: int) -> ResolventPlan:
    """Run the attachment process for column j0.

    `canon` must be the minimal canon of A.  Raises an infeasibility error
    naming the stuck rows when the attachment stalls (every unattached row's
    starred column is NEG_INF in all attached rows).
    """
    n = A.n
    if not 0 <= j0 < n:
        raise DimensionError(f"column index {j0} out of range for n = {n}")
    _validate_canon(A, canon)
    if all(A.entries[i][j0] is NEG_INF for i in range(n)):
        raise InfeasibilityError(
            (), message=f"variable column {j0 + 1} has no finite entry"
        )
    star_col = {i: j for i, j in canon.starred}
    star_row = {j: i for i, j in canon.starred}
    i0 = star_row[j0]

    vals: list[list[int | None]] = [
        [None if v is NEG_INF else v + l for v in row]
        for row, l in zip(A.entries, canon.ell)
    ]
    fin = [[j for j, v in enumerate(row) if v is not None] for row in vals]
    total = list(canon.ell)
    attached = bytearray(n)
    attached[i0] = 1
    count = 1

    def tied(i1: int) -> bool:
        # an attached row underlines (ties) the starred value of row i1
        c = star_col[i1]
        target = vals[i1][c]
        return any(
            attached[r] and vals[r][c] is not None and vals[r][c] == target
            for r in range(n)
        )

    while count < n:
        # closure under the current underline relation; rows attach for free
        grew = True
        while grew and count < n:
            grew = False
            for i1 in range(n):
                if not attached[i1] and tied(i1):
                    attached[i1] = 1
                    count += 1
                    grew = True
        if count == n:
            break
        delta: int | None = None
        for i1 in range(n):
            if attached[i1]:
                continue
            c = star_col[i1]
            target = vals[i1][c]
            for r in range(n):
                if attached[r] and vals[r][c] is not None:
                    gap = target - vals[r][c]
                    if delta is None or gap < delta:
                        delta = gap
        if delta is None:
            stuck = [i for i in range(n) if not attached[i]]
            raise InfeasibilityError(stuck)
        if delta <= 0:
            raise RuntimeError("attachment step computed a non-positive raise")
        for r in range(n):
            if attached[r]:
                total[r] += delta
                row = vals[r]
                for j in fin[r]:
                    row[j] += delta

    a_double = OrderMatrix(
        tuple(
            tuple(NEG_INF if v is None else v for v in row) for row in vals
        )
    )
    J = canon.jacobi_number
    final = J - vals[i0][j0]
    if final < 0:
        raise RuntimeError("starred entry exceeded the Jacobi number")
    if final:
        for r in range(n):
            total[r] += final
            row = vals[r]
            for j in fin[r]:
                row[j] += final
    a_triple = OrderMatrix(
        tuple(
            tuple(NEG_INF if v is None else v for v in row) for row in vals
        )
    )
    return ResolventPlan(
        j0=j0,
        i0=i0,
        h=tuple(total),
        a_double_prime=a_double,
        a_triple_prime=a_triple,
        resolvent_order=J,
    )


def _minor(A: OrderMatrix, drop_row: int, drop_col: int) -> OrderMatrix:
    rows = tuple(
        tuple(v for j, v in enumerate(row) if j != drop_col)
        for i, row in enumerate(A.entries)
        if i != drop_row
    )
    return OrderMatrix(rows)


def _max_transversal_sum(M: OrderMatrix) -> OrderValue:
    if M.n <= 8:
        return brute_force_jacobi_number(M)
    adj = [M.finite_columns(i) for i in range(M.n)]
    if _max_bipartite_matching(M.n, adj)[2] is not None:
        return NEG_INF
    return minimal_canon(M).jacobi_number


def forma_elegans_orders(A: OrderMatrix, j0: int) -> tuple[OrderValue, ...]:
    """Differentiation orders from minor transversal sums.

    h_i is the maximal transversal sum of A with row i and column j0
    removed; the empty 0x0 minor contributes 0, and NEG_INF propagates when
    a minor has no finite transversal.
    """
    n = A.n
    if not 0 <= j0 < n:
        raise DimensionError(f"column index {j0} out of range for n = {n}")
    if n == 1:
        return (0,)
    return tuple(_max_transversal_sum(_minor(A, i, j0)) for i in range(n))


def plan_to_json_dict(plan: ResolventPlan) -> dict:
    return {
        "j0": plan.j0 + 1,
        "i0": plan.i0 + 1,
        "h": list(plan.h),
        "aDoublePrime": matrix_to_json_dict(plan.a_double_prime),
        "aTriplePrime": matrix_to_json_dict(plan.a_triple_prime),
        "order": None if plan.resolvent_order is NEG_INF else plan.resolvent_order,
    }
