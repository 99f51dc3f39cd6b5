"""Alternative order bounds and the determinant-degree oracle.

Four quantities are compared: the strong Jacobi number (maximal transversal
sum under the NEG_INF convention), the weak one (absent variables read as
order 0), the Greenspan bound G = sum_j r_j - max_i eta_i built from column
maxima, and the dual Bezout bound sum_i max_j a_ij.  For linear constant-
coefficient systems, the degree of det P(lambda) — computed exactly by
evaluation and interpolation — realizes the order and never exceeds the
Jacobi number of the degree matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import fraction_determinant
from .canon import jacobi_number
from .errors import DimensionError, GuardError, StructuralDegeneracyError
from .ordermatrix import (
    NEG_INF,
    OrderMatrix,
    OrderValue,
    brute_force_jacobi_number,
    to_weak,
)

Coeffs = tuple[Fraction, ...]


def _normalize_poly(coeffs: Sequence[Fraction | int]) -> Coeffs:
    conv = [Fraction(c) for c in coeffs]
    while conv and conv[-1] == 0:
        conv.pop()
    return tuple(conv)


def poly_degree(coeffs: Coeffs) -> OrderValue:
    return len(coeffs) - 1 if coeffs else NEG_INF


def poly_eval(coeffs: Coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class PolyMatrix:
    """Square grid of univariate polynomials with rational coefficients.

    Entries are coefficient tuples in ascending degree with no trailing
    zeros; the empty tuple is the zero polynomial.
    """

    entries: tuple[tuple[Coeffs, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0:
            raise DimensionError("a polynomial matrix needs at least one row")
        for row in self.entries:
            if len(row) != n:
                raise DimensionError("polynomial matrix is not square")

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_coeff_lists(
        cls, rows: Sequence[Sequence[Sequence[Fraction | int]]]
    ) -> "PolyMatrix":
        return cls(tuple(tuple(_normalize_poly(p) for p in row) for row in rows))

    def degree_matrix(self) -> OrderMatrix:
        return OrderMatrix(
            tuple(tuple(poly_degree(p) for p in row) for row in self.entries)
        )


@dataclass(frozen=True)
class BoundsReport:
    """The four order bounds plus the inequality facts verified among them.

    greenspan is None when its occurrence preconditions fail; notes carries
    the human-readable reasons (not part of the JSON schema).
    """

    jacobi_strong: OrderValue
    jacobi_weak: OrderValue
    greenspan: OrderValue | None
    bezout_dual: OrderValue
    relations: tuple[str, ...]
    notes: tuple[str, ...] = ()


def greenspan(A: OrderMatrix) -> OrderValue:
    """Greenspan's bound G = sum_j r_j - max_i eta_i.

    r_j is the j-th column maximum and eta_i the largest k such that
    differentiating equation i k times stays within the column maxima,
    i.e. min over finite columns of (r_j - a_ij).  Columns absent from a
    row impose no constraint, so eta minimizes over finite entries only.
    """
    n = A.n
    r: list[int] = []
    for j in range(n):
        m = A.column_max(j)
        if m is NEG_INF:
            raise StructuralDegeneracyError([], [j])
        r.append(m)
    etas = []
    for i in range(n):
        fin = A.finite_columns(i)
        if not fin:
            raise StructuralDegeneracyError([i], [])
        etas.append(min(r[j] - A.entries[i][j] for j in fin))
    return sum(r) - max(etas)


def bezout_dual(A: OrderMatrix) -> OrderValue:
    """Sum of row maxima; NEG_INF when some row is entirely NEG_INF."""
    total = 0
    for i in range(A.n):
        fin = A.finite_columns(i)
        if not fin:
            return NEG_INF
        total += max(A.entries[i][j] for j in fin)
    return total


def lando_weak_number(A: OrderMatrix) -> OrderValue:
    """Jacobi number under the weak convention (always finite)."""
    return jacobi_number(to_weak(A))


_LINEAR_LIMIT = 8


def linear_system_order(P: PolyMatrix) -> OrderValue:
    """Exact degree of det P(lambda); NEG_INF when the determinant vanishes.

    The degree is bounded by the Jacobi number J of the degree matrix, so
    evaluating at the J+1 rational points 0..J and interpolating (Newton
    divided differences) recovers it exactly.
    """
    if P.n > _LINEAR_LIMIT:
        raise GuardError(f"determinant-degree oracle is limited to n <= {_LINEAR_LIMIT}")
    J = brute_force_jacobi_number(P.degree_matrix())
    if J is NEG_INF:
        return NEG_INF  # every transversal hits a zero polynomial
    points = [Fraction(t) for t in range(J + 1)]
    values = [
        fraction_determinant(
            [[poly_eval(p, x) for p in row] for row in P.entries]
        )
        for x in points
    ]
    # Newton coefficients at consecutive integer nodes; the interpolant's
    # degree is the largest index with a nonzero divided difference.
    table = list(values)
    degree: OrderValue = 0 if table[0] != 0 else NEG_INF
    for k in range(1, len(table)):
        table = [
            (table[t + 1] - table[t]) / (points[t + k] - points[t])
            for t in range(len(table) - 1)
        ]
        if table[0] != 0:
            degree = k
    return degree


_BOUND_NAMES = ("jacobiStrong", "jacobiWeak", "greenspan", "bezoutDual")


def _relations(values: dict[str, OrderValue | None]) -> tuple[str, ...]:
    facts = []
    names = [name for name in _BOUND_NAMES if values[name] is not None]
    for a_pos, a in enumerate(names):
        for b in names[a_pos + 1 :]:
            va, vb = values[a], values[b]
            if va == vb:
                facts.append(f"{a} == {b}")
            elif va < vb:
                facts.append(f"{a} < {b}")
            else:
                facts.append(f"{a} > {b}")
    return tuple(facts)


def bounds_report(A: OrderMatrix) -> BoundsReport:
    """Compute all four bounds; degenerate ones become unavailable with a note."""
    strong = jacobi_number(A)
    weak = lando_weak_number(A)
    dual = bezout_dual(A)
    notes: list[str] = []
    g: OrderValue | None
    try:
        g = greenspan(A)
    except StructuralDegeneracyError as exc:
        g = None
        notes.append(f"greenspan unavailable: {exc}")
    notes.append("greenspan sums column maxima r_j over j (the published formula's index is a typo)")
    values: dict[str, OrderValue | None] = {
        "jacobiStrong": strong,
        "jacobiWeak": weak,
        "greenspan": g,
        "bezoutDual": dual,
    }
    return BoundsReport(
        jacobi_strong=strong,
        jacobi_weak=weak,
        greenspan=g,
        bezout_dual=dual,
        relations=_relations(values),
        notes=tuple(notes),
    )


def bounds_to_json_dict(report: BoundsReport) -> dict:
    def enc(v: OrderValue | None) -> int | None:
        return None if v is None or v is NEG_INF else v

    return {
        "jacobiStrong": enc(report.jacobi_strong),
        "jacobiWeak": enc(report.jacobi_weak),
        "greenspan": enc(report.greenspan),
        "bezoutDual": enc(report.bezout_dual),
        "relations": list(report.relations),
    }
