"""Exact determinant of a rational matrix (fraction-free elimination)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def fraction_determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant via Bareiss elimination after clearing denominators.

    Row-wise denominator clearing keeps the elimination in integers, where
    Bareiss's divisions are exact; the accumulated scale is divided out at
    the end.
    """
    n = len(rows)
    scale = 1
    m: list[list[int]] = []
    for row in rows:
        if len(row) != n:
            raise ValueError("determinant needs a square matrix")
        fracs = [Fraction(v) for v in row]
        denom = lcm(*(f.denominator for f in fracs)) if fracs else 1
        scale *= denom
        m.append([int(f * denom) for f in fracs])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return Fraction(sign * m[n - 1][n - 1], scale)
