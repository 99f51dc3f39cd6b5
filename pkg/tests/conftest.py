"""Shared fixtures and random-instance generators."""

from __future__ import annotations

import random

import pytest

from jacobibound import NEG_INF, OrderMatrix, has_finite_transversal


# The worked 3x3 example: order matrix of (x1'' - x2', x2'' - x3, x3' - x2).
PAPER_ROWS = [[2, 1, None], [None, 2, 0], [None, 0, 1]]

# Second worked system: (x1'' + x2'' + x3'', x2', x2 + x3).
SECOND_ROWS = [[2, 2, 2], [None, 1, None], [None, 0, 0]]


@pytest.fixture
def paper_matrix() -> OrderMatrix:
    return OrderMatrix.from_rows(PAPER_ROWS)


@pytest.fixture
def second_matrix() -> OrderMatrix:
    return OrderMatrix.from_rows(SECOND_ROWS)


def random_matrix(
    rng: random.Random,
    n: int,
    neg_prob: float = 0.3,
    max_entry: int = 5,
    require_transversal: bool = True,
) -> OrderMatrix:
    """Random order matrix; resamples until a finite transversal exists."""
    while True:
        rows = [
            [
                None if rng.random() < neg_prob else rng.randint(0, max_entry)
                for _ in range(n)
            ]
            for _ in range(n)
        ]
        A = OrderMatrix.from_rows(rows)
        if not require_transversal or has_finite_transversal(A):
            return A


def random_finite_matrix(rng: random.Random, n: int, max_entry: int = 5) -> OrderMatrix:
    return OrderMatrix.from_rows(
        [[rng.randint(0, max_entry) for _ in range(n)] for _ in range(n)]
    )
