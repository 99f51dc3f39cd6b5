import itertools
import random

import pytest

from jacobibound import (
    NEG_INF,
    CanonResult,
    OrderMatrix,
    StepKind,
    TraceStep,
    brute_force_jacobi_number,
    brute_force_minimal_canon,
    is_canon,
    isoperimetric_matrix,
    jacobi_number,
    minimal_canon,
    prepare,
)
from jacobibound.errors import DimensionError, GuardError, StructuralDegeneracyError

from conftest import random_matrix


def test_prepare_paper_matrix_is_untouched(paper_matrix):
    prepared, inc = prepare(paper_matrix)
    assert inc == (0, 0, 0)
    assert prepared == paper_matrix


def test_prepare_second_matrix(second_matrix):
    prepared, inc = prepare(second_matrix)
    assert inc == (0, 1, 2)
    assert prepared == OrderMatrix.from_rows(
        [[2, 2, 2], [None, 2, None], [None, 2, 2]]
    )


def test_prepare_zero_matrix():
    A = OrderMatrix.from_rows([[0] * 4] * 4)
    prepared, inc = prepare(A)
    assert inc == (0, 0, 0, 0)
    assert prepared == A


def test_prepare_rejects_empty_row():
    with pytest.raises(StructuralDegeneracyError):
        prepare(OrderMatrix.from_rows([[1, 2], [None, None]]))


def test_prepare_gives_every_row_a_column_maximum():
    rng = random.Random(77)
    for _ in range(200):
        A = random_matrix(rng, rng.randint(1, 6), require_transversal=False)
        if any(not A.finite_columns(i) for i in range(A.n)):
            continue
        prepared, _ = prepare(A)
        for i in range(prepared.n):
            assert any(
                prepared.entries[i][j] == prepared.column_max(j)
                for j in prepared.finite_columns(i)
            )


def test_is_canon_examples(paper_matrix, second_matrix):
    assert is_canon(paper_matrix, (0, 0, 0))
    assert is_canon(second_matrix, (0, 1, 2))
    assert not is_canon(second_matrix, (0, 0, 0))


def test_is_canon_validates_input(paper_matrix):
    with pytest.raises(DimensionError):
        is_canon(paper_matrix, (0, 0))
    with pytest.raises(ValueError):
        is_canon(paper_matrix, (0, -1, 0))


def test_minimal_canon_paper(paper_matrix):
    res = minimal_canon(paper_matrix)
    assert res.ell == (0, 0, 0)
    assert res.Lambda == 0
    assert res.alpha == (0, 0, 0)
    assert res.beta == (2, 2, 1)
    assert res.jacobi_number == 5
    assert res.starred == ((0, 0), (1, 1), (2, 2))


def test_minimal_canon_second(second_matrix):
    res = minimal_canon(second_matrix)
    assert res.ell == (0, 1, 2)
    assert res.jacobi_number == 3
    assert res.alpha == (2, 1, 0)
    assert res.beta == (0, 0, 0)


def test_minimal_canon_isoperimetric():
    res = minimal_canon(isoperimetric_matrix((1, 2)))
    assert res.ell == (1, 0)
    assert res.jacobi_number == 6


def test_minimal_canon_rejects_degenerate_with_witness():
    with pytest.raises(StructuralDegeneracyError) as info:
        minimal_canon(OrderMatrix.from_rows([[0, None], [0, None]]))
    err = info.value
    assert err.rows == (0, 1)
    assert err.cols == (0,)
    assert "rows {1, 2}" in str(err)


def test_jacobi_number_returns_neg_inf_when_degenerate():
    assert jacobi_number(OrderMatrix.from_rows([[0, None], [0, None]])) is NEG_INF


def test_brute_force_minimal_canon_examples(paper_matrix, second_matrix):
    assert brute_force_minimal_canon(paper_matrix, 3) == (0, 0, 0)
    assert brute_force_minimal_canon(second_matrix, 4) == (0, 1, 2)
    assert brute_force_minimal_canon(OrderMatrix.from_rows([[0]]), 0) == (0,)


def test_brute_force_minimal_canon_guards():
    big = OrderMatrix.from_rows([[0] * 5] * 5)
    with pytest.raises(GuardError):
        brute_force_minimal_canon(big, 2)
    small = OrderMatrix.from_rows([[0]])
    with pytest.raises(GuardError):
        brute_force_minimal_canon(small, 7)
    degenerate = OrderMatrix.from_rows([[0, None], [0, None]])
    with pytest.raises(ValueError, match="no canon"):
        brute_force_minimal_canon(degenerate, 2)


def test_oracle_equality_on_random_matrices():
    rng = random.Random(101)
    for _ in range(250):
        n = rng.randint(2, 7)
        A = random_matrix(rng, n)
        assert minimal_canon(A).jacobi_number == brute_force_jacobi_number(A)


def test_canon_property_and_beta_consistency():
    rng = random.Random(103)
    for _ in range(200):
        A = random_matrix(rng, rng.randint(2, 6))
        res = minimal_canon(A)
        assert is_canon(A, res.ell)
        for j in range(A.n):
            vals = [
                A.entries[i][j] - res.alpha[i]
                for i in range(A.n)
                if A.entries[i][j] is not NEG_INF
            ]
            expected = max(vals) if vals else NEG_INF
            assert res.beta[j] == expected
        if all(b is not NEG_INF for b in res.beta):
            assert res.jacobi_number == sum(res.alpha) + sum(res.beta)


def test_componentwise_minimality_on_random_matrices():
    rng = random.Random(107)
    for _ in range(60):
        n = rng.randint(2, 4)
        A = random_matrix(rng, n)
        res = minimal_canon(A)
        top = res.Lambda + 2
        for lam in itertools.product(range(top + 1), repeat=n):
            if is_canon(A, lam):
                assert all(e <= l for e, l in zip(res.ell, lam)), (A.entries, res.ell, lam)


def test_minimal_canon_is_idempotent_on_raised_matrix():
    rng = random.Random(109)
    for _ in range(120):
        A = random_matrix(rng, rng.randint(2, 6))
        res = minimal_canon(A)
        again = minimal_canon(A.add_to_rows(res.ell))
        assert again.ell == (0,) * A.n


def test_trace_replay_reconstructs_raised_matrix():
    rng = random.Random(113)
    for _ in range(120):
        A = random_matrix(rng, rng.randint(2, 6))
        res = minimal_canon(A)
        cumulative = [0] * A.n
        for step in res.trace:
            for i, inc in enumerate(step.row_increments):
                cumulative[i] += inc
        assert tuple(cumulative) == res.ell
        assert A.add_to_rows(cumulative) == A.add_to_rows(res.ell)


def test_trace_structure():
    rng = random.Random(127)
    for _ in range(60):
        A = random_matrix(rng, rng.randint(2, 5))
        res = minimal_canon(A)
        kinds = [step.kind for step in res.trace]
        assert kinds[0] is StepKind.PREPARATION
        assert kinds.count(StepKind.AUGMENT) == A.n
        for step in res.trace:
            if step.kind is StepKind.RAISE_THIRD_CLASS:
                assert step.classes is not None
                assert any(inc > 0 for inc in step.row_increments)
                members = sorted(
                    step.classes.first
                    + step.classes.second
                    + step.classes.third
                    + step.classes.lower
                )
                assert members == list(range(A.n))
            else:
                assert step.classes is None


def test_starred_entries_are_column_maxima_of_raised_matrix():
    rng = random.Random(131)
    for _ in range(100):
        A = random_matrix(rng, rng.randint(2, 6))
        res = minimal_canon(A)
        raised = A.add_to_rows(res.ell)
        for i, j in res.starred:
            assert raised.entries[i][j] == raised.column_max(j)


def test_trace_step_validation():
    with pytest.raises(ValueError):
        TraceStep(StepKind.RAISE_THIRD_CLASS, (0, 0))
    with pytest.raises(ValueError):
        TraceStep(StepKind.PREPARATION, (0, -1))


def test_canon_result_validation():
    with pytest.raises(ValueError):
        CanonResult(
            ell=(0, 1),
            Lambda=2,  # should be 1
            alpha=(1, 0),
            beta=(0, 0),
            jacobi_number=1,
            starred=((0, 0), (1, 1)),
            trace=(),
        )
