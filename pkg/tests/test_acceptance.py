"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here.
"""

import itertools
import random
import time
from fractions import Fraction

from jacobibound import (
    NEG_INF,
    DerivativeVar,
    DiffPolynomial,
    OrderMatrix,
    PolyMatrix,
    brute_force_jacobi_number,
    determinant_at,
    forma_elegans_orders,
    format_polynomial,
    greenspan,
    is_canon,
    linear_system_order,
    minimal_canon,
    order_matrix_of,
    parse_polynomial,
    parse_system,
    resolvent_orders,
    shortest_reduction_plan,
    total_derivative,
    truncated_jacobian,
)

from conftest import PAPER_ROWS, SECOND_ROWS, random_finite_matrix, random_matrix

PAPER_SYSTEM = "u1: x1'' - x2' = 0\nu2: x2'' - x3 = 0\nu3: x3' - x2 = 0\n"
SECOND_SYSTEM = "u1: x1'' + x2'' + x3'' = 0\nu2: x2' = 0\nu3: x2 + x3 = 0\n"


def _report(k: int, ok: bool, desc: str) -> None:
    print(f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} - {desc}")
    assert ok, f"criterion {k} failed: {desc}"


def test_criterion_1_paper_golden_example():
    start = time.perf_counter()
    A = OrderMatrix.from_rows(PAPER_ROWS)
    canon = minimal_canon(A)
    plan = resolvent_orders(A, canon, 0)
    elapsed = time.perf_counter() - start
    ok = (
        canon.jacobi_number == 5
        and canon.ell == (0, 0, 0)
        and canon.beta == (2, 2, 1)
        and plan.h == (3, 2, 1)
        and plan.a_double_prime
        == OrderMatrix.from_rows([[4, 3, None], [None, 3, 1], [None, 0, 1]])
        and plan.a_triple_prime
        == OrderMatrix.from_rows([[5, 4, None], [None, 4, 2], [None, 1, 2]])
        and elapsed < 1.0
    )
    _report(1, ok, f"golden example exact (J=5, h=(3,2,1)); runtime {elapsed:.3f}s < 1s")


def test_criterion_2_permutation_oracle_equivalence():
    rng = random.Random(12001)
    start = time.perf_counter()
    violations = 0
    for _ in range(1000):
        n = rng.randint(2, 7)
        A = random_matrix(rng, n, neg_prob=1 / 3, max_entry=5)
        if minimal_canon(A).jacobi_number != brute_force_jacobi_number(A):
            violations += 1
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 60.0
    _report(2, ok, f"1000 random matrices, {violations} mismatches, {elapsed:.1f}s < 60s")


def test_criterion_3_minimality_of_ell():
    rng = random.Random(12003)
    violations = 0
    for _ in range(500):
        n = rng.randint(2, 4)
        A = random_matrix(rng, n, neg_prob=1 / 3, max_entry=5)
        res = minimal_canon(A)
        if not is_canon(A, res.ell):
            violations += 1
            continue
        top = res.Lambda + 2
        for lam in itertools.product(range(top + 1), repeat=n):
            if is_canon(A, lam) and any(l < e for l, e in zip(lam, res.ell)):
                violations += 1
                break
    _report(3, violations == 0, f"500 exhaustive box searches, {violations} violations")


def test_criterion_4_forma_elegans_cross_oracle():
    rng = random.Random(12005)
    violations = 0
    for _ in range(500):
        n = rng.randint(2, 6)
        A = random_finite_matrix(rng, n, max_entry=5)
        canon = minimal_canon(A)
        for j0 in range(n):
            if resolvent_orders(A, canon, j0).h != forma_elegans_orders(A, j0):
                violations += 1
    _report(4, violations == 0, f"500 matrices, every column, {violations} mismatches")


def test_criterion_5_second_paper_system():
    system = parse_system(SECOND_SYSTEM)
    A = order_matrix_of(system)
    canon = minimal_canon(A)
    grid = truncated_jacobian(system, canon)
    det = determinant_at(grid, {})
    plan = shortest_reduction_plan(system, canon)
    x2 = DiffPolynomial.variable(1, 0)
    x3 = DiffPolynomial.variable(2, 0)
    # normal form x1'' = -x2'' - x3'', x2' = 0, x3 = -x2: the prolonged set
    # contains u2' = x2'' and u3 = x2 + x3, and differentiates u2 once, u3 twice
    ok = (
        canon.ell == (0, 1, 2)
        and canon.jacobi_number == 3
        and det == 1
        and plan.ell == (0, 1, 2)
        and plan.prolonged[1][1] == DiffPolynomial.variable(1, 2)
        and plan.prolonged[2][0] == x2 + x3
    )
    _report(5, ok, f"ell=(0,1,2), J=3, |grid|={det}, u2 once / u3 twice")


def test_criterion_6_truncated_jacobian_identity():
    system = parse_system(PAPER_SYSTEM)
    grid = truncated_jacobian(system, minimal_canon(order_matrix_of(system)))
    ident = all(
        grid[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3)
    )
    points = (
        {},
        {DerivativeVar(0, 2): 7, DerivativeVar(1, 1): -2},
        {DerivativeVar(2, 0): Fraction(1, 3)},
    )
    dets = [determinant_at(grid, p) for p in points]
    ok = ident and dets == [1, 1, 1]
    _report(6, ok, f"identity grid, determinants {dets} at three points")


def test_criterion_7_degree_of_determinant_oracle():
    char_matrix = PolyMatrix.from_coeff_lists(
        [
            [[0, 0, 1], [0, -1], []],
            [[], [0, 0, 1], [-1]],
            [[], [-1], [0, 1]],
        ]
    )
    paper_ok = linear_system_order(char_matrix) == 5
    rng = random.Random(12007)
    violations = 0
    for _ in range(200):
        n = rng.randint(1, 5)
        rows = []
        for _ in range(n):
            row = []
            for _ in range(n):
                if rng.random() < 0.15:
                    row.append([])
                else:
                    deg = rng.randint(0, 4)
                    row.append(
                        [rng.randint(-3, 3) for _ in range(deg)]
                        + [rng.choice([-3, -2, -1, 1, 2, 3])]
                    )
            rows.append(row)
        P = PolyMatrix.from_coeff_lists(rows)
        J = brute_force_jacobi_number(P.degree_matrix())
        got = linear_system_order(P)
        if J is NEG_INF:
            if got is not NEG_INF:
                violations += 1
        elif got is not NEG_INF and got > J:
            violations += 1
    ok = paper_ok and violations == 0
    _report(7, ok, f"characteristic matrix degree 5 = J; {violations} bound violations in 200")


def test_criterion_8_two_variable_greenspan_coincidence():
    rng = random.Random(12011)
    violations = sum(
        1
        for _ in range(1000)
        if greenspan(A := random_finite_matrix(rng, 2, max_entry=5))
        != brute_force_jacobi_number(A)
    )
    _report(8, violations == 0, f"1000 random 2x2 matrices, {violations} violations")


def test_criterion_9_cubic_scaling():
    rng = random.Random(12013)

    def median_time(n: int) -> float:
        times = []
        for _ in range(5):
            A = OrderMatrix.from_rows(
                [[rng.randint(0, 9) for _ in range(n)] for _ in range(n)]
            )
            start = time.perf_counter()
            minimal_canon(A)
            times.append(time.perf_counter() - start)
        return sorted(times)[2]

    t256 = median_time(256)
    t512 = median_time(512)
    ratio = t512 / t256
    ok = ratio <= 12.0 and t512 < 5.0
    _report(9, ok, f"t(256)={t256:.3f}s t(512)={t512:.3f}s ratio={ratio:.2f} <= 12")


def test_criterion_10_differential_operator_properties():
    rng = random.Random(12017)
    names = ("x1", "x2", "x3")

    def rand_poly():
        p = DiffPolynomial.zero()
        for _ in range(rng.randint(1, 4)):
            factors = [
                (DerivativeVar(rng.randrange(3), rng.randint(0, 4)), rng.randint(1, 2))
                for _ in range(rng.randint(0, 3))
            ]
            coeff = Fraction(rng.choice([-5, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
            p = p + DiffPolynomial.monomial(coeff, factors)
        return p

    violations = 0
    for _ in range(500):
        p, q = rand_poly(), rand_poly()
        if total_derivative(p * q) != total_derivative(p) * q + p * total_derivative(q):
            violations += 1
        j, k = rng.randrange(3), rng.randint(1, 4)
        v, v_prev = DerivativeVar(j, k), DerivativeVar(j, k - 1)
        lhs = total_derivative(p).partial_derivative(v)
        rhs = total_derivative(p.partial_derivative(v)) + p.partial_derivative(v_prev)
        if lhs != rhs:
            violations += 1
        order = p.order_in(j)
        if order is not NEG_INF and total_derivative(p).order_in(j) != order + 1:
            violations += 1
        if parse_polynomial(format_polynomial(p), names) != p:
            violations += 1
    _report(10, violations == 0, f"500 random polynomials, {violations} violations")
