"""Exact structural-analysis toolkit for square ODE systems.

Computes the Jacobi number (maximal transversal sum of the order matrix)
via the minimal-canon algorithm, the truncated Jacobian criterion for the
bound being attained, shortest-reduction and resolvent prolongation plans,
and the Greenspan / weak / Bezout-dual comparison bounds — with brute-force
oracles for every combinatorial result compiled in.
"""

from . import errors
from .bounds import (
    BoundsReport,
    PolyMatrix,
    bezout_dual,
    bounds_report,
    bounds_to_json_dict,
    greenspan,
    lando_weak_number,
    linear_system_order,
)
from .canon import (
    CanonResult,
    RowClasses,
    StepKind,
    TraceStep,
    brute_force_minimal_canon,
    canon_to_json_dict,
    is_canon,
    jacobi_number,
    minimal_canon,
    prepare,
    trace_to_json_list,
)
from .cli import AnalysisReport, golden_fixtures, main
from .diffpoly import (
    DerivativeVar,
    DiffPolynomial,
    DiffSystem,
    JacobianStatus,
    Ordering,
    ReductionPlan,
    determinant_at,
    format_derivative,
    format_polynomial,
    format_system,
    jacobi_order_compare,
    jacobian_determinant_status,
    order_in,
    order_matrix_of,
    parse_polynomial,
    parse_system,
    partial_derivative,
    resolvent_prolongation,
    shortest_reduction_plan,
    symbolic_determinant,
    total_derivative,
    truncated_jacobian,
)
from .ordermatrix import (
    NEG_INF,
    OrderMatrix,
    OrderValue,
    Permutation,
    brute_force_jacobi_number,
    has_finite_transversal,
    is_finite,
    isoperimetric_matrix,
    matrix_from_json_dict,
    matrix_from_json_text,
    matrix_to_json_dict,
    matrix_to_json_text,
    order_add,
    to_weak,
    transversal_sum,
)
from .resolvent import (
    ResolventPlan,
    forma_elegans_orders,
    plan_to_json_dict,
    resolvent_orders,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BoundsReport",
    "CanonResult",
    "DerivativeVar",
    "DiffPolynomial",
    "DiffSystem",
    "JacobianStatus",
    "NEG_INF",
    "OrderMatrix",
    "OrderValue",
    "Ordering",
    "Permutation",
    "PolyMatrix",
    "ReductionPlan",
    "ResolventPlan",
    "RowClasses",
    "StepKind",
    "TraceStep",
    "bezout_dual",
    "bounds_report",
    "bounds_to_json_dict",
    "brute_force_jacobi_number",
    "brute_force_minimal_canon",
    "canon_to_json_dict",
    "determinant_at",
    "errors",
    "forma_elegans_orders",
    "format_derivative",
    "format_polynomial",
    "format_system",
    "golden_fixtures",
    "greenspan",
    "has_finite_transversal",
    "is_canon",
    "is_finite",
    "isoperimetric_matrix",
    "jacobi_number",
    "jacobi_order_compare",
    "jacobian_determinant_status",
    "lando_weak_number",
    "linear_system_order",
    "main",
    "matrix_from_json_dict",
    "matrix_from_json_text",
    "matrix_to_json_dict",
    "matrix_to_json_text",
    "minimal_canon",
    "order_add",
    "order_in",
    "order_matrix_of",
    "parse_polynomial",
    "parse_system",
    "partial_derivative",
    "plan_to_json_dict",
    "prepare",
    "resolvent_orders",
    "resolvent_prolongation",
    "shortest_reduction_plan",
    "symbolic_determinant",
    "to_weak",
    "total_derivative",
    "trace_to_json_list",
    "transversal_sum",
    "truncated_jacobian",
]
