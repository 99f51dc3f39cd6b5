"""Command-line surface.

One binary with subcommands; all behavior is flag-driven (no environment
variables) and `--json` output is byte-stable across runs.  Exit codes:
0 success, 1 usage or parse errors, 2 degenerate input (no finite
transversal, stalled attachment, and the like).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .bounds import BoundsReport, bounds_report, bounds_to_json_dict
from .canon import (
    CanonResult,
    canon_to_json_dict,
    minimal_canon,
    trace_to_json_list,
)
from .diffpoly import (
    DiffSystem,
    JacobianStatus,
    ReductionPlan,
    format_polynomial,
    jacobian_determinant_status,
    jacobian_status_to_json_dict,
    order_matrix_of,
    parse_system,
    reduction_plan_to_json_dict,
    shortest_reduction_plan,
    truncated_jacobian,
)
from .errors import (
    DegenerateColumnError,
    DimensionError,
    GuardError,
    InfeasibilityError,
    JacobiboundError,
    ParseError,
    StructuralDegeneracyError,
)
from .ordermatrix import (
    NEG_INF,
    OrderMatrix,
    brute_force_jacobi_number,
    matrix_from_json_text,
    to_weak,
)
from .resolvent import ResolventPlan, plan_to_json_dict, resolvent_orders


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage problems, not argparse's 2
        raise _UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jacobibound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    matrix = sub.add_parser("matrix", help="operate on order-matrix JSON files")
    matrix_sub = matrix.add_subparsers(dest="subcommand", required=True)
    m_analyze = matrix_sub.add_parser("analyze", help="canon, Jacobi number and bounds")
    m_analyze.add_argument("file")
    m_analyze.add_argument("--convention", choices=("strong", "weak"), default="strong")
    m_analyze.add_argument("--oracle", action="store_true",
                           help="attach the brute-force permutation scan and require agreement")
    m_analyze.add_argument("--trace", action="store_true")
    m_analyze.add_argument("--json", action="store_true")
    m_analyze.set_defaults(func=_cmd_matrix_analyze)

    system = sub.add_parser("system", help="operate on differential-system text files")
    system_sub = system.add_subparsers(dest="subcommand", required=True)
    s_analyze = system_sub.add_parser("analyze", help="order matrix, canon and bounds")
    s_analyze.add_argument("file")
    s_analyze.add_argument("--check-jacobian", action="store_true",
                           help="evaluate the truncated Jacobian nonvanishing check")
    s_analyze.add_argument("--oracle", action="store_true")
    s_analyze.add_argument("--json", action="store_true")
    s_analyze.set_defaults(func=_cmd_system_analyze)

    res = sub.add_parser("resolvent", help="differentiation orders for a resolvent")
    res.add_argument("file", help="matrix JSON or system text file")
    res.add_argument("--variable", required=True,
                     help="primitive-element variable (name for systems, 1-based index otherwise)")
    res.add_argument("--json", action="store_true")
    res.set_defaults(func=_cmd_resolvent)

    red = sub.add_parser("reduction", help="shortest-reduction prolongation plan")
    red.add_argument("file", help="system text file")
    red.add_argument("--json", action="store_true")
    red.set_defaults(func=_cmd_reduction)

    bnd = sub.add_parser("bounds", help="strong/weak Jacobi, Greenspan and Bezout-dual bounds")
    bnd.add_argument("file", help="matrix JSON or system text file")
    bnd.add_argument("--json", action="store_true")
    bnd.set_defaults(func=_cmd_bounds)

    return parser


# ---------------------------------------------------------------------------
# Input loading
# ---------------------------------------------------------------------------


def _read_bytes(path: str) -> bytes:
    return Path(path).read_bytes()


def _named_parse_error(path: str, exc: ParseError) -> ParseError:
    return ParseError(f"{path}: {exc}")


def _load_matrix(path: str) -> tuple[OrderMatrix, str]:
    data = _read_bytes(path)
    try:
        A = matrix_from_json_text(data.decode("utf-8"))
    except ParseError as exc:
        raise _named_parse_error(path, exc) from exc
    return A, hashlib.sha256(data).hexdigest()


def _load_system(path: str) -> tuple[DiffSystem, str]:
    data = _read_bytes(path)
    try:
        system = parse_system(data.decode("utf-8"))
    except ParseError as exc:
        raise _named_parse_error(path, exc) from exc
    return system, hashlib.sha256(data).hexdigest()


def _sniff_load(path: str) -> tuple[OrderMatrix, DiffSystem | None, str]:
    """Load either input kind; returns (matrix, system or None, digest)."""
    data = _read_bytes(path)
    text = data.decode("utf-8")
    digest = hashlib.sha256(data).hexdigest()
    try:
        if text.lstrip().startswith("{"):
            return matrix_from_json_text(text), None, digest
        system = parse_system(text)
    except ParseError as exc:
        raise _named_parse_error(path, exc) from exc
    return order_matrix_of(system), system, digest


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    return "-inf" if v is NEG_INF else str(v)


def _underlines(A: OrderMatrix, starred: Sequence[tuple[int, int]]) -> set[tuple[int, int]]:
    out: set[tuple[int, int]] = set()
    for i, j in starred:
        v = A.entries[i][j]
        for r in range(A.n):
            if r != i and A.entries[r][j] == v:
                out.add((r, j))
    return out


def render_matrix(
    A: OrderMatrix,
    starred: Sequence[tuple[int, int]] = (),
    underline: bool = False,
    indent: str = "  ",
) -> str:
    """Paper-style layout: `*` marks starred entries, `_` underlined ties."""
    stars = set(starred)
    under = _underlines(A, tuple(stars)) if underline else set()
    cells = []
    for i, row in enumerate(A.entries):
        line = []
        for j, v in enumerate(row):
            mark = "*" if (i, j) in stars else "_" if (i, j) in under else " "
            line.append(_fmt(v) + mark)
        cells.append(line)
    width = max(len(c) for row in cells for c in row)
    return "\n".join(indent + " ".join(c.rjust(width) for c in row) for row in cells)


def _render_canon(canon: CanonResult, raised: OrderMatrix) -> list[str]:
    lines = ["canon (rows raised by ell):"]
    lines.append(render_matrix(raised, canon.starred, underline=True))
    lines.append(f"ell    = {canon.ell}")
    lines.append(f"Lambda = {canon.Lambda}")
    lines.append(f"alpha  = {canon.alpha}")
    lines.append("beta   = (" + ", ".join(_fmt(b) for b in canon.beta) + ")")
    lines.append(f"Jacobi number J = {_fmt(canon.jacobi_number)}")
    lines.append(
        "starred: " + " ".join(f"({i + 1},{j + 1})" for i, j in canon.starred)
    )
    return lines


def _render_bounds(report: BoundsReport) -> list[str]:
    lines = ["bounds:"]
    lines.append(f"  jacobi strong : {_fmt(report.jacobi_strong)}")
    lines.append(f"  jacobi weak   : {_fmt(report.jacobi_weak)}")
    g = "unavailable" if report.greenspan is None else _fmt(report.greenspan)
    lines.append(f"  greenspan     : {g}")
    lines.append(f"  bezout dual   : {_fmt(report.bezout_dual)}")
    if report.relations:
        lines.append("  relations     : " + "; ".join(report.relations))
    for note in report.notes:
        lines.append(f"  note: {note}")
    return lines


def _render_trace(canon: CanonResult, A: OrderMatrix) -> list[str]:
    lines = ["trace:"]
    cumulative = [0] * A.n
    for k, step in enumerate(canon.trace, start=1):
        for i, inc in enumerate(step.row_increments):
            cumulative[i] += inc
        desc = f"  step {k}: {step.kind.value}"
        if any(step.row_increments):
            desc += f", row increments {step.row_increments}"
        lines.append(desc)
        if step.classes is not None:
            c = step.classes
            lines.append(
                "          classes: first="
                + _rows1(c.first) + " second=" + _rows1(c.second)
                + " third=" + _rows1(c.third) + " lower=" + _rows1(c.lower)
            )
        if any(step.row_increments):
            lines.append(render_matrix(A.add_to_rows(cumulative), indent="      "))
    return lines


def _rows1(rows: Sequence[int]) -> str:
    return "{" + ", ".join(str(r + 1) for r in rows) + "}"


def _print_json(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _order_json(v) -> int | None:
    return None if v is NEG_INF else v


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisReport:
    """Everything one analyze invocation decided, ready to serialize."""

    input_digest: str
    command: str
    convention: str
    matrix: OrderMatrix
    canon: CanonResult
    bounds: BoundsReport
    truncated_jacobian_status: JacobianStatus
    system: DiffSystem | None = None
    oracle_jacobi: object | None = None
    include_trace: bool = False

    def to_json_dict(self) -> dict:
        variables = self.system.variables if self.system is not None else None
        out: dict = {
            "inputDigest": self.input_digest,
            "command": self.command,
            "convention": self.convention,
            "n": self.matrix.n,
            "canon": canon_to_json_dict(self.canon),
            "bounds": bounds_to_json_dict(self.bounds),
            "truncatedJacobianStatus": jacobian_status_to_json_dict(
                self.truncated_jacobian_status, variables
            ),
        }
        if self.oracle_jacobi is not None:
            out["oracle"] = {
                "jacobiNumber": _order_json(self.oracle_jacobi),
                "matches": self.oracle_jacobi == self.canon.jacobi_number,
            }
        if self.include_trace:
            out["trace"] = trace_to_json_list(self.canon.trace)
        return out

    def render(self) -> str:
        lines = [f"{self.command} ({self.convention} convention), n = {self.matrix.n}"]
        lines.append(f"input sha256: {self.input_digest}")
        lines.append("order matrix:")
        lines.append(render_matrix(self.matrix))
        raised = self.matrix.add_to_rows(self.canon.ell)
        lines.extend(_render_canon(self.canon, raised))
        lines.extend(_render_bounds(self.bounds))
        status = self.truncated_jacobian_status
        if status.kind != "NotComputed":
            variables = self.system.variables if self.system is not None else None
            lines.append(
                "truncated jacobian: "
                + json.dumps(jacobian_status_to_json_dict(status, variables))
            )
        if self.oracle_jacobi is not None:
            lines.append(f"oracle (brute force): J = {_fmt(self.oracle_jacobi)} — matches")
        if self.include_trace:
            lines.extend(_render_trace(self.canon, self.matrix))
        return "\n".join(lines) + "\n"


def _analyze(
    command: str,
    matrix: OrderMatrix,
    digest: str,
    *,
    convention: str = "strong",
    system: DiffSystem | None = None,
    check_jacobian: bool = False,
    oracle: bool = False,
    trace: bool = False,
    as_json: bool = False,
) -> int:
    canon = minimal_canon(matrix)
    report_bounds = bounds_report(matrix)
    status = JacobianStatus.not_computed()
    if check_jacobian and system is not None:
        grid = truncated_jacobian(system, canon)
        status = jacobian_determinant_status(grid)
    oracle_value = None
    if oracle:
        oracle_value = brute_force_jacobi_number(matrix)
        if oracle_value != canon.jacobi_number:
            sys.stderr.write(
                f"oracle mismatch: brute force found {_fmt(oracle_value)}, "
                f"algorithm found {_fmt(canon.jacobi_number)}\n"
            )
            return 1
    report = AnalysisReport(
        input_digest=digest,
        command=command,
        convention=convention,
        matrix=matrix,
        canon=canon,
        bounds=report_bounds,
        truncated_jacobian_status=status,
        system=system,
        oracle_jacobi=oracle_value,
        include_trace=trace,
    )
    if as_json:
        _print_json(report.to_json_dict())
    else:
        sys.stdout.write(report.render())
    return 0


def _cmd_matrix_analyze(args) -> int:
    A, digest = _load_matrix(args.file)
    if args.convention == "weak":
        A = to_weak(A)
    return _analyze(
        "matrix analyze",
        A,
        digest,
        convention=args.convention,
        oracle=args.oracle,
        trace=args.trace,
        as_json=args.json,
    )


def _cmd_system_analyze(args) -> int:
    system, digest = _load_system(args.file)
    return _analyze(
        "system analyze",
        order_matrix_of(system),
        digest,
        system=system,
        check_jacobian=args.check_jacobian,
        oracle=args.oracle,
        as_json=args.json,
    )


def _resolve_variable(spec: str, system: DiffSystem | None, n: int) -> int:
    if system is not None and spec in system.variables:
        return system.variables.index(spec)
    try:
        idx = int(spec)
    except ValueError:
        raise _UsageError(
            f"unknown variable {spec!r}"
            + ("" if system is None else f"; known: {', '.join(system.variables)}")
        ) from None
    if not 1 <= idx <= n:
        raise _UsageError(f"variable index {idx} out of range 1..{n}")
    return idx - 1


def _cmd_resolvent(args) -> int:
    A, system, digest = _sniff_load(args.file)
    j0 = _resolve_variable(args.variable, system, A.n)
    canon = minimal_canon(A)
    plan = resolvent_orders(A, canon, j0)
    if args.json:
        _print_json(plan_to_json_dict(plan))
        return 0
    name = system.variables[j0] if system is not None else f"x{j0 + 1}"
    lines = [
        f"resolvent plan for {name} (column {j0 + 1}), anchored at row {plan.i0 + 1}",
        "differentiate "
        + ", ".join(
            f"equation {i + 1} {h} time{'s' if h != 1 else ''}"
            for i, h in enumerate(plan.h)
        ),
        f"resolvent order J = {_fmt(plan.resolvent_order)}",
        "matrix after attachment closure:",
        render_matrix(plan.a_double_prime, canon.starred, underline=True),
        "matrix after the final uniform raise:",
        render_matrix(plan.a_triple_prime, canon.starred, underline=True),
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_reduction(args) -> int:
    system, digest = _load_system(args.file)
    canon = minimal_canon(order_matrix_of(system))
    plan = shortest_reduction_plan(system, canon)
    if args.json:
        _print_json(reduction_plan_to_json_dict(plan, system.variables))
        return 0
    lines = [f"shortest reduction plan: ell = {plan.ell}"]
    for i, (name, chain) in enumerate(zip(system.equation_names, plan.prolonged)):
        top = plan.ell[i]
        lines.append(f"  {name}: derivatives 0..{top} ({top + 1} equation{'s' if top else ''})")
        for k, poly in enumerate(chain):
            lines.append(f"    d^{k}: {format_polynomial(poly, system.variables)} = 0")
    from .diffpoly import format_derivative  # local import to avoid cycle noise

    solved = ", ".join(format_derivative(dv, system.variables) for dv in plan.solved_set)
    lines.append(f"solved derivatives: {solved}")
    cutoffs = ", ".join(
        f"{name} below {c}" for name, c in zip(system.variables, plan.known_set_bound)
    )
    lines.append(f"parameter cutoffs: {cutoffs}")
    lines.append(f"order total J = {_fmt(plan.order_total)}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_bounds(args) -> int:
    A, _system, digest = _sniff_load(args.file)
    report = bounds_report(A)
    if args.json:
        _print_json(bounds_to_json_dict(report))
    else:
        sys.stdout.write("\n".join(_render_bounds(report)) + "\n")
    return 0 if report.jacobi_strong is not NEG_INF else 2


# ---------------------------------------------------------------------------
# Entry points and bundled fixtures
# ---------------------------------------------------------------------------


def golden_fixtures() -> dict[str, Path]:
    """Bundled example inputs, byte-identical across releases."""
    base = resources.files("jacobibound") / "fixtures"
    out: dict[str, Path] = {}
    for item in sorted(base.iterdir(), key=lambda p: p.name):
        if item.is_file():
            out[item.name] = Path(str(item))
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help and argparse internals
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (StructuralDegeneracyError, InfeasibilityError, DegenerateColumnError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (GuardError, DimensionError, JacobiboundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
