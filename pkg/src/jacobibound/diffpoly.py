"""Differential-polynomial front end.

Equations are exact multivariate polynomials in derivative variables
x_j^(k) with rational coefficients.  This module parses the line-oriented
system format, extracts order matrices, differentiates (total d/dt and
formal partials), builds the truncated Jacobian whose nonvanishing
certifies that the order bound is attained, and derives prolongation
plans: the shortest reduction (differentiate equation i at most ell_i
times) and the resolvent prolongation (0..h_i derivatives of each
equation).

Expression grammar (one equation per line, ``name: expression [= 0]``,
comments from ``#`` to end of line)::

    expr       := ['+'|'-'] term (('+'|'-') term)*
    term       := factor ('*' factor)*
    factor     := rational | derivative | '(' expr ')' | factor '^' integer
    derivative := ident primes | ident '^(' integer ')'
    rational   := integer ['/' integer]
    primes     := "'"*

``x^(k)`` (parenthesized) is the k-th derivative while ``x^k`` is a power;
primes are equivalent to ``^(count)``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._exact import fraction_determinant
from .canon import CanonResult
from .errors import (
    DegenerateColumnError,
    DimensionError,
    EvaluationError,
    GuardError,
    ParseError,
)
from .ordermatrix import NEG_INF, OrderMatrix, OrderValue


@dataclass(frozen=True, order=True)
class DerivativeVar:
    """The derivative x_var^(order); var is a 0-based variable index."""

    var: int
    order: int

    def __post_init__(self):
        if self.var < 0:
            raise ValueError(f"variable index must be >= 0, got {self.var}")
        if self.order < 0:
            raise ValueError(f"derivative order must be >= 0, got {self.order}")

    def __str__(self) -> str:
        return format_derivative(self)


def format_derivative(dv: DerivativeVar, variables: Sequence[str] | None = None) -> str:
    name = variables[dv.var] if variables is not None else f"x{dv.var + 1}"
    if dv.order == 0:
        return name
    if dv.order <= 3:
        return name + "'" * dv.order
    return f"{name}^({dv.order})"


# A monomial is a canonically sorted tuple of (DerivativeVar, exponent>0).
Monomial = tuple[tuple[DerivativeVar, int], ...]


def _normalize_monomial(factors: Iterable[tuple[DerivativeVar, int]]) -> Monomial:
    merged: dict[DerivativeVar, int] = {}
    for dv, exp in factors:
        if exp < 0:
            raise ValueError(f"exponents must be >= 0, got {exp}")
        if exp:
            merged[dv] = merged.get(dv, 0) + exp
    return tuple(sorted(merged.items()))


class DiffPolynomial:
    """Immutable polynomial in derivative variables over the rationals."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None):
        data: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                mono = _normalize_monomial(mono)
                c = data.get(mono, Fraction(0)) + Fraction(coeff)
                if c:
                    data[mono] = c
                else:
                    data.pop(mono, None)
        self._terms = data
        self._hash: int | None = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffPolynomial":
        return cls()

    @classmethod
    def constant(cls, value: Fraction | int) -> "DiffPolynomial":
        return cls({(): Fraction(value)})

    @classmethod
    def variable(cls, var: int, order: int = 0) -> "DiffPolynomial":
        return cls({((DerivativeVar(var, order), 1),): Fraction(1)})

    @classmethod
    def monomial(
        cls, coeff: Fraction | int, factors: Iterable[tuple[DerivativeVar, int]]
    ) -> "DiffPolynomial":
        return cls({_normalize_monomial(factors): Fraction(coeff)})

    # -- basic protocol ----------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @staticmethod
    def _coerce(other) -> "DiffPolynomial | None":
        if isinstance(other, DiffPolynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return DiffPolynomial.constant(other)
        return None

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"DiffPolynomial({format_polynomial(self)})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "DiffPolynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        data = dict(self._terms)
        for mono, coeff in o._terms.items():
            c = data.get(mono, Fraction(0)) + coeff
            if c:
                data[mono] = c
            else:
                data.pop(mono, None)
        out = DiffPolynomial.__new__(DiffPolynomial)
        out._terms = data
        out._hash = None
        return out

    __radd__ = __add__

    def __neg__(self) -> "DiffPolynomial":
        out = DiffPolynomial.__new__(DiffPolynomial)
        out._terms = {m: -c for m, c in self._terms.items()}
        out._hash = None
        return out

    def __sub__(self, other) -> "DiffPolynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "DiffPolynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "DiffPolynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        data: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                mono = _mul_monomials(m1, m2)
                c = data.get(mono, Fraction(0)) + c1 * c2
                if c:
                    data[mono] = c
                else:
                    data.pop(mono, None)
        out = DiffPolynomial.__new__(DiffPolynomial)
        out._terms = data
        out._hash = None
        return out

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "DiffPolynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"polynomial powers need an exponent >= 0, got {exponent!r}")
        result = DiffPolynomial.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    # -- calculus ---------------------------------------------------------

    def total_derivative(self) -> "DiffPolynomial":
        """d/dt by the Leibniz rule; each x_j^(k) maps to x_j^(k+1)."""
        acc = DiffPolynomial.zero()
        for mono, coeff in self._terms.items():
            for idx, (dv, exp) in enumerate(mono):
                factors = list(mono)
                factors[idx] = (dv, exp - 1)
                factors.append((DerivativeVar(dv.var, dv.order + 1), 1))
                acc = acc + DiffPolynomial.monomial(coeff * exp, factors)
        return acc

    def partial_derivative(self, v: DerivativeVar) -> "DiffPolynomial":
        """Formal partial, treating each derivative as an independent symbol."""
        data: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            for idx, (dv, exp) in enumerate(mono):
                if dv == v:
                    factors = list(mono)
                    factors[idx] = (dv, exp - 1)
                    key = _normalize_monomial(factors)
                    c = data.get(key, Fraction(0)) + coeff * exp
                    if c:
                        data[key] = c
                    else:
                        data.pop(key, None)
                    break
        return DiffPolynomial(data)

    def order_in(self, var: int) -> OrderValue:
        """Highest derivative order of the variable; NEG_INF when absent."""
        best: OrderValue = NEG_INF
        for mono in self._terms:
            for dv, _ in mono:
                if dv.var == var and (best is NEG_INF or dv.order > best):
                    best = dv.order
        return best

    def derivative_vars(self) -> frozenset[DerivativeVar]:
        return frozenset(dv for mono in self._terms for dv, _ in mono)

    def evaluate(self, point: Mapping[DerivativeVar, Fraction | int]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            prod = coeff
            for dv, exp in mono:
                if dv not in point:
                    raise EvaluationError(f"no value assigned to {dv}")
                prod *= Fraction(point[dv]) ** exp
            total += prod
        return total


def _mul_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    merged = dict(m1)
    for dv, exp in m2:
        merged[dv] = merged.get(dv, 0) + exp
    return tuple(sorted(merged.items()))


# -- spec-named functional aliases ---------------------------------------


def total_derivative(p: DiffPolynomial) -> DiffPolynomial:
    return p.total_derivative()


def partial_derivative(p: DiffPolynomial, v: DerivativeVar) -> DiffPolynomial:
    return p.partial_derivative(v)


def order_in(p: DiffPolynomial, var: int) -> OrderValue:
    return p.order_in(var)


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def format_polynomial(p: DiffPolynomial, variables: Sequence[str] | None = None) -> str:
    if p.is_zero:
        return "0"
    pieces: list[str] = []
    # variables ascending, constants last; deterministic for golden output
    for mono, coeff in sorted(p._terms.items(), key=lambda kv: (kv[0] == (), kv[0])):
        mag = abs(coeff)
        parts: list[str] = []
        if mag != 1 or not mono:
            parts.append(str(mag))
        for dv, exp in mono:
            factor = format_derivative(dv, variables)
            if exp >= 2:
                factor += f"^{exp}"
            parts.append(factor)
        body = "*".join(parts)
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"{' - ' if coeff < 0 else ' + '}{body}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Tokenizer and recursive-descent parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<primes>'+)"
    r"|(?P<sym>[-+*^()/=])"
)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # "int" | "name" | "primes" | "sym" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str, first_line: int = 1, first_col: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = first_line, first_col
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], variables: Sequence[str]):
        self.tokens = tokens
        self.pos = 0
        self.var_index = {name: i for i, name in enumerate(variables)}

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect_sym(self, sym: str) -> _Token:
        tok = self.peek()
        if tok.kind != "sym" or tok.text != sym:
            self.error(f"expected {sym!r}, got {tok.text!r}" if tok.text else f"expected {sym!r}")
        return self.advance()

    def expect_int(self, what: str) -> int:
        tok = self.peek()
        if tok.kind != "int":
            self.error(f"expected {what}, got {tok.text!r}" if tok.text else f"expected {what}")
        self.advance()
        return int(tok.text)

    def at_sym(self, sym: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind == "sym" and tok.text == sym

    # expr := ['+'|'-'] term (('+'|'-') term)*
    def parse_expr(self) -> DiffPolynomial:
        negate = False
        if self.at_sym("+") or self.at_sym("-"):
            negate = self.advance().text == "-"
        acc = self.parse_term()
        if negate:
            acc = -acc
        while self.at_sym("+") or self.at_sym("-"):
            op = self.advance().text
            term = self.parse_term()
            acc = acc - term if op == "-" else acc + term
        return acc

    # term := factor ('*' factor)*
    def parse_term(self) -> DiffPolynomial:
        acc = self.parse_factor()
        while self.at_sym("*"):
            self.advance()
            acc = acc * self.parse_factor()
        return acc

    # factor := primary ('^' integer)*
    def parse_factor(self) -> DiffPolynomial:
        acc = self.parse_primary()
        while self.at_sym("^"):
            self.advance()
            exp = self.expect_int("an integer exponent after '^'")
            acc = acc ** exp
        return acc

    def parse_primary(self) -> DiffPolynomial:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            value = Fraction(int(tok.text))
            if self.at_sym("/") and self.peek(1).kind == "int":
                self.advance()
                denom = self.expect_int("a denominator")
                if denom == 0:
                    self.error("zero denominator", tok)
                value = Fraction(int(tok.text), denom)
            return DiffPolynomial.constant(value)
        if tok.kind == "name":
            self.advance()
            if tok.text not in self.var_index:
                self.error(f"unknown variable {tok.text!r}", tok)
            var = self.var_index[tok.text]
            order = 0
            nxt = self.peek()
            if nxt.kind == "primes":
                self.advance()
                order = len(nxt.text)
            elif self.at_sym("^") and self.at_sym("(", 1):
                self.advance()
                self.advance()
                order = self.expect_int("an integer derivative order")
                self.expect_sym(")")
            return DiffPolynomial.variable(var, order)
        if self.at_sym("("):
            self.advance()
            inner = self.parse_expr()
            self.expect_sym(")")
            return inner
        self.error(
            f"expected a term, got {tok.text!r}" if tok.text else "unexpected end of input"
        )

    def parse_equation(self) -> DiffPolynomial:
        poly = self.parse_expr()
        if self.at_sym("="):
            eq = self.advance()
            rhs = self.peek()
            if rhs.kind != "int" or int(rhs.text) != 0:
                self.error("right-hand side must be 0", eq)
            self.advance()
        tok = self.peek()
        if tok.kind != "eof":
            self.error(f"unexpected {tok.text!r} after expression", tok)
        return poly


def parse_polynomial(text: str, variables: Sequence[str]) -> DiffPolynomial:
    """Parse one expression over the given variable names."""
    parser = _Parser(_tokenize(text), variables)
    poly = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        parser.error(f"unexpected {tok.text!r} after expression", tok)
    return poly


@dataclass(frozen=True)
class DiffSystem:
    """A square system: as many equations as variables."""

    variables: tuple[str, ...]
    equations: tuple[DiffPolynomial, ...]
    equation_names: tuple[str, ...]

    def __post_init__(self):
        if len(self.variables) != len(self.equations):
            raise DimensionError(
                f"system is not square: {len(self.equations)} equations, "
                f"{len(self.variables)} variables {list(self.variables)}"
            )
        if len(self.equation_names) != len(self.equations):
            raise DimensionError("one name per equation is required")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")

    @property
    def n(self) -> int:
        return len(self.variables)


def parse_system(text: str) -> DiffSystem:
    """Parse the line-oriented system format.

    Variables are collected in order of first occurrence across all
    equations; the system must come out square.
    """
    names: list[str] = []
    token_lines: list[list[_Token]] = []
    variables: list[str] = []
    seen_vars: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head, colon, expr_src = line.partition(":")
        if not colon:
            raise ParseError("expected 'name: expression'", lineno, 1)
        name = head.strip()
        if not _IDENT_RE.fullmatch(name):
            raise ParseError(f"invalid equation name {name!r}", lineno, 1)
        if name in names:
            raise ParseError(f"duplicate equation name {name!r}", lineno, 1)
        names.append(name)
        tokens = _tokenize(expr_src, first_line=lineno, first_col=len(head) + 2)
        token_lines.append(tokens)
        for tok in tokens:
            if tok.kind == "name" and tok.text not in seen_vars:
                seen_vars.add(tok.text)
                variables.append(tok.text)
    if not names:
        raise ParseError("no equations found")
    equations = tuple(
        _Parser(tokens, variables).parse_equation() for tokens in token_lines
    )
    if len(names) != len(variables):
        raise DimensionError(
            f"system is not square: {len(names)} equations, "
            f"{len(variables)} variables {variables}"
        )
    return DiffSystem(tuple(variables), equations, tuple(names))


def format_system(sys: DiffSystem) -> str:
    lines = [
        f"{name}: {format_polynomial(eq, sys.variables)} = 0"
        for name, eq in zip(sys.equation_names, sys.equations)
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structure extraction and the truncated Jacobian
# ---------------------------------------------------------------------------


def order_matrix_of(sys: DiffSystem) -> OrderMatrix:
    return OrderMatrix(
        tuple(
            tuple(eq.order_in(j) for j in range(sys.n)) for eq in sys.equations
        )
    )


Grid = tuple[tuple[DiffPolynomial, ...], ...]


def truncated_jacobian(sys: DiffSystem, canon: CanonResult) -> Grid:
    """Matrix of partials of u_i by x_j^(alpha_i + beta_j).

    When alpha_i + beta_j is negative the equation is free of the variable
    and the entry is zero.  Columns with beta_j = NEG_INF are degenerate.
    """
    if canon.n != sys.n:
        raise DimensionError("canon size does not match the system")
    bad = [j for j, b in enumerate(canon.beta) if b is NEG_INF]
    if bad:
        cols = ", ".join(str(j + 1) for j in bad)
        raise DegenerateColumnError(f"beta is -inf in columns {{{cols}}}")
    rows = []
    for i, eq in enumerate(sys.equations):
        row = []
        for j in range(sys.n):
            k = canon.alpha[i] + canon.beta[j]
            if k < 0:
                row.append(DiffPolynomial.zero())
            else:
                row.append(eq.partial_derivative(DerivativeVar(j, k)))
        rows.append(tuple(row))
    return tuple(rows)


def _check_grid(grid: Grid) -> int:
    n = len(grid)
    if n == 0 or any(len(row) != n for row in grid):
        raise DimensionError("grid must be square and non-empty")
    return n


def determinant_at(
    grid: Grid, point: Mapping[DerivativeVar, Fraction | int]
) -> Fraction:
    """Exact determinant of the grid evaluated at the point."""
    _check_grid(grid)
    evaluated = [[entry.evaluate(point) for entry in row] for row in grid]
    return fraction_determinant(evaluated)


_SYMBOLIC_LIMIT = 4


def symbolic_determinant(grid: Grid) -> DiffPolynomial:
    """Cofactor-expansion determinant as a polynomial; guarded to n <= 4."""
    n = _check_grid(grid)
    if n > _SYMBOLIC_LIMIT:
        raise GuardError(f"symbolic determinant is limited to n <= {_SYMBOLIC_LIMIT}")

    def expand(rows: tuple[int, ...], cols: tuple[int, ...]) -> DiffPolynomial:
        if len(rows) == 1:
            return grid[rows[0]][cols[0]]
        acc = DiffPolynomial.zero()
        r = rows[0]
        rest = rows[1:]
        for pos, c in enumerate(cols):
            entry = grid[r][c]
            if entry.is_zero:
                continue
            sub = expand(rest, cols[:pos] + cols[pos + 1 :])
            piece = entry * sub
            acc = acc - piece if pos % 2 else acc + piece
        return acc

    idx = tuple(range(n))
    return expand(idx, idx)


@dataclass(frozen=True)
class JacobianStatus:
    """Outcome of the nonvanishing check for the truncated Jacobian."""

    kind: str  # "NonzeroWitnessed" | "ZeroSymbolic" | "ProbablyZero" | "NotComputed"
    point: tuple[tuple[DerivativeVar, int], ...] | None = None
    value: Fraction | None = None
    trials: int | None = None

    @classmethod
    def not_computed(cls) -> "JacobianStatus":
        return cls(kind="NotComputed")


_WITNESS_SEED = 0
_WITNESS_TRIALS = 12


def jacobian_determinant_status(
    grid: Grid, seed: int = _WITNESS_SEED, max_trials: int = _WITNESS_TRIALS
) -> JacobianStatus:
    """Decide nonvanishing by exact evaluation at widening integer points.

    A nonzero evaluation is a verifiable witness.  All-zero trials fall
    back to the symbolic cofactor determinant for n <= 4 ("zero
    (symbolic)"), and to "probably zero" beyond that.  The point sequence
    is deterministic for a fixed seed.
    """
    n = _check_grid(grid)
    dvs = sorted({dv for row in grid for entry in row for dv in entry.derivative_vars()})
    if not dvs:
        det = determinant_at(grid, {})
        if det:
            return JacobianStatus("NonzeroWitnessed", point=(), value=det)
        return JacobianStatus("ZeroSymbolic")
    rng = random.Random(seed)

    def trial(t: int) -> tuple[tuple[tuple[DerivativeVar, int], ...], Fraction]:
        bound = 3 + 2 * t
        point = tuple((dv, rng.randint(-bound, bound)) for dv in dvs)
        return point, determinant_at(grid, dict(point))

    trials = 0
    while trials < max_trials:
        point, det = trial(trials)
        trials += 1
        if det:
            return JacobianStatus("NonzeroWitnessed", point=point, value=det)
    if n <= _SYMBOLIC_LIMIT:
        if symbolic_determinant(grid).is_zero:
            return JacobianStatus("ZeroSymbolic")
        while trials < 500:
            point, det = trial(trials)
            trials += 1
            if det:
                return JacobianStatus("NonzeroWitnessed", point=point, value=det)
        raise RuntimeError("failed to witness a symbolically nonzero determinant")
    return JacobianStatus("ProbablyZero", trials=trials)


# ---------------------------------------------------------------------------
# Prolongation plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionPlan:
    """Shortest-reduction prolongation: u_i and derivatives up to ell_i.

    solved_set lists the derivatives the normal form solves for; for each
    variable, derivatives strictly below known_set_bound are the free
    parameters.  order_total equals the Jacobi number when finite.
    """

    ell: tuple[int, ...]
    solved_set: tuple[DerivativeVar, ...]
    known_set_bound: tuple[int, ...]
    beta: tuple[OrderValue, ...]
    order_total: OrderValue
    prolonged: tuple[tuple[DiffPolynomial, ...], ...]


def shortest_reduction_plan(sys: DiffSystem, canon: CanonResult) -> ReductionPlan:
    """Build the shortest-reduction plan from the minimal canon.

    Each equation is paired with its starred column; the cutoff for that
    variable is the starred entry alpha_i + beta_j, and the solved
    derivatives run from the cutoff up to cutoff + ell_i.
    """
    if canon.n != sys.n:
        raise DimensionError("canon size does not match the system")
    if any(b is NEG_INF for b in canon.beta):
        raise DegenerateColumnError("beta has -inf entries; no reduction plan exists")
    A = order_matrix_of(sys)
    cutoff: list[int] = [0] * sys.n
    for i, j in canon.starred:
        v = A.entries[i][j]
        if v is NEG_INF:
            raise ValueError(
                "canon does not belong to this system: "
                f"starred entry ({i + 1}, {j + 1}) is -inf"
            )
        cutoff[j] = v
    solved = []
    for i, j in canon.starred:
        for k in range(canon.ell[i] + 1):
            solved.append(DerivativeVar(j, cutoff[j] + k))
    prolonged = []
    for i, eq in enumerate(sys.equations):
        chain = [eq]
        for _ in range(canon.ell[i]):
            chain.append(chain[-1].total_derivative())
        prolonged.append(tuple(chain))
    return ReductionPlan(
        ell=canon.ell,
        solved_set=tuple(sorted(solved)),
        known_set_bound=tuple(cutoff),
        beta=canon.beta,
        order_total=canon.jacobi_number,
        prolonged=tuple(prolonged),
    )


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def jacobi_order_compare(
    d1: DerivativeVar, d2: DerivativeVar, beta: Sequence[OrderValue]
) -> Ordering:
    """Total order on derivatives: primary key order - beta, then variable index."""
    for dv in (d1, d2):
        if dv.var >= len(beta):
            raise DimensionError(f"variable index {dv.var} out of range")
        if beta[dv.var] is NEG_INF:
            raise DegenerateColumnError(
                f"beta is -inf for variable {dv.var + 1}; the ordering is undefined"
            )
    k1 = (d1.order - beta[d1.var], d1.var)
    k2 = (d2.order - beta[d2.var], d2.var)
    if k1 < k2:
        return Ordering.LESS
    if k1 > k2:
        return Ordering.GREATER
    return Ordering.EQUAL


def resolvent_prolongation(sys: DiffSystem, plan) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Equation indices with the derivative orders 0..h_i to prolong by."""
    if len(plan.h) != sys.n:
        raise DimensionError("plan size does not match the system")
    return tuple((i, tuple(range(h + 1))) for i, h in enumerate(plan.h))


# ---------------------------------------------------------------------------
# JSON helpers (consumed by the CLI)
# ---------------------------------------------------------------------------


def _fraction_to_json(value: Fraction) -> int | str:
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def jacobian_status_to_json_dict(
    status: JacobianStatus, variables: Sequence[str] | None = None
) -> dict:
    out: dict = {"kind": status.kind}
    if status.kind == "NonzeroWitnessed":
        out["point"] = {
            format_derivative(dv, variables): v for dv, v in (status.point or ())
        }
        out["value"] = _fraction_to_json(status.value)
    elif status.kind == "ProbablyZero":
        out["trials"] = status.trials
    return out


def reduction_plan_to_json_dict(plan: ReductionPlan, variables: Sequence[str]) -> dict:
    return {
        "ell": list(plan.ell),
        "solvedSet": [format_derivative(dv, variables) for dv in plan.solved_set],
        "knownSetBound": list(plan.known_set_bound),
        "beta": [None if b is NEG_INF else b for b in plan.beta],
        "orderTotal": None if plan.order_total is NEG_INF else plan.order_total,
        "prolongation": [
            {"equation": i + 1, "orders": list(orders)}
            for i, orders in enumerate(range(l + 1) for l in plan.ell)
        ],
    }
