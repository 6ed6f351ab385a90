"""Dense two-phase simplex over exact rationals.

Bland's rule picks both entering and leaving variables, so degenerate
programs (frequent in the lexicographic-minimax loop) cannot cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import as_fraction

LE, EQ, GE = "<=", "==", ">="


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coefficients",
                           tuple(as_fraction(c) for c in self.coefficients))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((a * v for a, v in zip(self.coefficients, x)), Fraction(0))
        if self.relation == LE:
            return lhs <= self.rhs
        if self.relation == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearProgram:
    """Minimize ``objective . x`` subject to ``constraints``.

    Variables are nonnegative unless listed in ``free``.
    """

    num_vars: int
    objective: list[Fraction] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    free: set[int] = field(default_factory=set)

    def __post_init__(self):
        if not self.objective:
            self.objective = [Fraction(0)] * self.num_vars
        self.objective = [as_fraction(c) for c in self.objective]

    def add(self, coefficients, relation: str, rhs) -> None:
        if isinstance(coefficients, dict):
            row = [Fraction(0)] * self.num_vars
            for k, v in coefficients.items():
                row[k] += as_fraction(v)
            coefficients = row
        self.constraints.append(Constraint(tuple(coefficients), relation, rhs))

    def validate(self) -> None:
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length differs from variable count")
        for k, con in enumerate(self.constraints):
            if len(con.coefficients) != self.num_vars:
                raise ValueError(f"constraint {k} has wrong length")
        for v in self.free:
            if not 0 <= v < self.num_vars:
                raise ValueError(f"free variable index {v} out of range")

    def feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars:
            return False
        if any(x[v] < 0 for v in range(self.num_vars) if v not in self.free):
            return False
        return all(c.holds(x) for c in self.constraints)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))


@dataclass(frozen=True)
class Optimal:
    point: tuple[Fraction, ...]
    value: Fraction


@dataclass(frozen=True)
class InfeasibleLP:
    pass


@dataclass(frozen=True)
class UnboundedLP:
    pass


LpOutcome = Optimal | InfeasibleLP | UnboundedLP


class _Tableau:
    # rows: constraint rows [coeffs..., rhs]; basis[r] = column basic in row r
    def __init__(self, rows, basis, ncols):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r, c):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            self.rows[r] = row = [x * inv for x in row]
        for k, other in enumerate(self.rows):
            if k != r:
                f = other[c]
                if f:
                    self.rows[k] = [a - f * b for a, b in zip(other, row)]
        self.basis[r] = c

    def optimize(self, cost, allowed):
        """Minimize cost . x over the current basis; return False if unbounded."""
        while True:
            basic = set(self.basis)
            # reduced cost of column j: cost_j - sum_r cost_{basis r} * a_rj
            cb = [cost[b] for b in self.basis]
            entering = None
            for j in range(self.ncols):
                if j in basic or not allowed[j]:
                    continue
                red = cost[j]
                for r, row in enumerate(self.rows):
                    if cb[r] and row[j]:
                        red -= cb[r] * row[j]
                if red < 0:
                    entering = j
                    break
            if entering is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], entering)


def solve_lp(program: LinearProgram) -> LpOutcome:
    program.validate()
    n = program.num_vars
    # split free variables: x = x+ - x-
    columns: list[tuple[int, int]] = []  # (original var, sign)
    for v in range(n):
        columns.append((v, 1))
        if v in program.free:
            columns.append((v, -1))
    nx = len(columns)
    ncons = len(program.constraints)
    nslack = sum(1 for c in program.constraints if c.relation != EQ)
    ncols = nx + nslack + ncons  # one artificial per row
    rows = []
    basis = []
    slack = nx
    for r, con in enumerate(program.constraints):
        row = [Fraction(0)] * (ncols + 1)
        for k, (v, sign) in enumerate(columns):
            row[k] = con.coefficients[v] * sign
        if con.relation == LE:
            row[slack] = Fraction(1)
            slack += 1
        elif con.relation == GE:
            row[slack] = Fraction(-1)
            slack += 1
        row[-1] = con.rhs
        if row[-1] < 0:
            row = [-x for x in row]
        art = nx + nslack + r
        row[art] = Fraction(1)
        rows.append(row)
        basis.append(art)
    tab = _Tableau(rows, basis, ncols)
    first_art = nx + nslack

    phase1 = [Fraction(0)] * first_art + [Fraction(1)] * ncons
    tab.optimize(phase1, [True] * ncols)
    if any(row[-1] != 0 for r, row in enumerate(tab.rows) if tab.basis[r] >= first_art):
        return InfeasibleLP()
    # drive remaining (zero-level) artificials out of the basis
    for r in range(len(tab.rows)):
        if tab.basis[r] >= first_art:
            for j in range(first_art):
                if tab.rows[r][j] != 0:
                    tab.pivot(r, j)
                    break
    keep = [r for r in range(len(tab.rows)) if tab.basis[r] < first_art]
    tab.rows = [tab.rows[r] for r in keep]
    tab.basis = [tab.basis[r] for r in keep]

    cost = [Fraction(0)] * ncols
    for k, (v, sign) in enumerate(columns):
        cost[k] = program.objective[v] * sign
    allowed = [j < first_art for j in range(ncols)]
    if not tab.optimize(cost, allowed):
        return UnboundedLP()

    xs = [Fraction(0)] * ncols
    for r, b in enumerate(tab.basis):
        xs[b] = tab.rows[r][-1]
    point = [Fraction(0)] * n
    for k, (v, sign) in enumerate(columns):
        point[v] += sign * xs[k]
    point = tuple(point)
    if not program.feasible(point):
        raise AssertionError("simplex returned a point violating the program")
    return Optimal(point, program.value(point))
