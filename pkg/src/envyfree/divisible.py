"""Envy-free scheduling of divisible jobs with optimal makespan.

The lexicographically minimal load vector is computed by repeated
minimax-and-fix linear programs; such an assignment is locally efficient,
so envy-free payments for it always exist.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (INF, FractionalAssignment, Instance, PreconditionError,
                   ScheduleError, as_fraction, dot, lex_compare, loads, validate_supports)
from .envy import Payments, compute_payments, is_locally_efficient, verify_envy_free
from .linprog import EQ, LE, LinearProgram, Optimal, solve_lp


class FixpointStall(ScheduleError):
    pass


class _Model:
    """Variables ``a_ij`` for finite ``c_ij`` followed by the cap ``t``."""

    def __init__(self, instance: Instance):
        instance.require_assignable()
        self.instance = instance
        self.var = {}
        for i in range(instance.machines):
            for j in range(instance.jobs):
                if instance.costs[i][j] is not INF:
                    self.var[i, j] = len(self.var)
        self.t = len(self.var)
        self.size = self.t + 1

    def base(self) -> LinearProgram:
        lp = LinearProgram(self.size)
        inst = self.instance
        for j in range(inst.jobs):
            lp.add({self.var[i, j]: 1 for i in range(inst.machines) if (i, j) in self.var},
                   EQ, 1)
        return lp

    def load_terms(self, i: int) -> dict[int, Fraction]:
        row = self.instance.costs[i]
        return {self.var[i, j]: row[j] for j in range(self.instance.jobs) if (i, j) in self.var}

    def assignment(self, point: Sequence[Fraction]) -> FractionalAssignment:
        inst = self.instance
        return FractionalAssignment(tuple(
            tuple(point[self.var[i, j]] if (i, j) in self.var else Fraction(0)
                  for j in range(inst.jobs))
            for i in range(inst.machines)))


def _solve(lp: LinearProgram) -> Optimal:
    out = solve_lp(lp)
    if not isinstance(out, Optimal):
        raise AssertionError(f"scheduling LP unexpectedly {type(out).__name__}")
    return out


def min_makespan_fractional(instance: Instance) -> tuple[Fraction, FractionalAssignment]:
    model = _Model(instance)
    lp = model.base()
    for i in range(instance.machines):
        terms = model.load_terms(i)
        terms[model.t] = Fraction(-1)
        lp.add(terms, LE, 0)
    lp.objective[model.t] = Fraction(1)
    res = _solve(lp)
    return res.value, model.assignment(res.point)


def lexmin_fractional(instance: Instance) -> FractionalAssignment:
    """Assignment whose non-increasingly sorted load vector is minimal."""
    model = _Model(instance)
    m = instance.machines
    fixed: dict[int, Fraction] = {}

    def constrained(cap):
        lp = model.base()
        for i in range(m):
            terms = model.load_terms(i)
            if i in fixed:
                lp.add(terms, EQ, fixed[i])
            elif cap is None:
                terms[model.t] = Fraction(-1)
                lp.add(terms, LE, 0)
            else:
                lp.add(terms, LE, cap)
        return lp

    while len(fixed) < m:
        lp = constrained(None)
        lp.objective[model.t] = Fraction(1)
        res = _solve(lp)
        t = res.value
        at_cap = model.assignment(res.point)
        current = loads(instance, at_cap)
        newly = []
        for i in range(m):
            if i in fixed or current[i] < t:
                continue  # a machine below the cap here is not forced to it
            probe = constrained(t)
            for k, c in model.load_terms(i).items():
                probe.objective[k] = c
            if _solve(probe).value == t:
                newly.append(i)
        if not newly:
            raise FixpointStall("no machine is forced to the minimax level")
        for i in newly:
            fixed[i] = t
    return model.assignment(_solve(constrained(None)).point)


def solve_divisible_ef(instance: Instance) -> tuple[FractionalAssignment, Payments, Fraction]:
    assignment = lexmin_fractional(instance)
    payments = compute_payments(instance, assignment)
    span = max(loads(instance, assignment), default=Fraction(0))
    t, _ = min_makespan_fractional(instance)
    if span != t:
        raise AssertionError(f"lexmin makespan {span} differs from LP optimum {t}")
    if not verify_envy_free(instance, assignment, payments):
        raise AssertionError("computed payments fail the envy-freeness check")
    return assignment, payments, span


def _scale_row(row, factor):
    return tuple(x * factor for x in row)


def _add_rows(a, b):
    return tuple(x + y for x, y in zip(a, b))


def equalize_pair(instance: Instance, o: FractionalAssignment, i: int,
                  to: int | None = None) -> FractionalAssignment:
    """Shift part of machine ``i``'s bundle to ``to`` (default ``i + 1``) so
    the two loads become equal."""
    m = instance.machines
    k = (i + 1) % m if to is None else to
    o.check(instance)
    rows = o.bundle_rows(m)
    li = dot(instance.costs[i], rows[i])
    lk = dot(instance.costs[k], rows[k])
    cross = dot(instance.costs[k], rows[i])
    if INF in (li, lk, cross):
        raise PreconditionError("equalize_pair needs finite loads and cross load")
    if not li > lk:
        raise PreconditionError(f"machine {i} load {li} does not exceed machine {k} load {lk}")
    f = (li - lk) / (li + cross)
    fr = list(o.fractions)
    moved = _scale_row(o.fractions[i], f)
    fr[i] = _scale_row(o.fractions[i], 1 - f)
    fr[k] = _add_rows(o.fractions[k], moved)
    return FractionalAssignment(tuple(fr))


@dataclass(frozen=True)
class CycleRepairPlan:
    """Rotation along ``cycle`` keeping ``alphas[t]`` of each bundle in place."""

    cycle: tuple[int, ...]
    deltas: tuple[Fraction, ...]
    mu: Fraction
    alphas: tuple[Fraction, ...]

    @classmethod
    def from_deltas(cls, cycle: Sequence[int], deltas: Sequence) -> CycleRepairPlan:
        cycle = tuple(cycle)
        deltas = tuple(as_fraction(d) for d in deltas)
        k = len(cycle)
        if k < 2 or len(deltas) != k:
            raise PreconditionError("cycle needs k >= 2 machines and k deltas")
        if len(set(cycle)) != k:
            raise PreconditionError("cycle repeats a machine")
        if any(d < -1 for d in deltas):
            raise PreconditionError("every delta must be >= -1")
        if sum(deltas) >= 0:
            raise PreconditionError("deltas must sum to a negative number")
        mu = Fraction(1)
        prod = Fraction(1)
        for d in deltas:
            prod *= 1 + d
            mu = max(mu, prod)
        rest = [1 / (2 * mu)]
        for t in range(1, k):
            rest.append(rest[t - 1] * (1 + deltas[t - 1]))
        alphas = tuple(1 - r for r in rest)
        if any(not 0 <= a <= 1 for a in alphas):
            raise PreconditionError("keep-fractions left [0, 1]")
        return cls(cycle, deltas, mu, alphas)


def plan_for_cycle(instance: Instance, o: FractionalAssignment,
                   cycle: Sequence[int]) -> CycleRepairPlan:
    """Read the deltas off an assignment whose cycle machines all carry load 1."""
    m = instance.machines
    rows = o.bundle_rows(m)
    k = len(cycle)
    deltas = []
    for t in range(k):
        e_load = dot(instance.costs[cycle[(t + 1) % k]], rows[cycle[t]])
        if e_load is INF:
            raise PreconditionError("cross load along the cycle is infinite")
        deltas.append(e_load - 1)
    return CycleRepairPlan.from_deltas(cycle, deltas)


def cycle_repair(instance: Instance, o: FractionalAssignment,
                 plan: CycleRepairPlan) -> FractionalAssignment:
    """Redistribute bundles along ``plan.cycle``.

    Machines ``cycle[1:]`` end at load exactly 1 and ``cycle[0]`` strictly
    below 1; every other row of ``o`` is left untouched.
    """
    o.check(instance)
    m = instance.machines
    rows = o.bundle_rows(m)
    cyc = plan.cycle
    k = len(cyc)
    for t, i in enumerate(cyc):
        if dot(instance.costs[i], rows[i]) != 1:
            raise PreconditionError(f"machine {i} load is not normalized to 1")
        e_load = dot(instance.costs[cyc[(t + 1) % k]], rows[i])
        if e_load != 1 + plan.deltas[t]:
            raise PreconditionError(
                f"cross load of bundle {i} on machine {cyc[(t + 1) % k]} is {e_load}, "
                f"plan says {1 + plan.deltas[t]}")
    if sum(plan.deltas) >= 0:
        raise PreconditionError("deltas must sum to a negative number")
    if any(not 0 <= a <= 1 for a in plan.alphas):
        raise PreconditionError("keep-fractions left [0, 1]")
    fr = list(o.fractions)
    for t, i in enumerate(cyc):
        prev = cyc[t - 1]
        kept = _scale_row(o.fractions[i], plan.alphas[t])
        incoming = _scale_row(o.fractions[prev], 1 - plan.alphas[t - 1])
        fr[i] = _add_rows(kept, incoming)
    out = FractionalAssignment(tuple(fr))
    new = loads(instance, out)
    if any(new[i] != 1 for i in cyc[1:]) or not new[cyc[0]] < 1:
        raise AssertionError("cycle repair did not reach the expected loads")
    return out


def is_fractionally_efficient(instance: Instance, assignment: FractionalAssignment) -> bool:
    validate_supports(instance, assignment)
    return is_locally_efficient(instance, assignment).verdict


def lex_smaller(instance: Instance, a: FractionalAssignment, b: FractionalAssignment) -> bool:
    return lex_compare(loads(instance, a), loads(instance, b)) < 0
