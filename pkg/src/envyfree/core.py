"""Exact costs, instances, assignments, loads and makespan.

Costs are either nonnegative :class:`fractions.Fraction` values or the
singleton :data:`INF`.  ``INF * 0 == 0`` so that a zero fraction on an
infeasible edge contributes nothing to a load.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Sequence, Union


class ScheduleError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(ScheduleError, ValueError):
    pass


class Infeasible(ScheduleError):
    """Some job has no machine with finite cost."""


class TooLarge(ScheduleError):
    """Enumeration would exceed the configured cap."""


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __hash__(self):
        return hash("envyfree.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        if isinstance(other, (Rational, _Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("INF - INF is undefined")
        if isinstance(other, Rational):
            return self
        return NotImplemented

    def __mul__(self, other):
        if other is self:
            return self
        if isinstance(other, Rational):
            if other < 0:
                raise ArithmeticError("costs are never multiplied by negatives")
            return Fraction(0) if other == 0 else self
        return NotImplemented

    __rmul__ = __mul__


INF = _Infinity()

Cost = Union[Fraction, _Infinity]


def is_finite(x) -> bool:
    return x is not INF


def as_cost(value) -> Cost:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``"inf"`` to a Cost."""
    if value is INF:
        return INF
    if isinstance(value, str):
        s = value.strip()
        if s.lower() in ("inf", "infinity", "+inf"):
            return INF
        value = Fraction(s)
    elif isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        raise TypeError("floats are not accepted as costs; use 'p/q' strings")
    elif isinstance(value, (int, Rational)) and not isinstance(value, bool):
        value = Fraction(value)
    else:
        raise TypeError(f"cannot interpret {value!r} as a cost")
    if value < 0:
        raise ValueError(f"negative cost {value}")
    return value


def as_fraction(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"expected an exact rational, got {value!r}")
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True)
class Instance:
    """An ``m x n`` cost matrix; rows are machines, columns are jobs."""

    machines: int
    jobs: int
    costs: tuple[tuple[Cost, ...], ...]

    def __post_init__(self):
        if self.machines < 1:
            raise ValueError("need at least one machine")
        if self.jobs < 0:
            raise ValueError("negative job count")
        rows = tuple(tuple(as_cost(c) for c in row) for row in self.costs)
        if len(rows) != self.machines or any(len(r) != self.jobs for r in rows):
            raise ValueError(
                f"cost matrix shape does not match {self.machines}x{self.jobs}")
        object.__setattr__(self, "costs", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], jobs: int | None = None) -> Instance:
        rows = [list(r) for r in rows]
        if jobs is None:
            jobs = len(rows[0]) if rows else 0
        return cls(len(rows), jobs, tuple(tuple(r) for r in rows))

    @property
    def m(self) -> int:
        return self.machines

    @property
    def n(self) -> int:
        return self.jobs

    @cached_property
    def fully_assignable(self) -> bool:
        return all(
            any(self.costs[i][j] is not INF for i in range(self.machines))
            for j in range(self.jobs))

    def require_assignable(self) -> None:
        for j in range(self.jobs):
            if all(self.costs[i][j] is INF for i in range(self.machines)):
                raise Infeasible(f"job {j} has infinite cost on every machine")

    def scaled_integer_costs(self) -> tuple[int, list[list]]:
        """Costs times the lcm of all denominators, with ``math.inf`` for INF.

        Orderings and sums of the result agree exactly with the rational
        costs, which is all the enumeration oracles need.
        """
        scale = 1
        for row in self.costs:
            for c in row:
                if c is not INF:
                    scale = math.lcm(scale, c.denominator)
        table = [[math.inf if c is INF else int(c * scale) for c in row]
                 for row in self.costs]
        return scale, table


@dataclass(frozen=True)
class IntegralAssignment:
    """``machine_of[j]`` is the machine running job ``j``."""

    machine_of: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "machine_of", tuple(int(k) for k in self.machine_of))

    def check(self, instance: Instance) -> None:
        if len(self.machine_of) != instance.jobs:
            raise ValueError(
                f"assignment covers {len(self.machine_of)} jobs, instance has {instance.jobs}")
        for j, k in enumerate(self.machine_of):
            if not 0 <= k < instance.machines:
                raise ValueError(f"job {j} assigned to nonexistent machine {k}")

    def bundle_rows(self, m: int) -> list[list[tuple[int, Fraction]]]:
        rows: list[list[tuple[int, Fraction]]] = [[] for _ in range(m)]
        one = Fraction(1)
        for j, k in enumerate(self.machine_of):
            rows[k].append((j, one))
        return rows

    def to_fractional(self, m: int) -> FractionalAssignment:
        n = len(self.machine_of)
        return FractionalAssignment(tuple(
            tuple(Fraction(1 if self.machine_of[j] == i else 0) for j in range(n))
            for i in range(m)))


@dataclass(frozen=True)
class FractionalAssignment:
    """``fractions[i][j]`` is the share of job ``j`` run on machine ``i``."""

    fractions: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "fractions", tuple(
            tuple(as_fraction(x) for x in row) for row in self.fractions))

    def check(self, instance: Instance) -> None:
        a = self.fractions
        if len(a) != instance.machines or any(len(r) != instance.jobs for r in a):
            raise ValueError("fractional assignment shape does not match instance")
        for row in a:
            for x in row:
                if not 0 <= x <= 1:
                    raise ValueError(f"fraction {x} outside [0, 1]")
        for j in range(instance.jobs):
            s = sum((a[i][j] for i in range(instance.machines)), Fraction(0))
            if s != 1:
                raise ValueError(f"job {j} fractions sum to {s}, not 1")

    def bundle_rows(self, m: int) -> list[list[tuple[int, Fraction]]]:
        return [[(j, x) for j, x in enumerate(row) if x != 0] for row in self.fractions]


Assignment = Union[IntegralAssignment, FractionalAssignment]


def validate_supports(instance: Instance, assignment: FractionalAssignment) -> None:
    """Raise unless every positive fraction sits on a finite cost."""
    for i, row in enumerate(assignment.fractions):
        for j, x in enumerate(row):
            if x > 0 and instance.costs[i][j] is INF:
                raise PreconditionError(
                    f"job {j} has share {x} on machine {i} where its cost is infinite")


def dot(cost_row: Sequence[Cost], items: Iterable[tuple[int, Fraction]]) -> Cost:
    """Load of a (fractional) bundle under one machine's cost row."""
    total = Fraction(0)
    for j, x in items:
        c = cost_row[j]
        if c is INF:
            if x != 0:
                return INF
            continue
        total += c * x
    return total


def load(instance: Instance, assignment: Assignment, machine_index: int) -> Cost:
    assignment.check(instance)
    if not 0 <= machine_index < instance.machines:
        raise IndexError(machine_index)
    rows = assignment.bundle_rows(instance.machines)
    return dot(instance.costs[machine_index], rows[machine_index])


def loads(instance: Instance, assignment: Assignment) -> tuple[Cost, ...]:
    assignment.check(instance)
    rows = assignment.bundle_rows(instance.machines)
    return tuple(dot(instance.costs[i], rows[i]) for i in range(instance.machines))


def makespan(instance: Instance, assignment: Assignment) -> Cost:
    return max(loads(instance, assignment), default=Fraction(0))


def cross_loads(instance: Instance, assignment: Assignment) -> list[list[Cost]]:
    """``w[i][k]``: load machine ``i`` would carry running machine ``k``'s bundle."""
    assignment.check(instance)
    rows = assignment.bundle_rows(instance.machines)
    return [[dot(instance.costs[i], rows[k]) for k in range(instance.machines)]
            for i in range(instance.machines)]


def lex_compare(loads_a: Sequence[Cost], loads_b: Sequence[Cost]) -> int:
    """Compare load vectors sorted in non-increasing order.

    Returns -1, 0 or 1 like a classic ``cmp``.
    """
    if len(loads_a) != len(loads_b):
        raise ValueError("load vectors differ in length")
    if any(x is INF for x in loads_a) or any(x is INF for x in loads_b):
        raise ValueError("lex_compare needs finite loads")
    sa = sorted(loads_a, reverse=True)
    sb = sorted(loads_b, reverse=True)
    for x, y in zip(sa, sb):
        if x != y:
            return -1 if x < y else 1
    return 0


@dataclass(frozen=True)
class BundleSet:
    """Exactly ``m`` disjoint job sets covering all jobs.

    ``origin_machine[k]`` optionally records where bundle ``k`` ran in the
    assignment it was cut from.
    """

    bundles: tuple[frozenset[int], ...]
    origin_machine: tuple[int | None, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(frozenset(b) for b in self.bundles))
        if self.origin_machine is not None:
            object.__setattr__(self, "origin_machine", tuple(self.origin_machine))
            if len(self.origin_machine) != len(self.bundles):
                raise ValueError("origin_machine length differs from bundle count")

    def check(self, instance: Instance) -> None:
        if len(self.bundles) != instance.machines:
            raise ValueError(
                f"expected {instance.machines} bundles, got {len(self.bundles)}")
        seen: set[int] = set()
        for b in self.bundles:
            if seen & b:
                raise ValueError(f"bundles overlap on jobs {sorted(seen & b)}")
            seen |= b
        if seen != set(range(instance.jobs)):
            raise ValueError("bundles do not cover the job set exactly")

    def origin_loads(self, instance: Instance) -> list[Cost]:
        if self.origin_machine is None:
            raise PreconditionError("bundle set has no origin machines")
        out = []
        for b, i in zip(self.bundles, self.origin_machine):
            if b and i is None:
                raise PreconditionError("nonempty bundle without an origin machine")
            out.append(Fraction(0) if not b else bundle_load(instance, i, b))
        return out


def bundle_load(instance: Instance, machine: int, bundle: Iterable[int]) -> Cost:
    row = instance.costs[machine]
    total = Fraction(0)
    for j in bundle:
        c = row[j]
        if c is INF:
            return INF
        total += c
    return total


def bundles_from_assignment(instance: Instance, assignment: IntegralAssignment) -> BundleSet:
    assignment.check(instance)
    sets: list[set[int]] = [set() for _ in range(instance.machines)]
    for j, k in enumerate(assignment.machine_of):
        sets[k].add(j)
    return BundleSet(tuple(frozenset(s) for s in sets), tuple(range(instance.machines)))


def assignment_from_bundles(n: int, placement: Sequence[Iterable[int]]) -> IntegralAssignment:
    """Integral assignment putting ``placement[i]`` on machine ``i``."""
    machine_of = [-1] * n
    for i, bundle in enumerate(placement):
        for j in bundle:
            if machine_of[j] != -1:
                raise ValueError(f"job {j} placed twice")
            machine_of[j] = i
    if -1 in machine_of:
        raise ValueError(f"job {machine_of.index(-1)} not placed")
    return IntegralAssignment(tuple(machine_of))
