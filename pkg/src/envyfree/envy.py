"""Local efficiency, envy-free payments, and envy-freeness checks.

An allocation admits envy-free payments exactly when no rotation of the
machines' bundles lowers the total load.  Payments are the potentials of
the difference-constraint system ``p_k - p_i <= w[i][k] - w[i][i]`` where
``w[i][k]`` is the load machine ``i`` would carry with machine ``k``'s
bundle; a negative cycle in that system is an improving rotation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (INF, Assignment, FractionalAssignment, Instance, IntegralAssignment,
                   PreconditionError, ScheduleError, as_fraction, cross_loads,
                   validate_supports)
from .matching import min_weight_assignment


@dataclass(frozen=True)
class Payments:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(x) for x in self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def normalized(self) -> Payments:
        if not self.values:
            return self
        low = min(self.values)
        return Payments(tuple(p - low for p in self.values))

    def shifted(self, amount) -> Payments:
        return Payments(tuple(p + amount for p in self.values))


@dataclass(frozen=True)
class EfficiencyCertificate:
    """Verdict plus, when negative, an improving rotation.

    ``cycle = (i_0, ..., i_{k-1})`` means machine ``i_t`` takes the bundle
    currently on ``i_{t+1}`` (indices mod k); ``decrease`` is the exact
    drop in total load.
    """

    verdict: bool
    cycle: tuple[int, ...] = ()
    decrease: Fraction = Fraction(0)

    def __bool__(self):
        return self.verdict


class NotLocallyEfficient(ScheduleError):
    def __init__(self, certificate: EfficiencyCertificate):
        self.certificate = certificate
        super().__init__(
            f"assignment is not locally efficient: rotating bundles along "
            f"{list(certificate.cycle)} saves {certificate.decrease}")


def _weights(instance: Instance, assignment: Assignment):
    if isinstance(assignment, FractionalAssignment):
        assignment.check(instance)
        validate_supports(instance, assignment)
    w = cross_loads(instance, assignment)
    for i in range(instance.machines):
        if w[i][i] is INF:
            raise PreconditionError(f"machine {i} carries infinite load")
    return w


def _cycle_gain(w, cycle: Sequence[int]) -> Fraction:
    k = len(cycle)
    before = sum((w[i][i] for i in cycle), Fraction(0))
    after = Fraction(0)
    for t in range(k):
        c = w[cycle[t]][cycle[(t + 1) % k]]
        if c is INF:
            return Fraction(-1)  # never improving
        after += c
    return before - after


def is_locally_efficient(instance: Instance, assignment: Assignment) -> EfficiencyCertificate:
    w = _weights(instance, assignment)
    m = instance.machines
    own = sum((w[i][i] for i in range(m)), Fraction(0))
    best = min_weight_assignment(w)
    if best.total == own:
        return EfficiencyCertificate(True)
    perm = best.permutation
    seen = [False] * m
    for start in range(m):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = perm[i]
        if len(cycle) < 2:
            continue
        gain = _cycle_gain(w, cycle)
        if gain > 0:
            return EfficiencyCertificate(False, tuple(cycle), gain)
    raise AssertionError("optimal permutation beats identity yet has no improving cycle")


def rotate(assignment: IntegralAssignment, cycle: Sequence[int]) -> IntegralAssignment:
    """Apply a certificate's rotation to an integral assignment."""
    k = len(cycle)
    dest = {cycle[(t + 1) % k]: cycle[t] for t in range(k)}
    return IntegralAssignment(tuple(dest.get(i, i) for i in assignment.machine_of))


def rotate_fractional(assignment: FractionalAssignment, cycle: Sequence[int]) -> FractionalAssignment:
    k = len(cycle)
    rows = list(assignment.fractions)
    for t in range(k):
        rows[cycle[t]] = assignment.fractions[cycle[(t + 1) % k]]
    return FractionalAssignment(tuple(rows))


def compute_payments(instance: Instance, assignment: Assignment) -> Payments:
    """Envy-free payments normalized to ``min(p) == 0``.

    Raises :class:`NotLocallyEfficient` carrying a negative cycle when the
    allocation cannot be supported.
    """
    w = _weights(instance, assignment)
    m = instance.machines
    edges = [(i, k, w[i][k] - w[i][i])
             for i in range(m) for k in range(m)
             if i != k and w[i][k] is not INF]
    dist = [Fraction(0)] * m  # virtual source with 0-weight edges to all
    pred = [-1] * m
    last = -1
    for _ in range(m):
        last = -1
        for i, k, c in edges:
            if dist[i] + c < dist[k]:
                dist[k] = dist[i] + c
                pred[k] = i
                last = k
        if last == -1:
            break
    if last != -1:
        cycle = _pred_cycle(pred)
        if cycle is None or _cycle_gain(w, cycle) <= 0:
            cert = is_locally_efficient(instance, assignment)
        else:
            cert = EfficiencyCertificate(False, cycle, _cycle_gain(w, cycle))
        raise NotLocallyEfficient(cert)
    return Payments(tuple(dist)).normalized()


def _pred_cycle(pred: list[int]) -> tuple[int, ...] | None:
    """Some cycle of the predecessor graph, oriented along constraint edges."""
    m = len(pred)
    state = [0] * m  # 0 new, 1 on current walk, 2 done
    for s in range(m):
        walk = []
        x = s
        while x != -1 and state[x] == 0:
            state[x] = 1
            walk.append(x)
            x = pred[x]
        if x != -1 and state[x] == 1:
            back = walk[walk.index(x):]
            for y in walk:
                state[y] = 2
            return tuple(reversed(back))
        for y in walk:
            state[y] = 2
    return None


def verify_envy_free(instance: Instance, assignment: Assignment, payments) -> bool:
    """Exact check of ``p_i - w[i][i] >= p_k - w[i][k]`` for all pairs."""
    p = [as_fraction(x) for x in payments]
    if len(p) != instance.machines:
        raise ValueError("payment vector length differs from machine count")
    w = cross_loads(instance, assignment)
    m = instance.machines
    for i in range(m):
        if w[i][i] is INF:
            return False
        for k in range(m):
            if w[i][k] is INF:
                continue
            if p[i] - w[i][i] < p[k] - w[i][k]:
                return False
    return True
