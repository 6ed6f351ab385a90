"""Envy-free approximation for indivisible jobs, plus exact oracles.

``find_approx`` repeatedly places the still-active bundles locally
efficiently, throws out every bundle landing on a machine above
``beta * m_init``, and commits what is left as one phase.  The union of
the phases is locally efficient and each phase at least halves the
number of pending bundles.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (INF, BundleSet, Cost, Infeasible, Instance, IntegralAssignment,
                   PreconditionError, ScheduleError, TooLarge, as_fraction,
                   assignment_from_bundles, bundle_load, bundles_from_assignment, makespan)
from .matching import min_weight_assignment

DEFAULT_CAP = 2 ** 22


class NonTermination(ScheduleError):
    pass


@dataclass(frozen=True)
class PhaseRecord:
    """Bookkeeping for one phase (diagnostics and invariant checks)."""

    placement: tuple[frozenset[int], ...]  # bundle committed to each machine
    active_at_start: int  # nonempty bundles entering the phase
    discarded: int  # bundles sent to the next phase
    le_totals: tuple[Fraction, ...]  # LE total after each (re)matching
    phase_makespan: Fraction


@dataclass(frozen=True)
class PhasedSchedule:
    final_assignment: IntegralAssignment
    phases: tuple[PhaseRecord, ...]
    threshold: Fraction
    m_init: Fraction
    beta: Fraction

    @property
    def q(self) -> int:
        return len(self.phases)

    @property
    def phase_assignments(self) -> list[tuple[frozenset[int], ...]]:
        return [p.placement for p in self.phases]


def _pad(bundles: list[frozenset[int]], m: int) -> BundleSet:
    return BundleSet(tuple(bundles) + (frozenset(),) * (m - len(bundles)))


def _place(instance: Instance, active: list[frozenset[int]]):
    # active bundles cover only the jobs still pending, so no full-cover check
    padded = _pad(active, instance.machines).bundles
    m = instance.machines
    match = min_weight_assignment([[bundle_load(instance, i, b) for b in padded]
                                   for i in range(m)])
    return [padded[k] for k in match.permutation], match.total


def union_phase_assignments(n: int, phases: Sequence[Sequence[frozenset[int]]]
                            ) -> IntegralAssignment:
    if not phases:
        return IntegralAssignment(())
    m = len(phases[0])
    merged: list[set[int]] = [set() for _ in range(m)]
    seen: set[int] = set()
    for placement in phases:
        if len(placement) != m:
            raise ValueError("phases disagree on the machine count")
        for i, bundle in enumerate(placement):
            if seen & set(bundle):
                raise ValueError(f"jobs {sorted(seen & set(bundle))} appear in two phases")
            seen |= set(bundle)
            merged[i] |= set(bundle)
    return assignment_from_bundles(n, merged)


def find_approx(instance: Instance, initial: BundleSet, beta=2,
                m_init: Cost | None = None) -> PhasedSchedule:
    initial.check(instance)
    beta = as_fraction(beta)
    if beta < 2:
        raise PreconditionError("beta must be at least 2")
    m = instance.machines
    if initial.origin_machine is not None:
        origin_span = max(initial.origin_loads(instance), default=Fraction(0))
        if origin_span is INF:
            raise PreconditionError("initial allocation has an infinite load")
        if m_init is None:
            m_init = origin_span
        elif m_init < origin_span:
            raise PreconditionError(
                f"m_init {m_init} is below the initial makespan {origin_span}")
    elif m_init is None:
        raise PreconditionError("m_init is required when bundles carry no origin")
    m_init = as_fraction(m_init)
    threshold = beta * m_init

    active = [b for b in initial.bundles if b]
    phases: list[PhaseRecord] = []
    while active or not phases:
        k = len(active)
        out: list[frozenset[int]] = []
        placement, total = _place(instance, active)
        totals = [total]
        while True:
            here = [bundle_load(instance, i, placement[i]) for i in range(m)]
            if max(here, default=Fraction(0)) <= threshold:
                break
            for i in range(m):
                if here[i] > threshold:
                    out.append(placement[i])
                    active.remove(placement[i])
            placement, total = _place(instance, active)
            if total > totals[-1]:
                raise AssertionError("LE total increased inside a phase")
            totals.append(total)
        if k and len(out) >= k:
            raise NonTermination("a phase discarded every active bundle")
        if len(out) > k // 2:
            raise AssertionError(f"phase discarded {len(out)} of {k} bundles")
        phases.append(PhaseRecord(
            placement=tuple(placement), active_at_start=k, discarded=len(out),
            le_totals=tuple(totals), phase_makespan=max(here, default=Fraction(0))))
        active = out
    if len(phases) > m.bit_length():  # floor(log2 m) + 1
        raise AssertionError(f"{len(phases)} phases on {m} machines")
    final = union_phase_assignments(instance.jobs, [p.placement for p in phases])
    return PhasedSchedule(final, tuple(phases), threshold, m_init, beta)


def greedy_bundles(instance: Instance) -> tuple[BundleSet, Fraction]:
    """Longest-processing-time style list scheduling; no guarantee claimed."""
    instance.require_assignable()
    m, n = instance.machines, instance.jobs
    cheapest = [min(instance.costs[i][j] for i in range(m)) for j in range(n)]
    order = sorted(range(n), key=lambda j: (-cheapest[j], j))
    loads = [Fraction(0)] * m
    machine_of = [0] * n
    for j in order:
        best = None
        for i in range(m):
            c = instance.costs[i][j]
            if c is INF:
                continue
            if best is None or loads[i] + c < best[0]:
                best = (loads[i] + c, i)
        loads[best[1]] = best[0]
        machine_of[j] = best[1]
    assignment = IntegralAssignment(tuple(machine_of))
    return bundles_from_assignment(instance, assignment), max(loads, default=Fraction(0))


def min_total_assignment(instance: Instance) -> IntegralAssignment:
    """Each job on its cheapest machine; minimizes total load, hence locally efficient."""
    instance.require_assignable()
    m = instance.machines
    return IntegralAssignment(tuple(
        min(range(m), key=lambda i: (instance.costs[i][j], i))
        for j in range(instance.jobs)))


# ---------------------------------------------------------------- oracles

def _check_size(instance: Instance, cap: int) -> None:
    instance.require_assignable()
    if instance.machines ** instance.jobs > cap:
        raise TooLarge(
            f"{instance.machines}^{instance.jobs} assignments exceed cap {cap}")


def _search_opt(table, m, n, prefix):
    """Lexicographically first minimum-makespan completion of ``prefix``."""
    loads = [0] * m
    for j, k in enumerate(prefix):
        loads[k] += table[k][j]
    start = len(prefix)
    best_span = math.inf
    best_vec = None
    vec = list(prefix) + [0] * (n - start)

    def rec(j, span):
        nonlocal best_span, best_vec
        if j == n:
            best_span = span
            best_vec = tuple(vec)
            return
        for k in range(m):
            c = table[k][j]
            if c == math.inf:
                continue
            nl = loads[k] + c
            s = nl if nl > span else span
            if best_vec is not None and s >= best_span:
                continue
            loads[k] = nl
            vec[j] = k
            rec(j + 1, s)
            loads[k] = nl - c

    if max(loads, default=0) < math.inf:
        rec(start, max(loads, default=0))
    return best_span, best_vec


def _no_negative_cycle(w, m):
    # pairwise swaps first; they reject most inefficient leaves cheaply
    for i in range(m):
        wi = w[i]
        for k in range(i + 1, m):
            if wi[k] + w[k][i] < wi[i] + w[k][k]:
                return False
    if m < 3:
        return True
    d = [[0 if i == k else w[i][k] - w[i][i] for k in range(m)] for i in range(m)]
    for via in range(m):
        dv = d[via]
        for i in range(m):
            dik = d[i][via]
            if dik == math.inf:
                continue
            di = d[i]
            for k in range(m):
                x = dik + dv[k]
                if x < di[k]:
                    di[k] = x
        if any(d[i][i] < 0 for i in range(m)):
            return False
    return True


def _search_ef(table, m, n, prefix, bound):
    """Lexicographically first minimum-makespan locally efficient completion.

    ``bound`` is the makespan of some known locally efficient assignment.
    """
    w = [[0] * m for _ in range(m)]  # w[i][k]: machine i's cost for bundle k
    for j, k in enumerate(prefix):
        for i in range(m):
            w[i][k] += table[i][j]
    start = len(prefix)
    best_span = bound
    best_vec = None
    vec = list(prefix) + [0] * (n - start)

    def rec(j, span):
        nonlocal best_span, best_vec
        if j == n:
            if (span < best_span or best_vec is None) and _no_negative_cycle(w, m):
                best_span = span
                best_vec = tuple(vec)
            return
        for k in range(m):
            c = table[k][j]
            if c == math.inf:
                continue
            nl = w[k][k] + c
            s = nl if nl > span else span
            if s > best_span or (best_vec is not None and s == best_span):
                continue
            for i in range(m):
                w[i][k] += table[i][j]
            vec[j] = k
            rec(j + 1, s)
            for i in range(m):
                w[i][k] -= table[i][j]

    diag = [w[i][i] for i in range(m)]
    if max(diag, default=0) < math.inf:
        rec(start, max(diag, default=0))
    return best_span, best_vec


def _worker(args):
    kind, table, m, n, prefix, bound = args
    if kind == "opt":
        return _search_opt(table, m, n, prefix)
    return _search_ef(table, m, n, prefix, bound)


def _run(kind, instance: Instance, bound=None, workers: int = 1):
    scale, table = instance.scaled_integer_costs()
    m, n = instance.machines, instance.jobs
    if n == 0:
        return IntegralAssignment(()), Fraction(0)
    if workers <= 1:
        results = [_worker((kind, table, m, n, (), bound))]
    else:
        depth = 1
        while m ** depth < 4 * workers and depth < n:
            depth += 1
        prefixes = [p for p in itertools.product(range(m), repeat=depth)
                    if all(table[k][j] != math.inf for j, k in enumerate(p))]
        jobs = [(kind, table, m, n, p, bound) for p in prefixes]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, jobs))
    found = [(span, vec) for span, vec in results if vec is not None]
    span, vec = min(found)
    return IntegralAssignment(vec), Fraction(span, scale)


def exact_optimum(instance: Instance, cap: int = DEFAULT_CAP, workers: int = 1
                  ) -> tuple[IntegralAssignment, Fraction]:
    """Minimum makespan over all integral assignments; ties to the
    lexicographically smallest ``machine_of``."""
    _check_size(instance, cap)
    return _run("opt", instance, workers=workers)


def exact_ef_optimum(instance: Instance, cap: int = DEFAULT_CAP, workers: int = 1
                     ) -> tuple[IntegralAssignment, Fraction]:
    """Minimum makespan over locally efficient integral assignments."""
    _check_size(instance, cap)
    if instance.jobs == 0:
        return IntegralAssignment(()), Fraction(0)
    scale, _ = instance.scaled_integer_costs()
    seed = min_total_assignment(instance)
    bound = makespan(instance, seed)
    greedy, _ = greedy_bundles(instance)
    bound = min(bound, makespan(instance, find_approx(instance, greedy).final_assignment))
    return _run("ef", instance, bound=int(bound * scale), workers=workers)


def oracle_bundles(instance: Instance, cap: int = DEFAULT_CAP, workers: int = 1
                   ) -> tuple[BundleSet, Fraction]:
    assignment, span = exact_optimum(instance, cap, workers)
    return bundles_from_assignment(instance, assignment), span


__all__ = [
    "DEFAULT_CAP", "Infeasible", "NonTermination", "PhaseRecord", "PhasedSchedule",
    "TooLarge", "exact_ef_optimum", "exact_optimum", "find_approx", "greedy_bundles",
    "min_total_assignment", "oracle_bundles", "union_phase_assignments",
]
