"""Minimum-weight perfect assignment of bundles to machines.

The Hungarian method runs on exact rationals with infinite edges removed.
Every minimum-weight perfect matching is tight under any optimal dual
(complementary slackness), so the lexicographically smallest optimum is
picked greedily inside the tight-edge subgraph.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (INF, BundleSet, Cost, Instance, IntegralAssignment, ScheduleError,
                   assignment_from_bundles, bundle_load)


class NoFiniteMatching(ScheduleError):
    """Every bijection uses an infinite edge."""


@dataclass(frozen=True)
class MatchingResult:
    permutation: tuple[int, ...]
    total: Fraction


def _hungarian(w: Sequence[Sequence[Cost]]):
    """Return (row->col, row duals, col duals); 0-indexed."""
    m = len(w)
    u = [Fraction(0)] * (m + 1)
    v = [Fraction(0)] * (m + 1)
    owner = [0] * (m + 1)  # owner[col] = row (1-indexed), 0 = free
    way = [0] * (m + 1)
    for i in range(1, m + 1):
        owner[0] = i
        j0 = 0
        minv = [INF] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            delta = INF
            j1 = -1
            row = w[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                c = row[j - 1]
                if c is not INF:
                    cur = c - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if delta is INF:
                raise NoFiniteMatching("no perfect matching avoids infinite weights")
            for j in range(m + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                elif minv[j] is not INF:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    perm = [0] * m
    for j in range(1, m + 1):
        perm[owner[j] - 1] = j - 1
    return perm, u[1:], v[1:]


def _lex_smallest(perm: list[int], tight: list[list[int]]) -> list[int]:
    m = len(perm)
    owner = [0] * m
    for r, c in enumerate(perm):
        owner[c] = r
    fixed_col = [False] * m

    def augment(r, target, banned, seen):
        # alternating path from row r to the freed column `target`
        for c in tight[r]:
            if fixed_col[c] or c == banned or seen[c]:
                continue
            seen[c] = True
            if c == target or augment(owner[c], target, banned, seen):
                perm[r] = c
                owner[c] = r
                return True
        return False

    for i in range(m):
        for k in tight[i]:
            if k == perm[i]:
                break
            if fixed_col[k]:
                continue
            r = owner[k]
            freed = perm[i]
            saved = (perm[:], owner[:])
            seen = [False] * m
            if augment(r, freed, k, seen):
                perm[i] = k
                owner[k] = i
                break
            perm[:], owner[:] = saved
        fixed_col[perm[i]] = True
    return perm


def min_weight_assignment(weights: Sequence[Sequence[Cost]]) -> MatchingResult:
    """Minimum-total bijection, machine ``i`` -> column ``permutation[i]``.

    Ties go to the lexicographically smallest permutation vector.
    """
    m = len(weights)
    if any(len(row) != m for row in weights):
        raise ValueError("weight matrix must be square")
    if m == 0:
        return MatchingResult((), Fraction(0))
    w = [[c if c is INF else Fraction(c) for c in row] for row in weights]
    perm, u, v = _hungarian(w)
    tight = [[k for k in range(m) if w[i][k] is not INF and w[i][k] == u[i] + v[k]]
             for i in range(m)]
    perm = _lex_smallest(perm, tight)
    total = sum((w[i][perm[i]] for i in range(m)), Fraction(0))
    return MatchingResult(tuple(perm), total)


def le_of_bundles(instance: Instance, bundle_set: BundleSet
                  ) -> tuple[IntegralAssignment, MatchingResult]:
    """Locally efficient placement of the given bundles, one per machine."""
    bundle_set.check(instance)
    m = instance.machines
    weights = [[bundle_load(instance, i, b) for b in bundle_set.bundles] for i in range(m)]
    result = min_weight_assignment(weights)
    placement = [bundle_set.bundles[result.permutation[i]] for i in range(m)]
    return assignment_from_bundles(instance.jobs, placement), result
