"""Hard instances on which every locally efficient schedule is long.

Machine ``i <= n`` (1-indexed) runs job ``i`` at cost 1, earlier jobs
``j < i`` at ``1 - (i - j) / (2 (n - j))`` and later jobs not at all.
Tail machine ``n + t`` runs every job at cost ``2**t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import INF, Instance, IntegralAssignment, makespan
from .indivisible import DEFAULT_CAP, exact_ef_optimum, exact_optimum


@dataclass(frozen=True)
class LowerBoundParams:
    n: int
    ell: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("the family needs n >= 2 jobs")
        if self.ell < 1:
            raise ValueError("the family needs ell >= 1 tail machines")

    @property
    def m(self) -> int:
        return self.n + self.ell


def generate(params: LowerBoundParams) -> Instance:
    n, ell = params.n, params.ell
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if j == i:
                row.append(Fraction(1))
            elif j < i:
                row.append(1 - Fraction(i - j, 2 * (n - j)))
            else:
                row.append(INF)
        rows.append(row)
    for t in range(1, ell + 1):
        rows.append([Fraction(2 ** t)] * n)
    return Instance.from_rows(rows, n)


def diagonal_assignment(params: LowerBoundParams) -> IntegralAssignment:
    return IntegralAssignment(tuple(range(params.n)))


def ell_real(n_log2: float) -> float:
    """Unfloored ``log2(log n / (4 log log n))``, logs base 2."""
    loglog = math.log2(n_log2) if n_log2 > 0 else -math.inf
    if not loglog > 0:
        raise ValueError("log log n must be positive (need n > 2)")
    ratio = n_log2 / (4 * loglog)
    return math.log2(ratio)


def ell_for(n: int) -> int:
    """Tail length coupled to ``n`` as in the asymptotic construction.

    Values ``<= 0`` mean the construction is degenerate at this ``n``.
    Floating point; diagnostic only.
    """
    if n <= 2:
        raise ValueError("ell_for needs n > 2")
    return math.floor(ell_real(math.log2(n)))


@dataclass(frozen=True)
class CountingBound:
    increase: float
    decrease: float

    @property
    def established(self) -> bool:
        return self.decrease > self.increase


def counting_bound(n_log2: float, ell: float) -> CountingBound:
    """Compare the two sides of the shifting argument (approximate floats).

    ``increase`` bounds the extra load from pushing the bundles of
    machines ``n .. n + ell`` one machine down; ``decrease`` approximates
    the saving on machines ``1 .. n - 1`` via ``(1/2)(ln n - ln(3 * 2**ell))``.
    """
    two_ell = 2.0 ** ell
    increase = (ell + 3) * two_ell
    decrease = 0.5 * (n_log2 * math.log(2) - math.log(3 * two_ell))
    return CountingBound(increase, decrease)


@dataclass(frozen=True)
class JobCountReport:
    precondition: bool  # makespan < 2**ell
    per_machine: bool  # fewer than 2**(ell+1) jobs everywhere
    tail_each: bool  # machine n+t holds fewer than 2**ell / 2**t jobs
    tail_total: bool  # the tail jointly holds fewer than 2**ell jobs

    @property
    def passed(self) -> bool:
        return self.precondition and self.per_machine and self.tail_each and self.tail_total


def verify_lemma41(instance: Instance, assignment: IntegralAssignment, ell: int) -> JobCountReport:
    n = instance.jobs
    if instance.machines != n + ell:
        raise ValueError("instance is not from the lower-bound family with this ell")
    if not makespan(instance, assignment) < 2 ** ell:
        return JobCountReport(False, False, False, False)
    counts = [0] * instance.machines
    for k in assignment.machine_of:
        counts[k] += 1
    per_machine = all(c < 2 ** (ell + 1) for c in counts)
    # c < 2**ell / 2**t  <=>  c * 2**t < 2**ell
    tail_each = all(counts[n + t - 1] * 2 ** t < 2 ** ell for t in range(1, ell + 1))
    tail_total = sum(counts[n:]) < 2 ** ell
    return JobCountReport(True, per_machine, tail_each, tail_total)


@dataclass(frozen=True)
class GapResult:
    opt: Fraction
    ef_opt: Fraction
    ratio: Fraction
    opt_assignment: IntegralAssignment
    ef_assignment: IntegralAssignment


def gap_experiment(params_or_instance, cap: int = DEFAULT_CAP, workers: int = 1,
                   expect_unit_opt: bool | None = None) -> GapResult:
    """Exact optimum, exact envy-free optimum, and their ratio.

    Accepts family parameters or a ready instance (for control runs).
    """
    if isinstance(params_or_instance, LowerBoundParams):
        instance = generate(params_or_instance)
        expect_unit_opt = True if expect_unit_opt is None else expect_unit_opt
    else:
        instance = params_or_instance
    a, opt = exact_optimum(instance, cap, workers)
    if expect_unit_opt and opt != 1:
        raise AssertionError(f"family optimum should be 1, got {opt}")
    b, ef = exact_ef_optimum(instance, cap, workers)
    ratio = ef / opt if opt else Fraction(1)
    return GapResult(opt, ef, ratio, a, b)
