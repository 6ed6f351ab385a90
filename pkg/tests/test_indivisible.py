import random
from fractions import Fraction

import pytest

from envyfree.core import (INF, BundleSet, Instance, IntegralAssignment, PreconditionError,
                           TooLarge, bundles_from_assignment, makespan)
from envyfree.envy import is_locally_efficient
from envyfree.indivisible import (exact_ef_optimum, exact_optimum, find_approx, greedy_bundles,
                                  min_total_assignment, oracle_bundles, union_phase_assignments)
from envyfree.lowerbound import LowerBoundParams, diagonal_assignment, generate

from _oracles import brute_is_le, brute_optima, rand_instance, rand_le_partial

F = Fraction


def _check_schedule(inst, sched):
    final = sched.final_assignment
    assert is_locally_efficient(inst, final).verdict
    assert brute_is_le(inst, final)
    assert sched.q <= inst.machines.bit_length()
    assert makespan(inst, final) <= sched.q * sched.beta * sched.m_init
    for rec in sched.phases:
        assert rec.discarded <= rec.active_at_start // 2
        assert rec.phase_makespan <= sched.threshold
        assert list(rec.le_totals) == sorted(rec.le_totals, reverse=True)
    assert union_phase_assignments(inst.jobs, sched.phase_assignments) == final


def test_single_phase_when_already_below_threshold():
    inst = Instance.from_rows([[1, 3], [2, 1]])
    sched = find_approx(inst, bundles_from_assignment(inst, IntegralAssignment((0, 1))))
    assert sched.q == 1
    assert sched.final_assignment.machine_of == (0, 1)
    assert sched.threshold == 2


def test_no_jobs():
    inst = Instance.from_rows([[], []], 0)
    sched = find_approx(inst, bundles_from_assignment(inst, IntegralAssignment(())))
    assert sched.q == 1
    assert sched.final_assignment.machine_of == ()
    assert makespan(inst, sched.final_assignment) == 0


def test_lower_bound_family_run():
    params = LowerBoundParams(5, 1)
    inst = generate(params)
    sched = find_approx(inst, bundles_from_assignment(inst, diagonal_assignment(params)), 2)
    assert sched.m_init == 1
    _check_schedule(inst, sched)
    assert makespan(inst, sched.final_assignment) >= exact_ef_optimum(inst)[1]


def test_find_approx_preconditions():
    inst = Instance.from_rows([[1, 1], [1, 1]])
    start = bundles_from_assignment(inst, IntegralAssignment((0, 1)))
    with pytest.raises(PreconditionError):
        find_approx(inst, start, beta=F(3, 2))
    with pytest.raises(PreconditionError):
        find_approx(inst, start, m_init=F(1, 2))
    with pytest.raises(ValueError):
        find_approx(inst, BundleSet((frozenset({0}), frozenset())))


def test_find_approx_forces_discards():
    # one machine is hopeless at everything; the LE placement of the bundles
    # that the cheap start produced lands badly, so a second phase is needed
    rng = random.Random(77)
    multi = 0
    for _ in range(300):
        inst = rand_instance(rng, rng.randint(2, 5), rng.randint(1, 6), inf_prob=0.2)
        start, span = greedy_bundles(inst)
        if span == 0:
            continue
        sched = find_approx(inst, start)
        _check_schedule(inst, sched)
        multi += sched.q > 1
    assert multi > 0


def test_find_approx_larger_beta():
    rng = random.Random(5)
    for _ in range(40):
        inst = rand_instance(rng, 4, 5, positive=True)
        start, _ = greedy_bundles(inst)
        _check_schedule(inst, find_approx(inst, start, beta=F(2718281828459045, 10 ** 15)))


def test_exact_optimum_examples():
    assert exact_optimum(generate(LowerBoundParams(4, 1)))[1] == 1
    a, span = exact_optimum(Instance.from_rows([[1, 1], [10, 10]]))
    assert a.machine_of == (0, 0) and span == 2
    a, span = exact_optimum(Instance.from_rows([[4], [3]]))
    assert a.machine_of == (1,) and span == 3


def test_oracle_errors():
    with pytest.raises(TooLarge):
        exact_optimum(Instance.from_rows([[1] * 10] * 4), cap=1000)
    with pytest.raises(TooLarge):
        exact_ef_optimum(Instance.from_rows([[1] * 10] * 4), cap=1000)
    from envyfree.core import Infeasible
    with pytest.raises(Infeasible):
        exact_optimum(Instance.from_rows([[INF], [INF]]))


def test_exact_ef_optimum_examples():
    ident = Instance.from_rows([[3, 1, 2, 2]] * 3)
    assert exact_ef_optimum(ident)[1] == exact_optimum(ident)[1]
    lb = generate(LowerBoundParams(4, 1))
    assert exact_ef_optimum(lb)[1] >= exact_optimum(lb)[1]
    single = Instance.from_rows([[1, 2, 3]])
    assert exact_ef_optimum(single) == (IntegralAssignment((0, 0, 0)), 6)


def test_oracles_against_brute_force():
    rng = random.Random(19)
    for _ in range(60):
        inst = rand_instance(rng, rng.randint(1, 4), rng.randint(0, 5), inf_prob=0.25)
        opt, vec, ef, ef_vec = brute_optima(inst)
        a, span = exact_optimum(inst)
        assert (span, a.machine_of) == (opt, vec)
        a, span = exact_ef_optimum(inst)
        assert (span, a.machine_of) == (ef, ef_vec)


def test_parallel_matches_serial():
    rng = random.Random(23)
    for _ in range(4):
        inst = rand_instance(rng, 4, 6, inf_prob=0.2)
        assert exact_optimum(inst, workers=3) == exact_optimum(inst)
        assert exact_ef_optimum(inst, workers=3) == exact_ef_optimum(inst)


def test_greedy_examples():
    bundles, span = greedy_bundles(Instance.from_rows([[3, 3, 2]] * 2))
    assert span == 5
    assert bundles.bundles == (frozenset({0, 2}), frozenset({1}))
    bundles, span = greedy_bundles(Instance.from_rows([[4], [3]]))
    assert bundles.bundles == (frozenset(), frozenset({0})) and span == 3
    bundles, span = greedy_bundles(Instance.from_rows([[], []], 0))
    assert span == 0 and bundles.bundles == (frozenset(), frozenset())


def test_min_total_assignment_is_le():
    rng = random.Random(3)
    for _ in range(30):
        inst = rand_instance(rng, 3, 4, inf_prob=0.3)
        assert brute_is_le(inst, min_total_assignment(inst))


def test_oracle_bundles():
    inst = Instance.from_rows([[1, 1], [10, 10]])
    bundles, span = oracle_bundles(inst)
    assert span == 2 and bundles.origin_machine == (0, 1)


def test_union_examples():
    one = (frozenset({0, 1}), frozenset())
    assert union_phase_assignments(2, [one]).machine_of == (0, 0)
    two = [(frozenset({0}), frozenset()), (frozenset(), frozenset({1}))]
    assert union_phase_assignments(2, two).machine_of == (0, 1)
    with pytest.raises(ValueError):
        union_phase_assignments(2, [one, (frozenset({1}), frozenset())])


def test_union_of_le_assignments_is_le():
    rng = random.Random(34)
    for _ in range(80):
        m, n = rng.randint(2, 4), rng.randint(2, 6)
        inst = rand_instance(rng, m, n, inf_prob=0.2)
        jobs = list(range(n))
        rng.shuffle(jobs)
        cut = rng.randint(0, n)
        first = rand_le_partial(rng, inst, jobs[:cut])
        second = rand_le_partial(rng, inst, jobs[cut:])
        merged = union_phase_assignments(n, [first, second])
        assert is_locally_efficient(inst, merged).verdict
