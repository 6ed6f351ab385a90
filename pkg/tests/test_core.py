from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from envyfree.core import (INF, BundleSet, FractionalAssignment, Instance, IntegralAssignment,
                           PreconditionError, as_cost, bundles_from_assignment, lex_compare,
                           load, loads, makespan, validate_supports)
from envyfree.lowerbound import LowerBoundParams, diagonal_assignment, generate


def test_infinity_arithmetic():
    assert INF + Fraction(3) is INF
    assert Fraction(3) + INF is INF
    assert INF * Fraction(2) is INF
    assert INF * 0 == 0
    assert Fraction(10 ** 30) < INF
    assert not INF < Fraction(10 ** 30)
    assert max(Fraction(1), INF) is INF
    assert Fraction(2) != INF


def test_as_cost_parsing():
    assert as_cost("3/6") == Fraction(1, 2)
    assert as_cost("inf") is INF
    assert as_cost(4) == 4
    with pytest.raises(ValueError):
        as_cost(-1)
    with pytest.raises(TypeError):
        as_cost(0.5)


def test_instance_shape_and_flags():
    inst = Instance.from_rows([[1, "inf"], ["inf", "inf"]])
    assert not inst.fully_assignable
    assert Instance.from_rows([[1, "inf"], ["inf", 2]]).fully_assignable
    with pytest.raises(ValueError):
        Instance(2, 2, ((1, 2),))


def test_load_examples():
    empty = Instance.from_rows([[], []], 0)
    assert load(empty, IntegralAssignment(()), 1) == 0
    inst = Instance.from_rows([[1, 3], [2, 1]])
    assert load(inst, IntegralAssignment((0, 0)), 0) == 4
    lb = generate(LowerBoundParams(6, 2))
    assert load(lb, diagonal_assignment(LowerBoundParams(6, 2)), 0) == 1


def test_load_infinite_only_on_positive_share():
    inst = Instance.from_rows([[1, INF], [1, 1]])
    assert load(inst, IntegralAssignment((0, 0)), 0) is INF
    frac = FractionalAssignment(((1, 0), (0, 1)))
    assert load(inst, frac, 0) == 1


def test_makespan_examples():
    assert makespan(Instance.from_rows([[], [], []], 0), IntegralAssignment(())) == 0
    lb_params = LowerBoundParams(5, 1)
    assert makespan(generate(lb_params), diagonal_assignment(lb_params)) == 1
    assert makespan(Instance.from_rows([[1, 3], [2, 1]]), IntegralAssignment((0, 1))) == 1


def test_dimension_mismatch():
    inst = Instance.from_rows([[1, 3], [2, 1]])
    with pytest.raises(ValueError):
        makespan(inst, IntegralAssignment((0,)))
    with pytest.raises(ValueError):
        makespan(inst, IntegralAssignment((0, 2)))
    with pytest.raises(ValueError):
        loads(inst, FractionalAssignment(((Fraction(1, 2), 1), (0, 0))))


@pytest.mark.parametrize("a, b, expected", [
    ((1, 1), (1, 1), 0),
    ((1, 3, 2), (2, 2, 2), 1),
    ((2, 2), (3, 1), -1),
])
def test_lex_compare_examples(a, b, expected):
    assert lex_compare([Fraction(x) for x in a], [Fraction(x) for x in b]) == expected


def test_lex_compare_rejects_infinite():
    with pytest.raises(ValueError):
        lex_compare([INF], [Fraction(1)])


loads_st = st.lists(st.fractions(min_value=0, max_value=10, max_denominator=7), min_size=1,
                    max_size=5)


@given(loads_st, st.data())
def test_lex_compare_is_antisymmetric_and_permutation_blind(a, data):
    b = data.draw(st.lists(st.fractions(min_value=0, max_value=10, max_denominator=7),
                           min_size=len(a), max_size=len(a)))
    assert lex_compare(a, b) == -lex_compare(b, a)
    assert lex_compare(a, list(reversed(a))) == 0
    if max(a) < max(b):
        assert lex_compare(a, b) == -1


def test_bundles_from_assignment():
    inst = Instance.from_rows([[1, 1], [1, 1]])
    bs = bundles_from_assignment(inst, IntegralAssignment((1, 1)))
    assert bs.bundles == (frozenset(), frozenset({0, 1}))
    assert bs.origin_machine == (0, 1)
    empty = bundles_from_assignment(Instance.from_rows([[], []], 0), IntegralAssignment(()))
    assert empty.bundles == (frozenset(), frozenset())
    params = LowerBoundParams(4, 2)
    lb = bundles_from_assignment(generate(params), diagonal_assignment(params))
    assert lb.bundles == tuple(frozenset({i}) for i in range(4)) + (frozenset(),) * 2


def test_bundle_set_validation():
    inst = Instance.from_rows([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        BundleSet((frozenset({0}), frozenset({0, 1}))).check(inst)
    with pytest.raises(ValueError):
        BundleSet((frozenset({0}), frozenset())).check(inst)


def test_validate_supports():
    inst = Instance.from_rows([[1, INF], [1, 1]])
    validate_supports(inst, FractionalAssignment(((1, 0), (0, 1))))
    with pytest.raises(PreconditionError):
        validate_supports(inst, FractionalAssignment(((0, Fraction(1, 2)), (1, Fraction(1, 2)))))


@given(st.lists(st.lists(st.fractions(min_value=0, max_value=5, max_denominator=5),
                         min_size=4, max_size=4), min_size=2, max_size=3),
       st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_load_is_additive_over_disjoint_jobs(rows, vec):
    inst = Instance.from_rows(rows)
    vec = tuple(k % inst.machines for k in vec)
    left = Instance.from_rows([r[:2] for r in rows])
    right = Instance.from_rows([r[2:] for r in rows])
    for i in range(inst.machines):
        assert load(inst, IntegralAssignment(vec), i) == (
            load(left, IntegralAssignment(vec[:2]), i)
            + load(right, IntegralAssignment(vec[2:]), i))
