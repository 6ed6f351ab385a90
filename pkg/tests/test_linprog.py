import itertools
import random
from fractions import Fraction

import pytest

from envyfree.linprog import (EQ, GE, LE, InfeasibleLP, LinearProgram, Optimal, UnboundedLP,
                              solve_lp)


def test_single_variable():
    lp = LinearProgram(1, [Fraction(-1)])
    lp.add([1], LE, 1)
    assert solve_lp(lp) == Optimal((Fraction(1),), Fraction(-1))


def test_one_job_two_machines():
    # variables a0, a1, t
    lp = LinearProgram(3, [0, 0, 1])
    lp.add([1, 1, 0], EQ, 1)
    lp.add([1, 0, -1], LE, 0)
    lp.add([0, 3, -1], LE, 0)
    out = solve_lp(lp)
    assert out == Optimal((Fraction(3, 4), Fraction(1, 4), Fraction(3, 4)), Fraction(3, 4))


def test_infeasible_and_unbounded():
    lp = LinearProgram(1)
    lp.add([1], LE, -1)
    assert isinstance(solve_lp(lp), InfeasibleLP)
    lp = LinearProgram(1, [Fraction(-1)])
    lp.add([1], GE, 1)
    assert isinstance(solve_lp(lp), UnboundedLP)


def test_free_variable():
    lp = LinearProgram(2, [1, 0], free={0})
    lp.add([1, -1], GE, -3)  # x >= y - 3
    lp.add([0, 1], LE, 1)
    out = solve_lp(lp)
    assert out.value == -3
    assert out.point == (Fraction(-3), Fraction(0))


def test_malformed():
    lp = LinearProgram(2)
    lp.objective = [Fraction(1)]
    with pytest.raises(ValueError):
        solve_lp(lp)
    lp = LinearProgram(2)
    lp.add([1], LE, 1)
    with pytest.raises(ValueError):
        solve_lp(lp)


def test_degenerate_program_terminates():
    # classic Beale-style cycling example for Dantzig's rule
    lp = LinearProgram(4, [Fraction(-3, 4), 150, Fraction(-1, 50), 6])
    lp.add([Fraction(1, 4), -60, Fraction(-1, 25), 9], LE, 0)
    lp.add([Fraction(1, 2), -90, Fraction(-1, 50), 3], LE, 0)
    lp.add([0, 0, 1, 0], LE, 1)
    out = solve_lp(lp)
    assert out.value == Fraction(-1, 20)


def _vertex_oracle(lp):
    """Minimum over all basic solutions of a small inequality program (x >= 0)."""
    n = lp.num_vars
    rows = [(list(c.coefficients), c.rhs) for c in lp.constraints]
    rows += [([Fraction(int(k == v)) for k in range(n)], Fraction(0)) for v in range(n)]
    best = None
    for pick in itertools.combinations(range(len(rows)), n):
        a = [list(rows[r][0]) + [rows[r][1]] for r in pick]
        # Gaussian elimination
        ok = True
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                ok = False
                break
            a[col], a[piv] = a[piv], a[col]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col] / a[col][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        if not ok:
            continue
        x = [a[r][n] / a[r][r] for r in range(n)]
        if lp.feasible(x):
            v = lp.value(x)
            if best is None or v < best:
                best = v
    return best


def test_random_programs_against_vertex_enumeration_and_sampling():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 3)
        lp = LinearProgram(n, [Fraction(rng.randint(-3, 3)) for _ in range(n)])
        for _ in range(rng.randint(1, 4)):
            lp.add([Fraction(rng.randint(-2, 3)) for _ in range(n)], LE,
                   Fraction(rng.randint(0, 6)))
        lp.add([1] * n, LE, 5)  # keep it bounded
        out = solve_lp(lp)
        assert isinstance(out, Optimal)  # x = 0 is feasible
        assert lp.feasible(out.point)
        assert out.value == _vertex_oracle(lp)
        for _ in range(30):
            x = [Fraction(rng.randint(0, 10), 2) for _ in range(n)]
            if lp.feasible(x):
                assert out.value <= lp.value(x)
        assert solve_lp(lp) == out
