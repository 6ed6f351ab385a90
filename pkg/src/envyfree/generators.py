"""Seeded instance generators.  All randomness comes from ``random.Random``."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .core import INF, Instance, as_cost, as_fraction
from .lowerbound import LowerBoundParams, generate

KINDS = ("random-uniform", "random-inf-mask", "lowerbound", "identical")


def random_uniform(m: int, n: int, denominator: int, rng: random.Random) -> Instance:
    """Costs ``k / D`` with ``k`` uniform on ``1..D``."""
    if m < 1 or n < 0 or denominator < 1:
        raise ValueError("need m >= 1, n >= 0, D >= 1")
    return Instance.from_rows(
        [[Fraction(rng.randint(1, denominator), denominator) for _ in range(n)]
         for _ in range(m)], n)


def random_inf_mask(m: int, n: int, denominator: int, rho, rng: random.Random) -> Instance:
    """Uniform costs, each entry infinite with probability ``rho``.

    A column masked entirely gets one random entry restored.
    """
    rho = as_fraction(rho)
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")
    base = random_uniform(m, n, denominator, rng)
    rows = [list(r) for r in base.costs]
    for i in range(m):
        for j in range(n):
            if rng.randrange(rho.denominator) < rho.numerator:
                rows[i][j] = INF
    for j in range(n):
        if all(rows[i][j] is INF for i in range(m)):
            i = rng.randrange(m)
            rows[i][j] = base.costs[i][j]
    return Instance.from_rows(rows, n)


def identical(m: int, row: Sequence) -> Instance:
    row = [as_cost(c) for c in row]
    return Instance.from_rows([list(row) for _ in range(m)], len(row))


def make_instance(kind: str, *, m: int = 2, n: int = 3, denominator: int = 10,
                  rho="1/3", ell: int = 1, row: Sequence | None = None,
                  seed: int = 0) -> Instance:
    rng = random.Random(seed)
    if kind == "random-uniform":
        return random_uniform(m, n, denominator, rng)
    if kind == "random-inf-mask":
        return random_inf_mask(m, n, denominator, rho, rng)
    if kind == "lowerbound":
        return generate(LowerBoundParams(n, ell))
    if kind == "identical":
        if row is None:
            row = [Fraction(rng.randint(1, denominator), denominator) for _ in range(n)]
        return identical(m, row)
    raise ValueError(f"unknown instance kind {kind!r}; choose from {', '.join(KINDS)}")
