"""Command implementations behind the CLI; each returns a JSON-ready document."""
from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any

from .core import (FractionalAssignment, Instance, IntegralAssignment, TooLarge, as_fraction,
                   bundles_from_assignment, loads, makespan,
                   validate_supports)
from .divisible import min_makespan_fractional, solve_divisible_ef
from .documents import (assignment_to_doc, digest, fmt, instance_to_doc, payments_to_doc)
from .envy import NotLocallyEfficient, compute_payments, is_locally_efficient, verify_envy_free
from .generators import make_instance
from .indivisible import (DEFAULT_CAP, exact_ef_optimum, exact_optimum, find_approx,
                          greedy_bundles)
from .lowerbound import (LowerBoundParams, counting_bound, ell_real, gap_experiment)


def _ratio(a, b):
    if a is None or b is None:
        return None
    if b == 0:
        return fmt(1) if a == 0 else None
    return fmt(Fraction(a) / Fraction(b))


def _opt(x):
    return None if x is None else fmt(x)


def cmd_generate(kind: str, *, m: int = 2, n: int = 3, denominator: int = 10, rho="1/3",
                 ell: int = 1, row=None, seed: int = 0) -> dict:
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    inst = make_instance(kind, m=m, n=n, denominator=denominator, rho=rho, ell=ell,
                         row=row, seed=seed)
    return instance_to_doc(inst)


def _verdicts(instance: Instance, assignment, payments) -> dict:
    cert = is_locally_efficient(instance, assignment)
    out = {"locally_efficient": cert.verdict,
           "envy_free": verify_envy_free(instance, assignment, payments)}
    if not cert.verdict:
        out["witness_cycle"] = list(cert.cycle)
        out["witness_decrease"] = fmt(cert.decrease)
    return out


def cmd_solve(instance: Instance, mode: str = "indivisible", beta="2", initial: str = "greedy",
              cap: int = DEFAULT_CAP, initial_assignment: IntegralAssignment | None = None,
              workers: int = 1, timing: bool = False) -> dict:
    started = time.perf_counter()
    instance.require_assignable()
    report: dict[str, Any] = {"mode": mode, "instance": digest(instance),
                              "machines": instance.machines, "jobs": instance.jobs}
    lp_span, _ = min_makespan_fractional(instance)
    if mode == "divisible":
        assignment, payments, span = solve_divisible_ef(instance)
        report.update({
            "makespan": fmt(span),
            "divisible_opt": fmt(lp_span),
            "divisible_ef_ratio": _ratio(span, lp_span),
            "loads": [fmt(x) for x in loads(instance, assignment)],
        })
    elif mode == "indivisible":
        opt = ef_opt = None
        if initial == "oracle":
            best, opt = exact_optimum(instance, cap, workers)
            bundles = bundles_from_assignment(instance, best)
            _, ef_opt = exact_ef_optimum(instance, cap, workers)
        elif initial == "greedy":
            bundles, _ = greedy_bundles(instance)
        elif initial == "file":
            if initial_assignment is None:
                raise ValueError("--initial file needs an initial assignment")
            bundles = bundles_from_assignment(instance, initial_assignment)
        else:
            raise ValueError(f"unknown initial allocation {initial!r}")
        schedule = find_approx(instance, bundles, as_fraction(beta))
        assignment = schedule.final_assignment
        payments = compute_payments(instance, assignment)
        span = makespan(instance, assignment)
        report.update({
            "beta": fmt(schedule.beta),
            "initial": initial,
            "m_init": fmt(schedule.m_init),
            "threshold": fmt(schedule.threshold),
            "q": schedule.q,
            "discards": [p.discarded for p in schedule.phases],
            "makespan": fmt(span),
            "opt": _opt(opt),
            "ef_opt": _opt(ef_opt),
            "divisible_opt": fmt(lp_span),
            "indivisible_ef_ratio": _ratio(ef_opt, opt),
            "algo_ratio": _ratio(span, opt),
            "loads": [fmt(x) for x in loads(instance, assignment)],
        })
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report["assignment"] = assignment_to_doc(assignment)
    report["payments"] = payments_to_doc(payments)["payments"]
    report["verdicts"] = _verdicts(instance, assignment, payments)
    if timing:
        report["wall_clock_seconds"] = round(time.perf_counter() - started, 6)
    return report


def cmd_verify(instance: Instance, assignment, payments) -> dict:
    assignment.check(instance)
    if isinstance(assignment, FractionalAssignment):
        validate_supports(instance, assignment)
    return {"instance": digest(instance), **_verdicts(instance, assignment, payments)}


def cmd_oracle(instance: Instance, cap: int = DEFAULT_CAP, workers: int = 1) -> dict:
    a, opt = exact_optimum(instance, cap, workers)
    b, ef = exact_ef_optimum(instance, cap, workers)
    return {"instance": digest(instance), "opt": fmt(opt), "ef_opt": fmt(ef),
            "ratio": _ratio(ef, opt),
            "opt_assignment": assignment_to_doc(a),
            "ef_assignment": assignment_to_doc(b)}


def cmd_gap(n: int, ell: int, cap: int = DEFAULT_CAP, workers: int = 1) -> dict:
    res = gap_experiment(LowerBoundParams(n, ell), cap, workers)
    return {"n": n, "ell": ell, "machines": n + ell, "opt": fmt(res.opt),
            "ef_opt": fmt(res.ef_opt), "ratio": fmt(res.ratio),
            "ef_assignment": assignment_to_doc(res.ef_assignment)}


def cmd_counting(n_log2: float, ell: float | None = None) -> dict:
    coupled = ell is None
    if coupled:
        ell = ell_real(n_log2)
    cb = counting_bound(n_log2, ell)
    return {"approximate": True, "log2_n": n_log2, "ell": ell, "ell_coupled": coupled,
            "increase_bound": cb.increase, "decrease_bound": cb.decrease,
            "verdict": "contradiction-established" if cb.established else "not-established"}


BENCH_HEADER = ["kind", "m", "n", "seed", "opt", "ef_opt", "algo", "q", "divisible_opt",
                "ef_ratio", "algo_ratio", "divisible_ratio"]


def _bench_row(task) -> list[str]:
    entry, seed, cap = task
    inst = make_instance(entry["kind"], m=entry.get("m", 2), n=entry.get("n", 3),
                         denominator=entry.get("D", 10), rho=entry.get("rho", "1/3"),
                         ell=entry.get("ell", 1), row=entry.get("row"), seed=seed)
    try:
        best, opt = exact_optimum(inst, cap)
        _, ef = exact_ef_optimum(inst, cap)
        bundles = bundles_from_assignment(inst, best)
    except TooLarge:
        opt = ef = None
        bundles, _ = greedy_bundles(inst)
    schedule = find_approx(inst, bundles, as_fraction(entry.get("beta", 2)))
    algo = makespan(inst, schedule.final_assignment)
    lp_span, _ = min_makespan_fractional(inst)
    _, _, ef_div = solve_divisible_ef(inst)
    return [entry["kind"], str(inst.machines), str(inst.jobs), str(seed),
            _opt(opt) or "", _opt(ef) or "", fmt(algo), str(schedule.q), fmt(lp_span),
            _ratio(ef, opt) or "", _ratio(algo, opt) or "", _ratio(ef_div, lp_span) or ""]


def cmd_bench(suite: dict, seed: int = 0, cap: int = 2 ** 16, workers: int = 1) -> str:
    """Comma-delimited table, one row per generated instance.

    Per-row seeds are drawn from one ``random.Random(seed)`` in suite order,
    so output is fixed by the suite and seed regardless of ``workers``.
    """
    entries = suite.get("entries", []) if isinstance(suite, dict) else suite
    rng = random.Random(seed)
    tasks = []
    for entry in entries:
        for _ in range(int(entry.get("reps", 1))):
            tasks.append((entry, rng.getrandbits(64), int(entry.get("cap", cap))))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_row, tasks))
    else:
        rows = [_bench_row(t) for t in tasks]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    writer.writerows(rows)
    return buf.getvalue()


__all__ = ["BENCH_HEADER", "NotLocallyEfficient", "cmd_bench", "cmd_counting", "cmd_gap",
           "cmd_generate", "cmd_oracle", "cmd_solve", "cmd_verify"]
