"""``envyfree`` command line.

Exit codes:
    0  success
    1  unexpected internal error
    2  bad command-line usage (argparse)
    3  unreadable or malformed document, or dimension mismatch
    4  infeasible instance (a job has no finite machine)
    5  enumeration exceeds --cap
    6  verification failed (not locally efficient or not envy-free)
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import commands
from .core import Infeasible, TooLarge
from .documents import (DocumentError, assignment_from_doc, dumps, instance_from_doc,
                        payments_from_doc, read_doc)
from .envy import NotLocallyEfficient
from .indivisible import DEFAULT_CAP

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_TOO_LARGE, EXIT_VERIFY = (
    0, 1, 2, 3, 4, 5, 6)


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_instance(path: str):
    return instance_from_doc(read_doc(path))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="envyfree",
                                description="Envy-free makespan scheduling on unrelated machines.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance document")
    g.add_argument("kind", choices=["random-uniform", "random-inf-mask", "lowerbound", "identical"])
    g.add_argument("-m", "--machines", type=int, default=2)
    g.add_argument("-n", "--jobs", type=int, default=3)
    g.add_argument("--denominator", "-D", type=int, default=10)
    g.add_argument("--rho", default="1/3", help="mask probability as p/q")
    g.add_argument("--ell", type=int, default=1)
    g.add_argument("--row", help="comma-separated costs for the identical kind")
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--out")

    s = sub.add_parser("solve", help="compute an envy-free schedule with payments")
    s.add_argument("instance")
    s.add_argument("--mode", choices=["indivisible", "divisible"], default="indivisible")
    s.add_argument("--beta", default="2", help="threshold factor as p/q, at least 2")
    s.add_argument("--initial", choices=["oracle", "greedy", "file"], default="greedy")
    s.add_argument("--initial-file", help="assignment document for --initial file")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    s.add_argument("--out")

    v = sub.add_parser("verify", help="check local efficiency and envy-freeness")
    v.add_argument("instance")
    v.add_argument("assignment")
    v.add_argument("payments")
    v.add_argument("--out")

    o = sub.add_parser("oracle", help="exact optimum and envy-free optimum by enumeration")
    o.add_argument("instance")
    o.add_argument("--cap", type=int, default=DEFAULT_CAP)
    o.add_argument("--workers", type=int, default=1)
    o.add_argument("--out")

    lb = sub.add_parser("lowerbound", help="lower-bound family experiments")
    lbs = lb.add_subparsers(dest="experiment", required=True)
    gap = lbs.add_parser("gap", help="exact optimum vs envy-free optimum on the family")
    gap.add_argument("-n", "--jobs", type=int, required=True)
    gap.add_argument("--ell", type=int, default=1)
    gap.add_argument("--cap", type=int, default=DEFAULT_CAP)
    gap.add_argument("--workers", type=int, default=1)
    gap.add_argument("--out")
    cnt = lbs.add_parser("counting", help="approximate counting-argument comparison")
    src = cnt.add_mutually_exclusive_group(required=True)
    src.add_argument("--log2-n", type=float)
    src.add_argument("--log10-n", type=float)
    cnt.add_argument("--ell", type=float, help="default: coupled to n")
    cnt.add_argument("--out")

    b = sub.add_parser("bench", help="run a benchmark suite and write a CSV table")
    b.add_argument("suite", help="JSON suite document")
    b.add_argument("--seed", type=_seed, default=0)
    b.add_argument("--cap", type=int, default=2 ** 16)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out")
    return p


def _run(args) -> int:
    if args.command == "generate":
        row = args.row.split(",") if args.row else None
        doc = commands.cmd_generate(args.kind, m=args.machines, n=args.jobs,
                                    denominator=args.denominator, rho=args.rho, ell=args.ell,
                                    row=row, seed=args.seed)
        _emit(dumps(doc), args.out)
        return EXIT_OK
    if args.command == "solve":
        inst = _load_instance(args.instance)
        initial = None
        if args.initial == "file":
            if not args.initial_file:
                raise DocumentError("--initial file requires --initial-file")
            initial = assignment_from_doc(read_doc(args.initial_file))
            initial.check(inst)
        report = commands.cmd_solve(inst, args.mode, args.beta, args.initial, args.cap,
                                    initial, args.workers, args.timing)
        _emit(dumps(report), args.out)
        return EXIT_OK
    if args.command == "verify":
        inst = _load_instance(args.instance)
        assignment = assignment_from_doc(read_doc(args.assignment))
        payments = payments_from_doc(read_doc(args.payments))
        if len(payments) != inst.machines:
            raise DocumentError("payment vector length differs from machine count")
        report = commands.cmd_verify(inst, assignment, payments)
        _emit(dumps(report), args.out)
        ok = report["locally_efficient"] and report["envy_free"]
        return EXIT_OK if ok else EXIT_VERIFY
    if args.command == "oracle":
        report = commands.cmd_oracle(_load_instance(args.instance), args.cap, args.workers)
        _emit(dumps(report), args.out)
        return EXIT_OK
    if args.command == "lowerbound":
        if args.experiment == "gap":
            report = commands.cmd_gap(args.jobs, args.ell, args.cap, args.workers)
        else:
            n_log2 = args.log2_n if args.log2_n is not None else args.log10_n * math.log2(10)
            report = commands.cmd_counting(n_log2, args.ell)
        _emit(dumps(report), args.out)
        return EXIT_OK
    if args.command == "bench":
        suite = read_doc(args.suite)
        _emit(commands.cmd_bench(suite, args.seed, args.cap, args.workers), args.out)
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (DocumentError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except NotLocallyEfficient as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
