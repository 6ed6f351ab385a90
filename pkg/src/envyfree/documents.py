"""JSON documents for instances, assignments, payments and reports.

Exact values are written as ``"p/q"`` strings (``"3/1"`` for integers) and
infinity as ``"inf"``.  On input, plain JSON integers and decimal literals
are accepted and converted exactly.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .core import (INF, FractionalAssignment, Instance, IntegralAssignment, as_cost,
                   as_fraction)
from .envy import Payments


class DocumentError(ValueError):
    pass


def fmt(x) -> str:
    if x is INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_json(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _cost(v):
    if isinstance(v, bool):
        raise DocumentError(f"bad cost entry {v!r}")
    try:
        return as_cost(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad cost entry {v!r}: {exc}") from exc


def _rational(v):
    try:
        return as_fraction(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {v!r}: {exc}") from exc


def instance_to_doc(instance: Instance) -> dict:
    return {
        "machines": instance.machines,
        "jobs": instance.jobs,
        "costs": [[fmt(c) for c in row] for row in instance.costs],
    }


def instance_from_doc(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise DocumentError("instance document must be an object")
    try:
        m, n, costs = doc["machines"], doc["jobs"], doc["costs"]
    except KeyError as exc:
        raise DocumentError(f"instance document lacks {exc}") from exc
    if not isinstance(m, int) or not isinstance(n, int) or not isinstance(costs, list):
        raise DocumentError("machines/jobs must be integers and costs a list")
    try:
        return Instance(m, n, tuple(tuple(_cost(c) for c in row) for row in costs))
    except TypeError as exc:
        raise DocumentError(str(exc)) from exc
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def assignment_to_doc(assignment) -> dict:
    if isinstance(assignment, IntegralAssignment):
        return {"type": "integral", "machine_of": list(assignment.machine_of)}
    return {"type": "fractional",
            "fractions": [[fmt(x) for x in row] for row in assignment.fractions]}


def assignment_from_doc(doc: Any):
    if not isinstance(doc, dict):
        raise DocumentError("assignment document must be an object")
    kind = doc.get("type", "integral" if "machine_of" in doc else "fractional")
    if kind == "integral":
        vec = doc.get("machine_of")
        if not isinstance(vec, list) or not all(
                isinstance(k, int) and not isinstance(k, bool) and k >= 0 for k in vec):
            raise DocumentError("machine_of must be a list of nonnegative integers")
        return IntegralAssignment(tuple(vec))
    if kind == "fractional":
        rows = doc.get("fractions")
        if not isinstance(rows, list):
            raise DocumentError("fractions must be a matrix")
        return FractionalAssignment(tuple(tuple(_rational(x) for x in row) for row in rows))
    raise DocumentError(f"unknown assignment type {kind!r}")


def payments_to_doc(payments) -> dict:
    return {"payments": [fmt(p) for p in payments]}


def payments_from_doc(doc: Any) -> Payments:
    if isinstance(doc, dict):
        doc = doc.get("payments")
    if not isinstance(doc, list):
        raise DocumentError("payments document must hold a list")
    return Payments(tuple(_rational(p) for p in doc))


def digest(instance: Instance) -> str:
    canon = json.dumps(instance_to_doc(instance), separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def read_doc(path: str) -> Any:
    try:
        with open(path) as fh:
            return parse_json(fh.read())
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
