"""Envy-free makespan scheduling on unrelated machines, in exact arithmetic."""
from .core import (INF, BundleSet, FractionalAssignment, Infeasible, Instance,
                   IntegralAssignment, PreconditionError, ScheduleError, TooLarge,
                   bundles_from_assignment, lex_compare, load, loads, makespan)
from .divisible import lexmin_fractional, min_makespan_fractional, solve_divisible_ef
from .envy import (EfficiencyCertificate, NotLocallyEfficient, Payments, compute_payments,
                   is_locally_efficient, verify_envy_free)
from .indivisible import (exact_ef_optimum, exact_optimum, find_approx, greedy_bundles)
from .matching import NoFiniteMatching, le_of_bundles, min_weight_assignment

__version__ = "0.1.0"

__all__ = [
    "INF", "BundleSet", "EfficiencyCertificate", "FractionalAssignment", "Infeasible",
    "Instance", "IntegralAssignment", "NoFiniteMatching", "NotLocallyEfficient", "Payments",
    "PreconditionError", "ScheduleError", "TooLarge", "bundles_from_assignment",
    "compute_payments", "exact_ef_optimum", "exact_optimum", "find_approx", "greedy_bundles",
    "is_locally_efficient", "le_of_bundles", "lex_compare", "lexmin_fractional", "load",
    "loads", "makespan", "min_makespan_fractional", "min_weight_assignment",
    "solve_divisible_ef", "verify_envy_free",
]
