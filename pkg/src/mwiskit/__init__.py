"""Reduce-and-solve toolkit for the maximum weight independent set problem.

The package provides an exact data-reduction engine with optional
GNN-guided screening, a small-instance exact solver, two local-search
heuristics (a baseline iterated local search and a concurrent
difference-core portfolio on top of it), and benchmarking utilities.
"""

from .graphs import StaticGraph, DynamicGraph, VertexStatus, parse_graph, write_graph
from .exact import Budget, ExactResult, solve_exact, enumerate_independent_sets
from .reductions import ReductionLog, RuleOutcome, restore_solution
from .scheduler import ReducerBudgets, ScreeningMode, run_reduce

__all__ = [
    "StaticGraph",
    "DynamicGraph",
    "VertexStatus",
    "parse_graph",
    "write_graph",
    "Budget",
    "ExactResult",
    "solve_exact",
    "enumerate_independent_sets",
    "ReductionLog",
    "RuleOutcome",
    "restore_solution",
    "ReducerBudgets",
    "ScreeningMode",
    "run_reduce",
]
