"""Exact maximum-weight-independent-set solving on small graphs.

Branch-and-bound over bitmask-encoded subgraphs. This is the subproblem
engine used by the expensive reduction rules and the ground-truth oracle
for the test suite. Intended scale: a few dozen vertices.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .graphs import StaticGraph


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    BUDGET_EXCEEDED = "budget_exceeded"


class EnumerationOverflow(Exception):
    """Raised when enumerate_independent_sets exceeds its cap."""


@dataclass
class Budget:
    """Work limits for the exact solver.

    ``node_budget`` counts branch expansions; ``time_limit`` is an
    optional wall-clock cap in seconds.
    """

    node_budget: int = 1_000_000
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.node_budget < 1:
            raise ValueError("node budget must be >= 1")


@dataclass
class ExactResult:
    weight: int
    vertices: frozenset[int]
    status: SolveStatus

    @property
    def optimal(self) -> bool:
        return self.status == SolveStatus.OPTIMAL


def _mask_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Solver:
    """Branch on a maximum-degree vertex with a total-remaining-weight bound.

    Pruning is strict (only branches that cannot reach a weight > best are
    cut), so among all optima the lexicographically smallest vertex set is
    found deterministically.
    """

    __slots__ = (
        "nbr", "weight", "n", "best_weight", "best_set",
        "nodes", "node_budget", "deadline", "exceeded",
    )

    def __init__(self, g: StaticGraph, budget: Budget):
        self.n = g.n
        self.weight = g.weight
        self.nbr = [0] * g.n
        for v in range(g.n):
            m = 0
            for u in g.adjacency[v]:
                m |= 1 << u
            self.nbr[v] = m
        self.best_weight = -1
        self.best_set = 0
        self.nodes = 0
        self.node_budget = budget.node_budget
        self.deadline = (
            time.monotonic() + budget.time_limit if budget.time_limit else None
        )
        self.exceeded = False

    def run(self) -> ExactResult:
        total = sum(self.weight[v] for v in range(self.n))
        self._branch((1 << self.n) - 1, 0, 0, total)
        status = SolveStatus.BUDGET_EXCEEDED if self.exceeded else SolveStatus.OPTIMAL
        vs = frozenset(_mask_bits(self.best_set))
        return ExactResult(max(self.best_weight, 0), vs, status)

    def _record(self, cur_weight: int, cur_set: int) -> None:
        if cur_weight > self.best_weight or (
            cur_weight == self.best_weight and cur_set < self.best_set
        ):
            self.best_weight = cur_weight
            self.best_set = cur_set

    def _branch(self, avail: int, cur_weight: int, cur_set: int, remaining: int) -> None:
        if self.exceeded:
            return
        if avail == 0:
            self._record(cur_weight, cur_set)
            return
        if cur_weight + remaining < self.best_weight:
            return
        self.nodes += 1
        if self.nodes > self.node_budget or (
            self.deadline is not None
            and self.nodes % 256 == 0
            and time.monotonic() > self.deadline
        ):
            self.exceeded = True
            self._record(cur_weight, cur_set)
            return

        # pick the available vertex of maximum degree within avail;
        # lowest id on ties so both child orders are deterministic
        pick = -1
        pick_deg = -1
        m = avail
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            d = (self.nbr[v] & avail).bit_count()
            if d > pick_deg:
                pick = v
                pick_deg = d
        v = pick
        wv = self.weight[v]
        # include v first: lexicographically smaller sets contain earlier
        # vertices, and pick is the lowest id among max-degree candidates
        dropped = (self.nbr[v] | (1 << v)) & avail
        lost = sum(self.weight[u] for u in _mask_bits(dropped))
        self._branch(avail & ~dropped, cur_weight + wv, cur_set | (1 << v), remaining - lost)
        self._branch(avail & ~(1 << v), cur_weight, cur_set, remaining - wv)


def solve_exact(g: StaticGraph, budget: Budget | None = None) -> ExactResult:
    """Exact MWIS; status reports whether the budget sufficed.

    On budget exhaustion the result is still a valid independent set and
    a lower bound on the optimum.
    """
    if budget is None:
        budget = Budget()
    if g.n == 0:
        return ExactResult(0, frozenset(), SolveStatus.OPTIMAL)
    if g.n > 63:
        raise ValueError(f"exact solver limited to 63 vertices, got {g.n}")
    return _Solver(g, budget).run()


def enumerate_independent_sets(
    g: StaticGraph, cap: int = 1 << 20
) -> Iterator[frozenset[int]]:
    """Yield every independent set of g (including the empty set) once.

    Sets are emitted in increasing bitmask order over vertex ids, which
    makes downstream uniqueness checks deterministic. Raises
    :class:`EnumerationOverflow` once more than ``cap`` sets would be
    produced; callers must then treat their rule as inapplicable.
    """
    n = g.n
    if n > 30:
        raise ValueError(f"enumeration limited to 30 vertices, got {g.n}")
    nbr = [0] * n
    for v in range(n):
        m = 0
        for u in g.adjacency[v]:
            m |= 1 << u
        nbr[v] = m
    count = 0
    for mask in range(1 << n):
        ok = True
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if nbr[v] & mask:
                ok = False
                break
        if ok:
            count += 1
            if count > cap:
                raise EnumerationOverflow(
                    f"more than {cap} independent sets"
                )
            yield frozenset(_mask_bits(mask))
