"""Exact data-reduction rules for maximum weight independent set.

Every rule is a checked transformation on a :class:`DynamicGraph` that
appends journal events to a :class:`ReductionLog`. The log carries the
accumulated weight offset, and replaying the events in reverse lifts an
independent set of the reduced graph to one of the original graph with
weight equal to the reduced weight plus the offset.

Rules never mutate the graph when they report ``NOT_APPLICABLE``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from .exact import (
    Budget,
    EnumerationOverflow,
    ExactResult,
    enumerate_independent_sets,
    solve_exact,
)
from .flows import FlowNetwork
from .graphs import DynamicGraph, VertexStatus


class RuleOutcome(Enum):
    APPLIED = "applied"
    NOT_APPLICABLE = "not_applicable"
    SKIPPED = "skipped"  # budget or enumeration-cap exhaustion


@dataclass
class ReducerBudgets:
    """Work limits for the expensive rules.

    ``enumeration_limit`` caps the subgraph size for rules that must list
    independent sets, ``oracle_node_budget`` bounds each exact subproblem,
    ``per_vertex_time_cap`` (seconds) bounds each oracle call, and
    ``global_fraction`` is the minimum suggested fraction of the graph for
    the two global rules to run under screening.
    """

    enumeration_limit: int = 16
    oracle_node_budget: int = 1_000_000
    per_vertex_time_cap: float = 0.1
    global_fraction: float = 0.01
    fold_subgraph_cap: int = 32
    cut_component_cap: int = 32
    heavy_pair_cap: int = 64
    heavy_triple_cap: int = 128
    almost_twin_strengthened: bool = False
    unconfined_full_condition: bool = False

    def __post_init__(self) -> None:
        for name in (
            "enumeration_limit",
            "oracle_node_budget",
            "per_vertex_time_cap",
            "global_fraction",
            "fold_subgraph_cap",
            "cut_component_cap",
            "heavy_pair_cap",
            "heavy_triple_cap",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def oracle_budget(self) -> Budget:
        return Budget(self.oracle_node_budget, self.per_vertex_time_cap)


# ---------------------------------------------------------------------------
# Journal events.  Each event knows how to lift a solution of the reduced
# graph one step closer to a solution of the graph before the event.
# ---------------------------------------------------------------------------


@dataclass
class Event:
    rule: str

    def lift(self, sol: set[int]) -> None:  # pragma: no cover - overridden
        raise NotImplementedError


@dataclass
class IncludeEvent(Event):
    """Vertex forced into the solution; its neighbors were removed."""

    vertices: tuple[int, ...]
    offset: int

    def lift(self, sol: set[int]) -> None:
        sol.update(self.vertices)


@dataclass
class ExcludeEvent(Event):
    """Vertex removed and never part of a lifted solution."""

    vertex: int

    def lift(self, sol: set[int]) -> None:
        pass


@dataclass
class EdgeRemoveEvent(Event):
    """Edge {u, v} removed with the weight of u subtracted from v."""

    u: int
    v: int

    def lift(self, sol: set[int]) -> None:
        if self.v in sol:
            sol.discard(self.u)


@dataclass
class EdgeAddEvent(Event):
    """Edge {u, v} added with the weight of u folded onto v."""

    u: int
    v: int

    def lift(self, sol: set[int]) -> None:
        if self.v in sol:
            sol.add(self.u)


@dataclass
class DegreeOneFoldEvent(Event):
    """Degree-one v folded onto its neighbor u."""

    v: int
    u: int

    def lift(self, sol: set[int]) -> None:
        if self.u not in sol:
            sol.add(self.v)


@dataclass
class TriangleTransferEvent(Event):
    """Degree-two v with adjacent neighbors x, y; weight transferred."""

    v: int
    x: int
    y: int

    def lift(self, sol: set[int]) -> None:
        if self.x not in sol and self.y not in sol:
            sol.add(self.v)


@dataclass
class VShapeFoldEvent(Event):
    """Degree-two v with non-adjacent x, y folded into v_new."""

    v: int
    x: int
    y: int
    v_new: int

    def lift(self, sol: set[int]) -> None:
        if self.v_new in sol:
            sol.discard(self.v_new)
            sol.add(self.x)
            sol.add(self.y)
        else:
            sol.add(self.v)


@dataclass
class SimplicialTransferEvent(Event):
    """Simplicial v removed; heavier clique neighbors kept with reduced weight."""

    v: int
    survivors: frozenset[int]

    def lift(self, sol: set[int]) -> None:
        if not (sol & self.survivors):
            sol.add(self.v)


@dataclass
class TwinFoldAllEvent(Event):
    """Twins u, v and their whole neighborhood folded into v_new."""

    u: int
    v: int
    v_new: int
    neighborhood_mwis: frozenset[int]

    def lift(self, sol: set[int]) -> None:
        if self.v_new in sol:
            sol.discard(self.v_new)
            sol.update(self.neighborhood_mwis)
        else:
            sol.add(self.u)
            sol.add(self.v)


@dataclass
class TwinFoldPairEvent(Event):
    """Twins u, v folded into v_new keeping the shared neighborhood."""

    u: int
    v: int
    v_new: int

    def lift(self, sol: set[int]) -> None:
        if self.v_new in sol:
            sol.discard(self.v_new)
            sol.add(self.u)
            sol.add(self.v)


@dataclass
class FunnelEvent(Event):
    """u-v-funnel fold; ``kept_u`` tags the heavier-u variant."""

    u: int
    v: int
    n_prime: frozenset[int]
    kept_u: bool

    def lift(self, sol: set[int]) -> None:
        if self.kept_u:
            # u survived with reduced weight; a solution avoiding every
            # surviving neighbor of v gains v itself
            if not (sol & self.n_prime) and self.u not in sol:
                sol.add(self.v)
        else:
            if sol & self.n_prime:
                sol.add(self.u)
            else:
                sol.add(self.v)


@dataclass
class CutVertexFoldEvent(Event):
    """Component C behind articulation point v replaced by a weight splice."""

    v: int
    with_v_witness: frozenset[int]  # MWIS of C minus N(v)
    without_v_witness: frozenset[int]  # MWIS of C
    v_excluded: bool

    def lift(self, sol: set[int]) -> None:
        if not self.v_excluded and self.v in sol:
            sol.update(self.with_v_witness)
        else:
            sol.update(self.without_v_witness)


@dataclass
class ReductionLog:
    events: list[Event] = field(default_factory=list)
    offset: int = 0

    def record(self, event: Event, offset_delta: int = 0) -> None:
        self.events.append(event)
        self.offset += offset_delta


def restore_solution(log: ReductionLog, reduced_solution: Iterable[int]) -> set[int]:
    """Lift a solution of the reduced graph back to the original graph.

    The input should be a maximal independent set of the reduced graph;
    the result has weight (in original weights) equal to the reduced
    weight plus ``log.offset``.
    """
    sol = set(reduced_solution)
    for event in reversed(log.events):
        event.lift(sol)
    return sol


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _is_subset_sorted(a: Sequence[int], b: Sequence[int], skip: int = -1) -> bool:
    """Is sorted list a (minus ``skip``) a subset of sorted list b?"""
    i = j = 0
    la, lb = len(a), len(b)
    while i < la:
        x = a[i]
        if x == skip:
            i += 1
            continue
        while j < lb and b[j] < x:
            j += 1
        if j >= lb or b[j] != x:
            return False
        i += 1
        j += 1
    return True


def _is_clique(g: DynamicGraph, vs: Sequence[int]) -> bool:
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if not g.has_edge(vs[i], vs[j]):
                return False
    return True


def _include(g: DynamicGraph, log: ReductionLog, rule: str, vs: Sequence[int]) -> None:
    """Include every vertex in vs, excluding their joint neighborhood."""
    nbrs: set[int] = set()
    for v in vs:
        nbrs.update(g.adj[v])
    nbrs.difference_update(vs)
    total = sum(g.weight[v] for v in vs)
    for v in vs:
        g.include_vertex(v)
    for u in nbrs:
        g.exclude_vertex(u)
    log.record(IncludeEvent(rule, tuple(vs), total), total)


def _solve_induced(
    g: DynamicGraph, vertices: Iterable[int], budgets: ReducerBudgets
) -> tuple[ExactResult, list[int]] | None:
    """Exact MWIS on the active-induced subgraph; None on budget failure."""
    vs = sorted(set(vertices))
    if len(vs) > budgets.fold_subgraph_cap:
        return None
    sub, mapping = g.induced_subgraph(vs)
    result = solve_exact(sub, budgets.oracle_budget())
    if not result.optimal:
        return None
    return result, vs


# ---------------------------------------------------------------------------
# Cheap local rules
# ---------------------------------------------------------------------------


def neighborhood_removal(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Include v outright when it outweighs its whole neighborhood."""
    if g.weight[v] >= g.neighborhood_weight(v):
        _include(g, log, "neighborhood_removal", [v])
        return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def degree_one(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Resolve or fold a degree-one vertex onto its single neighbor."""
    if g.degree(v) != 1:
        return RuleOutcome.NOT_APPLICABLE
    u = g.adj[v][0]
    wv, wu = g.weight[v], g.weight[u]
    if wv >= wu:
        _include(g, log, "degree_one", [v])
    else:
        g.set_weight(u, wu - wv)
        g.fold_out_vertex(v)
        log.record(DegreeOneFoldEvent("degree_one", v, u), wv)
    return RuleOutcome.APPLIED


def degree_two_triangle(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Resolve a degree-two vertex whose neighbors are adjacent."""
    if g.degree(v) != 2:
        return RuleOutcome.NOT_APPLICABLE
    x, y = g.adj[v]
    if not g.has_edge(x, y):
        return RuleOutcome.NOT_APPLICABLE
    wv, wx, wy = g.weight[v], g.weight[x], g.weight[y]
    if wv >= max(wx, wy):
        _include(g, log, "degree_two_triangle", [v])
    elif wv >= min(wx, wy):
        lighter = x if wx < wy else y
        g.exclude_vertex(lighter)
        log.record(ExcludeEvent("degree_two_triangle", lighter))
    else:
        g.set_weight(x, wx - wv)
        g.set_weight(y, wy - wv)
        g.fold_out_vertex(v)
        log.record(TriangleTransferEvent("degree_two_triangle", v, x, y), wv)
    return RuleOutcome.APPLIED


def degree_two_vshape(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Resolve a degree-two vertex whose neighbors are non-adjacent."""
    if g.degree(v) != 2:
        return RuleOutcome.NOT_APPLICABLE
    x, y = g.adj[v]
    if g.has_edge(x, y):
        return RuleOutcome.NOT_APPLICABLE
    wv, wx, wy = g.weight[v], g.weight[x], g.weight[y]
    if wv >= wx + wy:
        _include(g, log, "degree_two_vshape", [v])
        return RuleOutcome.APPLIED
    if wv >= max(wx, wy):
        outside = (set(g.adj[x]) | set(g.adj[y])) - {v, x, y}
        g.fold_out_vertex(v)
        g.fold_out_vertex(x)
        g.fold_out_vertex(y)
        v_new = g.add_fold_vertex(wx + wy - wv, outside)
        log.record(VShapeFoldEvent("degree_two_vshape", v, x, y, v_new), wv)
        return RuleOutcome.APPLIED
    if wv > min(wx, wy):
        # one neighbor is heavier than v: this is a funnel with the heavier
        # neighbor in the special role
        u = x if wx > wv else y
        _apply_funnel(g, log, "degree_two_vshape", v, u)
        return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def simplicial_include(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Include a simplicial vertex at least as heavy as its whole clique."""
    nbrs = g.adj[v]
    if nbrs and g.weight[v] < max(g.weight[u] for u in nbrs):
        return RuleOutcome.NOT_APPLICABLE
    if not _is_clique(g, nbrs):
        return RuleOutcome.NOT_APPLICABLE
    _include(g, log, "simplicial_include", [v])
    return RuleOutcome.APPLIED


def simplicial_transfer(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Remove a simplicial vertex, transferring its weight to heavier
    clique neighbors."""
    nbrs = g.adj[v]
    wv = g.weight[v]
    if not nbrs or wv >= max(g.weight[u] for u in nbrs):
        return RuleOutcome.NOT_APPLICABLE
    if not _is_clique(g, nbrs):
        return RuleOutcome.NOT_APPLICABLE
    survivors = [u for u in nbrs if g.weight[u] > wv]
    removed = [u for u in nbrs if g.weight[u] <= wv]
    for u in survivors:
        g.set_weight(u, g.weight[u] - wv)
    for u in removed:
        g.exclude_vertex(u)
    g.fold_out_vertex(v)
    log.record(
        SimplicialTransferEvent("simplicial_transfer", v, frozenset(survivors)), wv
    )
    return RuleOutcome.APPLIED


def domination(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Exclude v when a neighbor u dominates it: N[u] ⊆ N[v], ω(u) ≥ ω(v)."""
    adj_v = g.adj[v]
    wv = g.weight[v]
    dv = len(adj_v)
    for u in adj_v:
        if g.weight[u] < wv or g.degree(u) > dv:
            continue
        # closed-neighborhood containment: v itself is adjacent to u
        if _is_subset_sorted(g.adj[u], adj_v, skip=v):
            g.exclude_vertex(v)
            log.record(ExcludeEvent("domination", v))
            return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def basic_single_edge(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Exclude v if some neighbor u has ω(N(u) ∖ N(v)) ≤ ω(u)."""
    adj_v_set = set(g.adj[v])
    for u in g.adj[v]:
        outside = sum(g.weight[x] for x in g.adj[u] if x not in adj_v_set)
        if outside <= g.weight[u]:
            g.exclude_vertex(v)
            log.record(ExcludeEvent("basic_single_edge", v))
            return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def extended_single_edge(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """For an edge {u, v} with ω(v) ≥ ω(N(v)) − ω(u), exclude N(u) ∩ N(v)."""
    for a, b in ((v, u) for u in g.adj[v]):
        for hi, lo in ((a, b), (b, a)):
            # hi plays the heavy role: ω(hi) >= ω(N(hi)) - ω(lo)
            if g.weight[hi] < g.neighborhood_weight(hi) - g.weight[lo]:
                continue
            common = set(g.adj[hi]) & set(g.adj[lo])
            if not common:
                continue
            for x in sorted(common):
                g.exclude_vertex(x)
                log.record(ExcludeEvent("extended_single_edge", x))
            return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def twin(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Fold or resolve a pair of twins (equal open neighborhoods)."""
    if budgets is None:
        budgets = ReducerBudgets()
    adj_v = g.adj[v]
    if not adj_v:
        return RuleOutcome.NOT_APPLICABLE
    dv = len(adj_v)
    partner = -1
    for u in g.adj[adj_v[0]]:
        if u == v or g.degree(u) != dv or g.has_edge(u, v):
            continue
        if g.adj[u] == adj_v:
            partner = u
            break
    if partner < 0:
        return RuleOutcome.NOT_APPLICABLE
    u = partner
    pair_weight = g.weight[u] + g.weight[v]

    solved = _solve_induced(g, adj_v, budgets)
    if solved is None:
        return RuleOutcome.SKIPPED
    result, vs = solved
    i_n = frozenset(vs[i] for i in result.vertices)

    if pair_weight >= result.weight:
        _include(g, log, "twin", sorted((u, v)))
        return RuleOutcome.APPLIED

    # uniqueness check for the full fold: is the neighborhood MWIS the only
    # independent set heavier than the pair?
    if dv <= budgets.enumeration_limit:
        sub, _ = g.induced_subgraph(vs)
        heavy = 0
        try:
            for s in enumerate_independent_sets(sub):
                if sum(sub.weight[i] for i in s) > pair_weight:
                    heavy += 1
                    if heavy > 1:
                        break
        except EnumerationOverflow:
            heavy = 2
        if heavy == 1:
            outside = set()
            for x in adj_v:
                outside.update(g.adj[x])
            outside.difference_update(adj_v)
            outside.discard(u)
            outside.discard(v)
            g.fold_out_vertex(u)
            g.fold_out_vertex(v)
            for x in list(adj_v):
                g.fold_out_vertex(x)
            v_new = g.add_fold_vertex(result.weight - pair_weight, outside)
            log.record(
                TwinFoldAllEvent("twin", u, v, v_new, i_n), pair_weight
            )
            return RuleOutcome.APPLIED
    else:
        return RuleOutcome.SKIPPED

    # plain pair fold: u and v always enter or leave the solution together
    shared = list(adj_v)
    g.fold_out_vertex(u)
    g.fold_out_vertex(v)
    v_new = g.add_fold_vertex(pair_weight, shared)
    log.record(TwinFoldPairEvent("twin", u, v, v_new))
    return RuleOutcome.APPLIED


def almost_twin(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Include the smaller of a nested non-adjacent pair when heavy enough."""
    if budgets is None:
        budgets = ReducerBudgets()
    adj_v = g.adj[v]
    if not adj_v:
        return RuleOutcome.NOT_APPLICABLE

    def bound(big: int) -> int | None:
        """Weight an inner vertex must reach together with ``big``."""
        if budgets.almost_twin_strengthened:
            solved = _solve_induced(g, g.adj[big], budgets)
            if solved is None:
                return None
            return solved[0].weight
        return g.neighborhood_weight(big)

    # candidates share at least the first neighbor of v
    seen: set[int] = set()
    for u in g.adj[adj_v[0]]:
        if u == v or u in seen or g.has_edge(u, v):
            continue
        seen.add(u)
        pair = g.weight[u] + g.weight[v]
        # v as the included (inner) vertex: N(v) ⊆ N(u)
        if len(adj_v) <= g.degree(u) and _is_subset_sorted(adj_v, g.adj[u]):
            b = bound(u)
            if b is None:
                return RuleOutcome.SKIPPED
            if pair >= b:
                _include(g, log, "almost_twin", [v])
                return RuleOutcome.APPLIED
        # u as the included (inner) vertex: N(u) ⊆ N(v)
        if g.degree(u) <= len(adj_v) and _is_subset_sorted(g.adj[u], adj_v):
            b = bound(v)
            if b is None:
                return RuleOutcome.SKIPPED
            if pair >= b:
                _include(g, log, "almost_twin", [u])
                return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def _apply_funnel(
    g: DynamicGraph, log: ReductionLog, rule: str, v: int, u: int
) -> None:
    """Fold the u-v-funnel at v (N(v) ∖ {u} is a clique, v at least as
    heavy as every clique member)."""
    wv, wu = g.weight[v], g.weight[u]
    adj_u = set(g.adj[u])
    n_prime = [
        x
        for x in g.adj[v]
        if x != u and x not in adj_u and g.weight[x] + wu > wv
    ]
    n_prime_set = frozenset(n_prime)
    if wv >= wu:
        removed = [x for x in g.adj[v] if x not in n_prime_set] + [v]
        kept_u = False
    else:
        removed = [x for x in g.adj[v] if x != u and x not in n_prime_set] + [v]
        kept_u = True
    removed_set = set(removed)
    u_survivors = [y for y in g.adj[u] if y not in removed_set]
    for x in removed:
        if x == v or x == u:
            g.fold_out_vertex(x)
        else:
            g.exclude_vertex(x)
    for x in n_prime:
        for y in u_survivors:
            if y != x and not g.has_edge(x, y):
                g.add_edge(x, y)
        if not kept_u:
            g.set_weight(x, g.weight[x] + wu - wv)
    if kept_u:
        g.set_weight(u, wu - wv)
    log.record(FunnelEvent(rule, u, v, n_prime_set, kept_u), wv)


def weighted_funnel(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Fold v (and possibly u) when N(v) ∖ {u} forms a clique below ω(v)."""
    adj_v = g.adj[v]
    if len(adj_v) < 2:
        return RuleOutcome.NOT_APPLICABLE
    wv = g.weight[v]
    for u in adj_v:
        rest = [x for x in adj_v if x != u]
        if wv < max(g.weight[x] for x in rest):
            continue
        if not _is_clique(g, rest):
            continue
        _apply_funnel(g, log, "weighted_funnel", v, u)
        return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def clique_neighborhood_removal(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Include v when it outweighs a greedy clique cover of its neighborhood."""
    uncovered = sorted(g.adj[v], key=lambda x: (-g.weight[x], x))
    covered: set[int] = set()
    bound = 0
    for seed in uncovered:
        if seed in covered:
            continue
        clique = [seed]
        covered.add(seed)
        for x in uncovered:
            if x in covered:
                continue
            if all(g.has_edge(x, y) for y in clique):
                clique.append(x)
                covered.add(x)
        bound += g.weight[seed]  # seed is the heaviest member
    if g.weight[v] >= bound:
        _include(g, log, "clique_neighborhood_removal", [v])
        return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def extended_domination(
    g: DynamicGraph,
    log: ReductionLog,
    v: int,
    budgets: ReducerBudgets | None = None,
    forbidden_pairs: set[frozenset[int]] | None = None,
) -> RuleOutcome:
    """Remove the edge to a strictly lighter dominated neighbor,
    subtracting its weight from v."""
    adj_v = g.adj[v]
    wv = g.weight[v]
    dv = len(adj_v)
    for u in adj_v:
        if g.weight[u] >= wv or g.degree(u) > dv:
            continue
        if forbidden_pairs and frozenset((u, v)) in forbidden_pairs:
            continue
        if _is_subset_sorted(g.adj[u], adj_v, skip=v):
            g.remove_edge(u, v)
            g.set_weight(v, wv - g.weight[u])
            log.record(EdgeRemoveEvent("extended_domination", u, v))
            return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


def extended_domination_reverse(
    g: DynamicGraph,
    log: ReductionLog,
    v: int,
    budgets: ReducerBudgets | None = None,
    forbidden_pairs: set[frozenset[int]] | None = None,
) -> RuleOutcome:
    """Add an edge to a non-adjacent u with N(u) ⊆ N(v), folding its
    weight onto v, when their joint weight is below ω(N(v))."""
    adj_v = g.adj[v]
    if not adj_v:
        return RuleOutcome.NOT_APPLICABLE
    wnv = g.neighborhood_weight(v)
    wv = g.weight[v]
    seen: set[int] = set()
    for u in g.adj[adj_v[0]]:
        if u == v or u in seen or g.has_edge(u, v):
            continue
        seen.add(u)
        if g.weight[u] + wv >= wnv:
            continue
        if forbidden_pairs and frozenset((u, v)) in forbidden_pairs:
            continue
        if g.degree(u) <= len(adj_v) and _is_subset_sorted(g.adj[u], adj_v):
            g.add_edge(u, v)
            g.set_weight(v, wv + g.weight[u])
            log.record(EdgeAddEvent("extended_domination_reverse", u, v))
            return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


# ---------------------------------------------------------------------------
# Expensive local rules
# ---------------------------------------------------------------------------


def extended_unconfined(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Exclude v when assuming it lies in every MWIS yields a contradiction.

    The confinement loop grows S from {v} with satellites. By default the
    satellite search is restricted to children whose outside neighborhood
    is an independent set, so no subproblems need solving; the
    ``unconfined_full_condition`` budget flag enables oracle-backed checks.
    """
    if budgets is None:
        budgets = ReducerBudgets()
    s: set[int] = {v}
    n_closed: set[int] = {v} | set(g.adj[v])
    budget_hit = False
    for _ in range(g.active_count() + 1):
        frontier = sorted(n_closed - s)
        extend_with: list[int] | None = None
        for x in frontier:
            ws_nx = sum(g.weight[y] for y in g.adj[x] if y in s)
            if g.weight[x] < ws_nx:
                continue  # not a child
            outside = [y for y in g.adj[x] if y not in n_closed]
            independent = all(
                not g.has_edge(a, b)
                for i, a in enumerate(outside)
                for b in outside[i + 1 :]
            )
            if independent:
                alpha = sum(g.weight[y] for y in outside)
            elif budgets.unconfined_full_condition:
                solved = _solve_induced(g, outside, budgets)
                if solved is None:
                    budget_hit = True
                    continue
                alpha = solved[0].weight
            else:
                continue
            if g.weight[x] >= ws_nx + alpha:
                g.exclude_vertex(v)
                log.record(ExcludeEvent("extended_unconfined", v))
                return RuleOutcome.APPLIED
            if independent and extend_with is None:
                sats = [
                    y
                    for y in outside
                    if g.weight[x] >= ws_nx + alpha - g.weight[y]
                ]
                if sats:
                    extend_with = sats
        if extend_with is None:
            break
        for y in extend_with:
            s.add(y)
            n_closed.add(y)
            n_closed.update(g.adj[y])
    return RuleOutcome.SKIPPED if budget_hit else RuleOutcome.NOT_APPLICABLE


def _heavy_set_holds(
    g: DynamicGraph, members: Sequence[int], budgets: ReducerBudgets
) -> bool | None:
    """Does every independent set C of G[N(members)] satisfy
    ω(N(C) ∩ members) ≥ ω(C)?  None means the check exceeded its budget."""
    boundary: set[int] = set()
    for m in members:
        boundary.update(g.adj[m])
    boundary.difference_update(members)
    bnd = sorted(boundary)
    if len(bnd) > budgets.enumeration_limit:
        return None
    member_set = set(members)
    # cheap singleton fail-fast before the full search
    touch_weight: list[int] = []
    touch_mask: list[int] = []
    for z in bnd:
        tw = sum(g.weight[m] for m in g.adj[z] if m in member_set)
        if g.weight[z] > tw:
            return False
        touch_weight.append(g.weight[z])
        mask = 0
        for i, m in enumerate(members):
            if g.has_edge(z, m):
                mask |= 1 << i
        touch_mask.append(mask)
    member_weight = [g.weight[m] for m in members]
    nbr_mask = [0] * len(bnd)
    index = {z: i for i, z in enumerate(bnd)}
    for i, z in enumerate(bnd):
        m = 0
        for y in g.adj[z]:
            j = index.get(y)
            if j is not None:
                m |= 1 << j
        nbr_mask[i] = m

    def touched_weight(mask: int) -> int:
        return sum(member_weight[i] for i in range(len(members)) if mask >> i & 1)

    # search for an independent C with ω(C) > ω(N(C) ∩ members)
    k = len(bnd)
    suffix = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + touch_weight[i]

    def dfs(i: int, blocked: int, gain: int, union: int) -> bool:
        # gain = ω(C) − ω(N(C) ∩ members) for the current partial C
        if gain > 0:
            return True
        if i >= k:
            return False
        if gain + suffix[i] <= 0:
            return False
        # take bnd[i] if allowed
        if not (blocked >> i & 1):
            new_union = union | touch_mask[i]
            delta = touch_weight[i] - (
                touched_weight(new_union) - touched_weight(union)
            )
            if dfs(i + 1, blocked | nbr_mask[i], gain + delta, new_union):
                return True
        return dfs(i + 1, blocked, gain, union)

    return not dfs(0, 0, 0, 0)


def _heavy_set_rule(
    g: DynamicGraph,
    log: ReductionLog,
    anchor: int,
    budgets: ReducerBudgets,
    size: int,
) -> RuleOutcome:
    nbrs = sorted(g.adj[anchor], key=lambda x: (-g.weight[x], x))
    cap = budgets.heavy_pair_cap if size == 2 else budgets.heavy_triple_cap
    candidates: list[tuple[int, ...]] = []
    if size == 2:
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                if len(candidates) >= cap:
                    break
                if not g.has_edge(nbrs[i], nbrs[j]):
                    candidates.append((nbrs[i], nbrs[j]))
            if len(candidates) >= cap:
                break
    else:
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                if g.has_edge(nbrs[i], nbrs[j]):
                    continue
                for l in range(j + 1, len(nbrs)):
                    if len(candidates) >= cap:
                        break
                    if not g.has_edge(nbrs[i], nbrs[l]) and not g.has_edge(
                        nbrs[j], nbrs[l]
                    ):
                        candidates.append((nbrs[i], nbrs[j], nbrs[l]))
                if len(candidates) >= cap:
                    break
            if len(candidates) >= cap:
                break
    any_skipped = False
    rule = "heavy_set" if size == 2 else "heavy_set_3"
    for members in candidates:
        holds = _heavy_set_holds(g, members, budgets)
        if holds is None:
            any_skipped = True
        elif holds:
            _include(g, log, rule, sorted(members))
            return RuleOutcome.APPLIED
    return RuleOutcome.SKIPPED if any_skipped else RuleOutcome.NOT_APPLICABLE


def heavy_set_pair(
    g: DynamicGraph, log: ReductionLog, anchor: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Include a non-adjacent pair from N(anchor) that outweighs every
    independent set in its joint neighborhood."""
    return _heavy_set_rule(g, log, anchor, budgets or ReducerBudgets(), 2)


def heavy_set_triple(
    g: DynamicGraph, log: ReductionLog, anchor: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Three-vertex variant of the heavy-set inclusion rule."""
    return _heavy_set_rule(g, log, anchor, budgets or ReducerBudgets(), 3)


def generalized_fold_include(
    g: DynamicGraph, log: ReductionLog, v: int, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Include v when it outweighs the exact MWIS of its neighborhood."""
    if budgets is None:
        budgets = ReducerBudgets()
    solved = _solve_induced(g, g.adj[v], budgets)
    if solved is None:
        return RuleOutcome.SKIPPED
    if g.weight[v] >= solved[0].weight:
        _include(g, log, "generalized_fold_include", [v])
        return RuleOutcome.APPLIED
    return RuleOutcome.NOT_APPLICABLE


# ---------------------------------------------------------------------------
# Global rules
# ---------------------------------------------------------------------------


def critical_set(
    g: DynamicGraph, log: ReductionLog, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Include an independent set maximizing ω(I) − ω(N(I)), found by a
    minimum cut on the bipartite project-selection network."""
    active = g.active_vertices()
    if not active:
        return RuleOutcome.NOT_APPLICABLE
    n = len(active)
    index = {v: i for i, v in enumerate(active)}
    total = sum(g.weight[v] for v in active)
    inf = total + 1
    # node layout: 0 = source, 1 = sink, 2+i = left copy, 2+n+i = right copy
    net = FlowNetwork(2 + 2 * n)
    for i, v in enumerate(active):
        net.add_edge(0, 2 + i, g.weight[v])
        net.add_edge(2 + n + i, 1, g.weight[v])
    for v in active:
        i = index[v]
        for u in g.adj[v]:
            net.add_edge(2 + i, 2 + n + index[u], inf)
    flow = net.max_flow(0, 1)
    value = total - int(flow)
    if value <= 0:
        return RuleOutcome.NOT_APPLICABLE
    side = net.min_cut_source_side(0)
    chosen = {active[i] for i in range(n) if (2 + i) in side}
    independent = {
        v for v in chosen if not any(u in chosen for u in g.adj[v])
    }
    if not independent:
        return RuleOutcome.NOT_APPLICABLE
    # verify the extracted independent subset still has positive value
    nbhd: set[int] = set()
    for v in independent:
        nbhd.update(g.adj[v])
    nbhd.difference_update(independent)
    gain = sum(g.weight[v] for v in independent) - sum(g.weight[u] for u in nbhd)
    if gain <= 0:
        return RuleOutcome.NOT_APPLICABLE
    _include(g, log, "critical_set", sorted(independent))
    return RuleOutcome.APPLIED


def _articulation_points(g: DynamicGraph) -> list[int]:
    """Articulation points of the active subgraph (iterative Tarjan)."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, int] = {}
    points: set[int] = set()
    timer = 0
    for root in g.active_vertices():
        if root in disc:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            v, idx = stack[-1]
            if idx < len(g.adj[v]):
                stack[-1] = (v, idx + 1)
                u = g.adj[v][idx]
                if u not in disc:
                    parent[u] = v
                    disc[u] = low[u] = timer
                    timer += 1
                    stack.append((u, 0))
                    if v == root:
                        root_children += 1
                elif u != parent.get(v):
                    low[v] = min(low[v], disc[u])
            else:
                stack.pop()
                p = parent.get(v)
                if p is not None:
                    low[p] = min(low[p], low[v])
                    if p != root and low[v] >= disc[p]:
                        points.add(p)
        if root_children > 1:
            points.add(root)
    return sorted(points)


def cut_vertex(
    g: DynamicGraph, log: ReductionLog, budgets: ReducerBudgets | None = None
) -> RuleOutcome:
    """Fold a small component hanging off an articulation point into a
    weight adjustment of the point itself."""
    if budgets is None:
        budgets = ReducerBudgets()
    any_skipped = False
    for v in _articulation_points(g):
        # components of the active graph minus v
        seen: set[int] = {v}
        components: list[list[int]] = []
        for start in g.adj[v]:
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            qi = 0
            while qi < len(comp) and len(comp) <= budgets.cut_component_cap:
                x = comp[qi]
                qi += 1
                for y in g.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
            components.append(comp)
        if len(components) < 2:
            continue  # not separating its neighborhood
        components.sort(key=len)
        comp = components[0]
        if len(comp) > budgets.cut_component_cap:
            any_skipped = True
            continue
        solved0 = _solve_induced(g, comp, budgets)
        blocked = set(g.adj[v])
        inner = [x for x in comp if x not in blocked]
        solved1 = _solve_induced(g, inner, budgets)
        if solved0 is None or solved1 is None:
            any_skipped = True
            continue
        r0, vs0 = solved0
        r1, vs1 = solved1
        a0 = r0.weight
        a1 = r1.weight
        w0 = frozenset(vs0[i] for i in r0.vertices)
        w1 = frozenset(vs1[i] for i in r1.vertices)
        for x in comp:
            g.fold_out_vertex(x)
        new_weight = g.weight[v] + a1 - a0
        excluded = new_weight <= 0
        if excluded:
            g.exclude_vertex(v)
        else:
            g.set_weight(v, new_weight)
        log.record(CutVertexFoldEvent("cut_vertex", v, w1, w0, excluded), a0)
        return RuleOutcome.APPLIED
    return RuleOutcome.SKIPPED if any_skipped else RuleOutcome.NOT_APPLICABLE


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

LocalRule = Callable[..., RuleOutcome]

#: Local rules in scheduler order (cheap before expensive).
CHEAP_RULES: list[tuple[str, LocalRule]] = [
    ("neighborhood_removal", neighborhood_removal),
    ("degree_one", degree_one),
    ("degree_two_triangle", degree_two_triangle),
    ("degree_two_vshape", degree_two_vshape),
    ("simplicial_include", simplicial_include),
    ("simplicial_transfer", simplicial_transfer),
    ("domination", domination),
    ("basic_single_edge", basic_single_edge),
    ("extended_single_edge", extended_single_edge),
    ("twin", twin),
    ("almost_twin", almost_twin),
    ("weighted_funnel", weighted_funnel),
    ("clique_neighborhood_removal", clique_neighborhood_removal),
    # extended_domination and its reverse share one scheduler slot; the
    # scheduler guards each unordered pair against undo cycles
    ("extended_domination", extended_domination),
    ("extended_domination_reverse", extended_domination_reverse),
]

#: Expensive rules in scheduler order; the two marked global act on the
#: whole graph at once.
EXPENSIVE_RULES: list[tuple[str, Callable[..., RuleOutcome], bool]] = [
    ("extended_unconfined", extended_unconfined, False),
    ("critical_set", critical_set, True),
    ("generalized_fold_include", generalized_fold_include, False),
    ("heavy_set", heavy_set_pair, False),
    ("heavy_set_3", heavy_set_triple, False),
    ("cut_vertex", cut_vertex, True),
]

ALL_RULE_NAMES = [name for name, _ in CHEAP_RULES] + [
    name for name, _, _ in EXPENSIVE_RULES
]
