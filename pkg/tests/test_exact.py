"""Exact solver and independent-set enumeration against the bitmask oracle."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwiskit.exact import (
    Budget,
    EnumerationOverflow,
    SolveStatus,
    enumerate_independent_sets,
    solve_exact,
)
from mwiskit.graphs import StaticGraph

from conftest import make_graph, random_graph
from oracle import brute_force, is_independent, random_instance


def test_empty_graph():
    res = solve_exact(StaticGraph([], []))
    assert (res.weight, res.vertices, res.status) == (0, frozenset(), SolveStatus.OPTIMAL)


def test_single_vertex():
    res = solve_exact(make_graph([7], []))
    assert res.weight == 7 and res.vertices == frozenset({0}) and res.optimal


def test_weighted_five_cycle():
    g = make_graph([1, 2, 3, 4, 5], [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    res = solve_exact(g)
    assert res.weight == 8
    assert res.vertices == frozenset({2, 4})


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0.1, 0.3, 0.5, 0.8]))
def test_matches_bitmask_oracle(seed, p):
    weights, edges = random_instance(random.Random(seed), 12, p)
    g = make_graph(weights, edges)
    res = solve_exact(g)
    assert res.optimal
    assert res.weight == brute_force(weights, edges)[0]
    assert is_independent(edges, set(res.vertices))
    assert sum(weights[v] for v in res.vertices) == res.weight


def test_isolated_vertex_adds_exactly_its_weight(rng):
    for _ in range(20):
        weights, edges = random_instance(rng, 10, 0.4)
        base = solve_exact(make_graph(weights, edges)).weight
        grown = solve_exact(make_graph(weights + [9], edges)).weight
        assert grown == base + 9


def test_removing_a_vertex_never_helps(rng):
    weights, edges = random_instance(rng, 9, 0.3)
    full = solve_exact(make_graph(weights, edges)).weight
    for v in range(9):
        keep = [u for u in range(9) if u != v]
        remap = {u: i for i, u in enumerate(keep)}
        sub_w = [weights[u] for u in keep]
        sub_e = [(remap[a], remap[b]) for a, b in edges if a != v and b != v]
        assert solve_exact(make_graph(sub_w, sub_e)).weight <= full


def test_deterministic_tie_break_lexicographic():
    # two disjoint equal-weight vertices joined by nothing: both singletons
    # tie at weight 5 only if the other is blocked; build a 4-cycle with
    # equal weights so {0,2} and {1,3} tie — the smaller vertex set wins
    g = make_graph([5, 5, 5, 5], [(0, 1), (1, 2), (2, 3), (3, 0)])
    res = solve_exact(g)
    assert res.vertices == frozenset({0, 2})


def test_budget_exhaustion_reports_valid_lower_bound():
    rng = random.Random(0)
    weights, edges = random_instance(rng, 14, 0.2)
    res = solve_exact(make_graph(weights, edges), Budget(node_budget=3))
    assert res.status == SolveStatus.BUDGET_EXCEEDED
    assert is_independent(edges, set(res.vertices))
    assert res.weight <= brute_force(weights, edges)[0]


def test_vertex_limit_enforced():
    with pytest.raises(ValueError, match="63 vertices"):
        solve_exact(make_graph([1] * 64, []))


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget(node_budget=0)


# -- enumeration -------------------------------------------------------------


def test_enumerate_single_vertex():
    sets = list(enumerate_independent_sets(make_graph([3], [])))
    assert sets == [frozenset(), frozenset({0})]


def test_enumerate_edge():
    sets = set(enumerate_independent_sets(make_graph([1, 1], [(0, 1)])))
    assert sets == {frozenset(), frozenset({0}), frozenset({1})}


def test_enumerate_path_three():
    sets = set(enumerate_independent_sets(make_graph([1, 1, 1], [(0, 1), (1, 2)])))
    assert sets == {
        frozenset(),
        frozenset({0}),
        frozenset({1}),
        frozenset({2}),
        frozenset({0, 2}),
    }


def test_enumerate_matches_oracle_counts(rng):
    for _ in range(10):
        weights, edges = random_instance(rng, 8, 0.35)
        g = make_graph(weights, edges)
        sets = list(enumerate_independent_sets(g))
        assert len(sets) == len(set(sets))  # each set exactly once
        for s in sets:
            assert is_independent(edges, set(s))
        # count agrees with a direct subset sweep
        nbr = {v: {u for u in g.adjacency[v]} for v in range(8)}
        count = sum(
            1
            for mask in range(1 << 8)
            if all(
                not (nbr[v] & {u for u in range(8) if mask >> u & 1})
                for v in range(8)
                if mask >> v & 1
            )
        )
        assert len(sets) == count


def test_enumerate_overflow_signalled():
    g = make_graph([1] * 12, [])
    with pytest.raises(EnumerationOverflow):
        list(enumerate_independent_sets(g, cap=100))
