"""Iterated local search: operators, invariants, and full runs."""

from __future__ import annotations

import random

import pytest

from mwiskit.localsearch import (
    DEFAULT_MQ,
    BaselineResult,
    SearchState,
    Solution,
    greedy_initial,
    run_baseline,
)

from conftest import make_graph, random_graph
from oracle import brute_force, is_independent


# -- solution bookkeeping -----------------------------------------------------


def test_solution_tracks_tightness_and_weights():
    g = make_graph([2, 1, 2, 2], [(0, 1), (1, 2), (2, 3)])
    sol = Solution(g, {1, 3})
    assert sol.weight == 3
    assert list(sol.tight) == [1, 0, 2, 0]
    assert list(sol.snw) == [1, 0, 3, 0]
    sol.check_consistency()
    sol.remove(1)
    assert list(sol.tight) == [0, 0, 1, 0]
    sol.check_consistency()


def test_solution_rejects_conflicting_add():
    g = make_graph([1, 1], [(0, 1)])
    sol = Solution(g, {0})
    with pytest.raises(AssertionError):
        sol.add(1)


def test_consistency_check_catches_tampering():
    g = make_graph([1, 1], [(0, 1)])
    sol = Solution(g, {0})
    sol.snw[1] = 7
    with pytest.raises(AssertionError, match="stale"):
        sol.check_consistency()


# -- operators ----------------------------------------------------------------


def test_aap_move_walks_an_alternating_path():
    # path 2-1-2-2 starting from {1, 3}: swapping 0 in for 1 already gains
    # weight, so the shortest improving prefix is applied
    g = make_graph([2, 1, 2, 2], [(0, 1), (1, 2), (2, 3)])
    state = SearchState(g, {1, 3}, rng=random.Random(0))
    assert state.aap_move(0, perturb=False)
    assert state.sol.members() == {0, 3}
    assert state.sol.weight == 4


def test_two_one_swap_on_a_star():
    g = make_graph([3, 2, 2], [(0, 1), (0, 2)])
    state = SearchState(g, {0}, rng=random.Random(0))
    assert state.two_one_swap(0)
    assert state.sol.members() == {1, 2}
    assert state.sol.weight == 4


def test_two_one_swap_requires_strict_gain():
    g = make_graph([4, 2, 2], [(0, 1), (0, 2)])
    state = SearchState(g, {0}, rng=random.Random(0))
    assert not state.two_one_swap(0)
    assert state.sol.members() == {0}


def test_neighborhood_swap_inserts_heavy_vertex():
    g = make_graph([5, 2, 2], [(0, 1), (0, 2)])
    state = SearchState(g, {1, 2}, rng=random.Random(0))
    assert state.neighborhood_swap(0)
    assert state.sol.members() == {0}
    assert not state.neighborhood_swap(0)  # already inside


def test_undo_restores_exact_membership(rng):
    g = random_graph(rng, 12, 0.3)
    state = SearchState(g, greedy_initial(g, rng), rng=rng)
    before = state.sol.members()
    state.journal.clear()
    for _ in range(5):
        v = rng.randrange(g.n)
        if state.sol.in_sol[v]:
            state._remove(v)
        else:
            state.insert_evict(v)
    state.undo()
    assert state.sol.members() == before
    state.sol.check_consistency()


# -- full runs ----------------------------------------------------------------


def test_state_stays_consistent_over_many_iterations(rng):
    g = random_graph(rng, 20, 0.25)
    state = SearchState(g, greedy_initial(g, rng), rng=rng)
    run_baseline(g, iterations=10_000, state=state)
    state.sol.check_consistency()
    assert is_independent(list(g.edges()), state.sol.members())


def test_backtracking_never_loses_weight(rng):
    g = random_graph(rng, 15, 0.3)
    state = SearchState(g, greedy_initial(g, rng), rng=rng)
    w = state.sol.weight
    for _ in range(500):
        state.iteration()
        assert state.sol.weight >= w
        w = state.sol.weight


def test_runs_are_deterministic_for_a_seed():
    g = random_graph(random.Random(8), 18, 0.3)
    a = run_baseline(g, iterations=2000, seed=4)
    b = run_baseline(g, iterations=2000, seed=4)
    assert (a.weight, a.members) == (b.weight, b.members)


def test_target_weight_stops_the_search_early():
    g = random_graph(random.Random(3), 12, 0.3)
    opt = brute_force(g.weight, list(g.edges()))[0]
    res = run_baseline(g, iterations=100_000, seed=1, target_weight=opt)
    assert res.weight == opt
    assert res.iterations < 100_000


def test_result_solution_is_independent_and_weighed_correctly(rng):
    for _ in range(5):
        g = random_graph(rng, 14, 0.35)
        res = run_baseline(g, iterations=300, seed=2)
        assert is_independent(list(g.edges()), res.members)
        assert sum(g.weight[v] for v in res.members) == res.weight


def test_empty_graph_short_circuits():
    res = run_baseline(make_graph([], []), iterations=10)
    assert res == BaselineResult(0, set(), 0, 0.0)


def test_budget_is_required():
    with pytest.raises(ValueError, match="budget"):
        run_baseline(make_graph([1], []))


def test_greedy_initial_is_maximal(rng):
    g = random_graph(rng, 15, 0.3)
    members = greedy_initial(g, rng)
    assert is_independent(list(g.edges()), members)
    for v in range(g.n):
        if v not in members:
            assert any(u in members for u in g.adjacency[v])


def test_default_queue_capacity():
    assert DEFAULT_MQ == 32
    assert SearchState(make_graph([1], [])).m_q == 32
