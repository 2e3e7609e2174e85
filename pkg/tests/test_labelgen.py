"""Per-vertex rule labels, the CSV format, and the dataset split."""

from __future__ import annotations

import collections

import pytest

from mwiskit.graphs import DynamicGraph
from mwiskit.labelgen import (
    TEST,
    TRAIN,
    VAL,
    LabelRecord,
    generate_labels,
    read_labels,
    split_vertices,
    write_labels,
)
from mwiskit.reductions import ReducerBudgets

from conftest import make_graph, random_graph


def labels_of(records):
    return [r.label for r in sorted(records, key=lambda r: r.vertex)]


def test_funnel_labels_exactly_the_anchor():
    # v(4) sees u(3) plus the clique {a(2), b(3)}; b has an outside
    # neighbor z(10) so the rule cannot also fire anchored at b
    g = make_graph(
        [4, 3, 2, 3, 10],
        [(0, 1), (0, 2), (0, 3), (2, 3), (3, 4)],
    )
    records = generate_labels(g, "weighted_funnel")
    assert labels_of(records) == [1, 0, 0, 0, 0]


def test_heavy_set_labels_the_resolved_vertices():
    g = make_graph([3, 3, 5], [(0, 2), (1, 2)])
    records = generate_labels(g, "heavy_set")
    assert labels_of(records) == [1, 1, 0]


def test_exhausted_oracle_budget_yields_timeout_labels():
    # twins u, v over {x, y}; the x-y edge stops the rule from also
    # triggering at x or y, and a one-node oracle budget forces a skip
    g = make_graph(
        [1, 1, 5, 5],
        [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    )
    records = generate_labels(
        g, "twin", budgets=ReducerBudgets(oracle_node_budget=1)
    )
    assert labels_of(records) == [2, 2, 0, 0]


def test_neighborhood_removal_labels_match_direct_check(rng):
    for _ in range(10):
        g = random_graph(rng, 10, 0.3)
        records = generate_labels(g, "neighborhood_removal")
        for r in records:
            v = r.vertex - 1
            fires = g.weight[v] >= sum(g.weight[u] for u in g.adjacency[v])
            assert r.label == (1 if fires else 0), v


def test_global_rule_without_application_labels_nothing():
    g = make_graph([1, 1], [(0, 1)])
    records = generate_labels(g, "critical_set")
    # the lighter side of the edge forms a critical set here, so flip to a
    # genuinely inapplicable instance: a single vertex is always included
    g2 = make_graph([2, 2], [(0, 1)])
    records2 = generate_labels(g2, "cut_vertex")
    assert labels_of(records2) == [0, 0]
    assert all(r.label in (0, 1) for r in records)


def test_generation_does_not_mutate_the_graph(rng):
    g = random_graph(rng, 12, 0.3)
    before = DynamicGraph(g).checksum()
    for rule in ("degree_one", "twin", "critical_set", "cut_vertex", "domination"):
        generate_labels(g, rule)
    assert DynamicGraph(g).checksum() == before


def test_unknown_rule_rejected():
    with pytest.raises(ValueError, match="unknown rule"):
        generate_labels(make_graph([1], []), "magic")


def test_records_are_one_indexed_and_named():
    g = make_graph([9, 1], [(0, 1)])
    records = generate_labels(g, "neighborhood_removal", graph_name="g7")
    assert [(r.graph, r.vertex, r.rule) for r in records] == [
        ("g7", 1, "neighborhood_removal"),
        ("g7", 2, "neighborhood_removal"),
    ]


# -- CSV ---------------------------------------------------------------------


def test_write_read_round_trip(tmp_path):
    records = [
        LabelRecord("a", 1, "twin", 0),
        LabelRecord("a", 2, "twin", 2),
        LabelRecord("b", 1, "heavy_set", 1),
    ]
    path = str(tmp_path / "labels.csv")
    write_labels(records, path)
    text = open(path).read().splitlines()
    assert text[0] == "graph,vertex,rule,label"
    assert read_labels(path) == records


def test_read_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("vertex,label\n1,0\n")
    with pytest.raises(ValueError, match="header"):
        read_labels(str(path))


def test_read_rejects_short_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("graph,vertex,rule,label\na,1,twin\n")
    with pytest.raises(ValueError, match="4 fields"):
        read_labels(str(path))


# -- splits ------------------------------------------------------------------


def test_split_sizes_round_toward_train():
    for n, expect in [(10, (6, 2, 2)), (5, (3, 1, 1)), (7, (5, 1, 1)), (4, (4, 0, 0))]:
        tags = split_vertices(n, seed=3)
        counts = collections.Counter(tags)
        assert (counts[TRAIN], counts[VAL], counts[TEST]) == expect


def test_split_is_deterministic_and_partitioning():
    a = split_vertices(50, seed=11)
    b = split_vertices(50, seed=11)
    c = split_vertices(50, seed=12)
    assert a == b
    assert a != c
    assert set(a) == {TRAIN, VAL, TEST}
