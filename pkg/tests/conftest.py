"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from mwiskit.graphs import StaticGraph

from oracle import adjacency_from_edges, random_instance


def make_graph(weights, edges) -> StaticGraph:
    return StaticGraph(list(weights), adjacency_from_edges(len(weights), list(edges)))


def random_graph(rng: random.Random, n: int, p: float, max_weight: int = 20) -> StaticGraph:
    weights, edges = random_instance(rng, n, p, max_weight)
    return make_graph(weights, edges)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)
