"""Supervised-dataset generation: per-vertex, per-rule labels and splits.

A label of 1 marks the vertices a rule application would resolve (the
included, excluded, or folded-out anchor vertices), 2 marks vertices where
an oracle-backed rule ran out of budget, and 0 everything else. Rules are
tested through the mutation journal and rolled back, so the graph is
bit-identical afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .graphs import DynamicGraph, StaticGraph
from .reductions import (
    CHEAP_RULES,
    EXPENSIVE_RULES,
    CutVertexFoldEvent,
    DegreeOneFoldEvent,
    EdgeAddEvent,
    EdgeRemoveEvent,
    Event,
    ExcludeEvent,
    FunnelEvent,
    IncludeEvent,
    ReducerBudgets,
    ReductionLog,
    RuleOutcome,
    SimplicialTransferEvent,
    TriangleTransferEvent,
    TwinFoldAllEvent,
    TwinFoldPairEvent,
    VShapeFoldEvent,
)

TRAIN, VAL, TEST = "train", "val", "test"

#: Rules whose applicability checks call the exact oracle and may
#: therefore produce timeout labels.
ORACLE_RULES = frozenset(
    {
        "twin",
        "almost_twin",
        "extended_unconfined",
        "generalized_fold_include",
        "heavy_set",
        "heavy_set_3",
        "cut_vertex",
    }
)

_LOCAL_FNS = {name: fn for name, fn in CHEAP_RULES}
_LOCAL_FNS.update({name: fn for name, fn, g in EXPENSIVE_RULES if not g})
_GLOBAL_FNS = {name: fn for name, fn, g in EXPENSIVE_RULES if g}


@dataclass(frozen=True)
class LabelRecord:
    graph: str
    vertex: int  # 1-indexed, matching the graph file format
    rule: str
    label: int


def _labeled_vertices(events: Iterable[Event]) -> set[int]:
    """The vertices a batch of journal events resolves (label-1 targets)."""
    out: set[int] = set()
    for e in events:
        if isinstance(e, IncludeEvent):
            out.update(e.vertices)
        elif isinstance(e, ExcludeEvent):
            out.add(e.vertex)
        elif isinstance(e, (EdgeRemoveEvent, EdgeAddEvent)):
            out.add(e.v)
        elif isinstance(e, (TwinFoldAllEvent, TwinFoldPairEvent)):
            out.add(e.u)
            out.add(e.v)
        elif isinstance(
            e,
            (
                DegreeOneFoldEvent,
                TriangleTransferEvent,
                VShapeFoldEvent,
                SimplicialTransferEvent,
                FunnelEvent,
                CutVertexFoldEvent,
            ),
        ):
            out.add(e.v)
    return out


def generate_labels(
    g: StaticGraph,
    rule: str,
    budgets: ReducerBudgets | None = None,
    graph_name: str = "graph",
) -> list[LabelRecord]:
    """Test ``rule`` everywhere without performing it; one record per vertex."""
    if budgets is None:
        budgets = ReducerBudgets()
    if rule not in _LOCAL_FNS and rule not in _GLOBAL_FNS:
        raise ValueError(f"unknown rule {rule!r}")
    dyn = DynamicGraph(g)
    before = dyn.checksum()
    labels = [0] * g.n

    def mark(events: list[Event]) -> None:
        for v in _labeled_vertices(events):
            if v < g.n:
                labels[v] = 1

    if rule in _GLOBAL_FNS:
        log = ReductionLog()
        mark_point = dyn.checkpoint()
        outcome = _GLOBAL_FNS[rule](dyn, log, budgets)
        if outcome == RuleOutcome.APPLIED:
            mark(log.events)
        dyn.rollback(mark_point)
    else:
        fn = _LOCAL_FNS[rule]
        for v in range(g.n):
            log = ReductionLog()
            mark_point = dyn.checkpoint()
            outcome = fn(dyn, log, v, budgets)
            if outcome == RuleOutcome.APPLIED:
                mark(log.events)
            elif outcome == RuleOutcome.SKIPPED and labels[v] == 0:
                labels[v] = 2
            dyn.rollback(mark_point)

    after = dyn.checksum()
    if after != before:
        raise AssertionError("label generation mutated the graph")
    return [
        LabelRecord(graph_name, v + 1, rule, labels[v]) for v in range(g.n)
    ]


def write_labels(records: Iterable[LabelRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("graph,vertex,rule,label\n")
        for r in records:
            f.write(f"{r.graph},{r.vertex},{r.rule},{r.label}\n")


def read_labels(path: str) -> list[LabelRecord]:
    records: list[LabelRecord] = []
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if header != "graph,vertex,rule,label":
            raise ValueError(f"unexpected label header {header!r}")
        for ln, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ValueError(f"line {ln}: expected 4 fields")
            records.append(
                LabelRecord(parts[0], int(parts[1]), parts[2], int(parts[3]))
            )
    return records


def split_vertices(n: int, seed: int) -> list[str]:
    """Deterministic 60/20/20 train/val/test split, rounding toward train."""
    n_val = n // 5
    n_test = n // 5
    order = list(range(n))
    random.Random(seed).shuffle(order)
    tags = [TRAIN] * n
    for v in order[n - n_val - n_test : n - n_test]:
        tags[v] = VAL
    for v in order[n - n_test :]:
        tags[v] = TEST
    return tags
