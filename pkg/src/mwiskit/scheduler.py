"""Reduction scheduler: per-rule FIFO queues with change propagation.

Rules are ordered cheap-to-expensive; a rule is attempted only when every
earlier queue is empty, and any successful application pushes the changed
vertices back into every queue and restarts from the first rule. The
expensive rules can be gated by per-rule screening models under several
configurations; screening never affects soundness, only kernel size.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

from .graphs import DynamicGraph, StaticGraph
from .reductions import (
    CHEAP_RULES,
    EXPENSIVE_RULES,
    EdgeAddEvent,
    EdgeRemoveEvent,
    ReducerBudgets,
    ReductionLog,
    RuleOutcome,
    extended_domination,
    extended_domination_reverse,
)

__all__ = [
    "ScreeningMode",
    "ReducerBudgets",
    "ReduceStats",
    "RuleStats",
    "run_reduce",
    "screen",
    "RULE_SLOTS",
]


class ScreeningMode(Enum):
    NO_GNN_RED = "no-gnn"  # expensive rules disabled entirely
    NEVER = "never"  # exhaustive, no screening
    ALWAYS = "always"  # re-screen on every non-empty visit
    INITIAL = "initial"  # screen once, then exhaustive queueing
    INITIAL_TIGHT = "initial-tight"  # screen once, queue frozen afterwards

    @property
    def uses_models(self) -> bool:
        return self in (
            ScreeningMode.ALWAYS,
            ScreeningMode.INITIAL,
            ScreeningMode.INITIAL_TIGHT,
        )


@dataclass
class _Slot:
    """One scheduler queue position."""

    name: str
    expensive: bool
    global_rule: bool = False
    combined: bool = False  # the edge-rewrite pair sharing one slot


def _build_slots() -> list[_Slot]:
    slots: list[_Slot] = []
    for name, _fn in CHEAP_RULES:
        if name == "extended_domination":
            slots.append(_Slot("extended_domination_pair", False, combined=True))
        elif name == "extended_domination_reverse":
            continue  # shares the previous slot
        else:
            slots.append(_Slot(name, False))
    for name, _fn, global_rule in EXPENSIVE_RULES:
        slots.append(_Slot(name, True, global_rule=global_rule))
    return slots


RULE_SLOTS: list[_Slot] = _build_slots()

_LOCAL_FNS: dict[str, Callable[..., RuleOutcome]] = {
    **{name: fn for name, fn in CHEAP_RULES},
    **{name: fn for name, fn, g in EXPENSIVE_RULES if not g},
}
_GLOBAL_FNS: dict[str, Callable[..., RuleOutcome]] = {
    name: fn for name, fn, g in EXPENSIVE_RULES if g
}


class _Queue:
    """FIFO of vertex ids with membership dedupe and an optional freeze."""

    __slots__ = ("items", "members", "frozen")

    def __init__(self) -> None:
        self.items: deque[int] = deque()
        self.members: set[int] = set()
        self.frozen = False

    def __len__(self) -> int:
        return len(self.items)

    def push(self, v: int) -> None:
        if self.frozen or v in self.members:
            return
        self.items.append(v)
        self.members.add(v)

    def pop(self) -> int:
        v = self.items.popleft()
        self.members.discard(v)
        return v

    def clear(self) -> None:
        self.items.clear()
        self.members.clear()

    def replace(self, vs: Iterable[int]) -> None:
        self.clear()
        for v in vs:
            self.items.append(v)
            self.members.add(v)


@dataclass
class RuleStats:
    checks: int = 0
    applied: int = 0
    skipped: int = 0
    time: float = 0.0


@dataclass
class ReduceStats:
    rules: dict[str, RuleStats] = field(default_factory=dict)
    screenings: int = 0
    total_time: float = 0.0

    def rule(self, name: str) -> RuleStats:
        return self.rules.setdefault(name, RuleStats())

    def expensive_checks(self) -> int:
        expensive = {name for name, _fn, _g in EXPENSIVE_RULES}
        return sum(s.checks for name, s in self.rules.items() if name in expensive)

    def to_text(self) -> str:
        lines = [f"total_time={self.total_time:.6f}", f"screenings={self.screenings}"]
        for name in sorted(self.rules):
            s = self.rules[name]
            lines.append(
                f"rule={name} checks={s.checks} applied={s.applied} "
                f"skipped={s.skipped} time={s.time:.6f}"
            )
        return "\n".join(lines) + "\n"


def screen(model, g: DynamicGraph | StaticGraph) -> set[int]:
    """Vertices whose model score is strictly above 0.5."""
    if isinstance(g, DynamicGraph):
        sub, ids = g.active_snapshot()
    else:
        sub, ids = g, list(range(g.n))
    predict = getattr(model, "predict", model)
    scores = predict(sub)
    if len(scores) != sub.n:
        raise ValueError(
            f"model produced {len(scores)} scores for {sub.n} vertices"
        )
    return {ids[i] for i, s in enumerate(scores) if s > 0.5}


def _resolve_model(models, name: str):
    if isinstance(models, Mapping):
        try:
            return models[name]
        except KeyError:
            raise ValueError(f"no screening model supplied for rule {name}")
    return models


def run_reduce(
    g: StaticGraph | DynamicGraph,
    mode: ScreeningMode = ScreeningMode.NEVER,
    budgets: ReducerBudgets | None = None,
    models=None,
) -> tuple[DynamicGraph, ReductionLog, ReduceStats]:
    """Run the full reduction loop; returns the mutated dynamic graph,
    the event log (offset included), and per-rule statistics.

    ``models`` is a single scoring model or a mapping from expensive-rule
    name to model; it is required exactly for the screening modes.
    """
    if mode.uses_models and models is None:
        raise ValueError(f"mode {mode.value} requires screening models")
    if not mode.uses_models and models is not None:
        raise ValueError(f"mode {mode.value} does not accept screening models")
    if budgets is None:
        budgets = ReducerBudgets()
    dyn = g if isinstance(g, DynamicGraph) else DynamicGraph(g)
    log = ReductionLog()
    stats = ReduceStats()
    started = time.perf_counter()

    queues = [_Queue() for _ in RULE_SLOTS]
    initial = dyn.active_vertices()
    for q in queues:
        q.replace(initial)
    dyn.pop_changed()  # discard any pre-existing change notes
    screened: set[int] = set()  # slot indices screened at least once
    # unordered pairs already rewritten once, to stop remove/add cycles
    removed_pairs: set[frozenset[int]] = set()
    added_pairs: set[frozenset[int]] = set()

    def push_changed() -> None:
        for v in sorted(dyn.pop_changed()):
            for q in queues:
                q.push(v)

    def timed(name: str, fn: Callable[[], RuleOutcome]) -> RuleOutcome:
        s = stats.rule(name)
        s.checks += 1
        t0 = time.perf_counter()
        outcome = fn()
        s.time += time.perf_counter() - t0
        if outcome == RuleOutcome.APPLIED:
            s.applied += 1
        elif outcome == RuleOutcome.SKIPPED:
            s.skipped += 1
        return outcome

    i = 0
    last_slot = -1  # detects arrival at a slot, so screening is per visit
    while i < len(RULE_SLOTS):
        slot = RULE_SLOTS[i]
        q = queues[i]
        arriving = i != last_slot
        last_slot = i
        if slot.expensive and mode == ScreeningMode.NO_GNN_RED:
            q.clear()
            i += 1
            continue
        if not q:
            i += 1
            continue

        screened_now = False
        if slot.expensive and mode.uses_models:
            if (mode == ScreeningMode.ALWAYS and arriving) or i not in screened:
                model = _resolve_model(models, slot.name)
                q.frozen = False
                q.replace(sorted(screen(model, dyn)))
                stats.screenings += 1
                screened.add(i)
                screened_now = True
                if mode == ScreeningMode.INITIAL_TIGHT:
                    q.frozen = True
                if not q:
                    i += 1
                    continue

        if slot.global_rule:
            # fires once over the whole graph per non-empty visit; under
            # screening only when enough of the graph is suggested
            run_it = True
            if screened_now:
                run_it = len(q) > budgets.global_fraction * dyn.active_count()
            was_frozen = q.frozen
            q.frozen = False
            q.clear()
            q.frozen = was_frozen
            if run_it:
                fn = _GLOBAL_FNS[slot.name]
                outcome = timed(slot.name, lambda: fn(dyn, log, budgets))
                if outcome == RuleOutcome.APPLIED:
                    push_changed()
                    i = 0
                    last_slot = -1
                    continue
            i += 1
            continue

        v = q.pop()
        if not dyn.is_active(v):
            continue
        if slot.combined:
            outcome = timed(
                "extended_domination",
                lambda: extended_domination(
                    dyn, log, v, budgets, forbidden_pairs=added_pairs
                ),
            )
            if outcome != RuleOutcome.APPLIED:
                outcome = timed(
                    "extended_domination_reverse",
                    lambda: extended_domination_reverse(
                        dyn, log, v, budgets, forbidden_pairs=removed_pairs
                    ),
                )
            if outcome == RuleOutcome.APPLIED:
                event = log.events[-1]
                if isinstance(event, EdgeRemoveEvent):
                    removed_pairs.add(frozenset((event.u, event.v)))
                elif isinstance(event, EdgeAddEvent):
                    added_pairs.add(frozenset((event.u, event.v)))
        else:
            fn = _LOCAL_FNS[slot.name]
            outcome = timed(slot.name, lambda: fn(dyn, log, v, budgets))
        if outcome == RuleOutcome.APPLIED:
            push_changed()
            i = 0
            last_slot = -1

    stats.total_time = time.perf_counter() - started
    return dyn, log, stats
