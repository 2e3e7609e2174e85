"""Acceptance gate: one test per release criterion.

Each test prints a single machine-greppable PASS/FAIL line for its
criterion in addition to the normal pytest verdict. These runs are larger
than the per-module tests; the whole file stays within a ten-minute
budget on commodity hardware.
"""

from __future__ import annotations

import random
import sys
import time

import numpy as np
import pytest

from mwiskit.bench import RunRecord, perf_profile, pipeline_solve
from mwiskit.chils import ChilsConfig, run_chils
from mwiskit.gnn import default_model, extract_features, forward
from mwiskit.localsearch import DEFAULT_MQ, run_baseline
from mwiskit.reductions import ALL_RULE_NAMES, ReducerBudgets
from mwiskit.scheduler import ScreeningMode, run_reduce, screen

from conftest import make_graph, random_graph
from oracle import brute_force, random_instance
from test_gnn import random_model, reference_forward
from test_reductions import (
    APPLIED,
    _GLOBAL,
    critical_value_by_enumeration,
    run_rule,
)


def report(name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {name}: {verdict}"
    if detail:
        line += f" ({detail})"
    print(line, file=sys.stderr, flush=True)
    assert ok, line


class ConstModel:
    def __init__(self, value: float):
        self.value = value

    def predict(self, g):
        return np.full(g.n, self.value)


def test_master_exactness_across_all_reduction_modes():
    """10,000 random instances, n <= 14, solved exactly through every
    reduction configuration with zero tolerance."""
    started = time.perf_counter()
    stub = ConstModel(1.0)
    total = 10_000
    probs = [0.1, 0.2, 0.3, 0.5]
    mismatches = 0
    for i in range(total):
        rng = random.Random(900_000 + i)
        n = 4 + i % 11  # 4..14
        p = probs[i % 4]
        weights, edges = random_instance(rng, n, p, max_weight=20)
        g = make_graph(weights, edges)
        alpha = brute_force(weights, edges)[0]
        for mode in ScreeningMode:
            models = stub if mode.uses_models else None
            got, _, _ = pipeline_solve(g, mode, models=models)
            if got != alpha:
                mismatches += 1
    elapsed = time.perf_counter() - started
    report(
        "master-exactness",
        mismatches == 0 and elapsed < 600,
        f"{total} graphs x 5 modes, {mismatches} mismatches, {elapsed:.0f}s",
    )


def test_every_rule_is_individually_sound_at_every_vertex():
    """Each rule, applied at every vertex of random graphs, preserves the
    optimum through offset and reconstruction; every rule must fire."""
    failures = 0
    fired: dict[str, int] = {name: 0 for name in ALL_RULE_NAMES}
    for name in ALL_RULE_NAMES:
        rng = random.Random(hash(name) & 0xFFFF)
        for _ in range(40):
            n = rng.randint(4, 11)
            g = random_graph(rng, n, rng.choice([0.2, 0.3, 0.5]))
            anchors = [None] if name in _GLOBAL else range(g.n)
            for anchor in anchors:
                try:
                    outcome, _, _ = run_rule(g, name, anchor)
                except AssertionError:
                    failures += 1
                    continue
                if outcome == APPLIED:
                    fired[name] += 1
    silent = [name for name, c in fired.items() if c == 0]
    report(
        "per-rule-soundness",
        failures == 0 and not silent,
        f"{failures} failures, silent rules: {silent or 'none'}",
    )


def test_critical_set_flow_matches_enumeration():
    """The min-cut-derived critical set achieves exactly the enumeration
    maximum of weight(I) - weight(N(I)) on every instance up to n = 12."""
    bad = 0
    for i in range(300):
        rng = random.Random(30_000 + i)
        g = random_graph(rng, rng.randint(3, 12), rng.choice([0.15, 0.3, 0.5]))
        value = critical_value_by_enumeration(g)
        outcome, _, log = run_rule(g, "critical_set")
        if value > 0:
            if outcome != APPLIED:
                bad += 1
                continue
            chosen = set(log.events[0].vertices)
            nbhd = set()
            for v in chosen:
                nbhd.update(g.adjacency[v])
            got = sum(g.weight[v] for v in chosen) - sum(
                g.weight[v] for v in nbhd - chosen
            )
            if got != value:
                bad += 1
        elif outcome == APPLIED:
            bad += 1
    report("critical-set-flow", bad == 0, f"300 instances, {bad} disagreements")


def test_baseline_finds_most_small_optima():
    """The iterated local search reaches the optimum on at least 90 of 100
    fixed-seed instances with n <= 18 within 100,000 iterations."""
    hits = 0
    for seed in range(100):
        rng = random.Random(7_000 + seed)
        n = 12 + seed % 7  # 12..18
        weights, edges = random_instance(rng, n, 0.3, max_weight=20)
        g = make_graph(weights, edges)
        opt = brute_force(weights, edges)[0]
        res = run_baseline(g, iterations=100_000, seed=seed, target_weight=opt)
        if res.weight == opt:
            hits += 1
    report("baseline-quality", hits >= 90, f"{hits}/100 optima")


def test_chils_is_thread_count_independent():
    """Deterministic portfolio runs return bitwise-identical solutions for
    1, 2, 4, and 8 worker threads."""
    bad = 0
    for i in range(10):
        g = random_graph(random.Random(40_000 + i), 8, 0.3)
        outcomes = []
        for threads in (1, 2, 4, 8):
            cfg = ChilsConfig(
                p=16, deterministic=(1000, 10), seed=i, threads=threads
            )
            res = run_chils(g, cfg)
            outcomes.append((frozenset(res.members), res.weight, tuple(res.trace)))
        if len(set(outcomes)) != 1:
            bad += 1
    report("chils-determinism", bad == 0, f"10 instances x 4 thread counts, {bad} diverged")


def test_chils_best_solution_never_regresses():
    """The incumbent traced by the portfolio search is monotone, and the
    in-run independence and lift-weight assertions all hold."""
    ok = True
    for i in range(5):
        g = random_graph(random.Random(50_000 + i), 14, 0.3)
        res = run_chils(g, ChilsConfig(p=4, deterministic=(200, 6), seed=i))
        weights = [w for _, w, _ in res.trace]
        ok &= weights == sorted(weights) and weights[-1] == res.weight
    report("chils-monotone-best", ok)


def test_gnn_matches_scalar_reference():
    """Vectorized inference agrees with an independent scalar evaluator to
    1e-6 on 100 model/graph pairs; all-zero weights score exactly 0.5."""
    rng = random.Random(77)
    worst = 0.0
    archs = ["gcn", "sage", "lr"]
    for i in range(100):
        arch = archs[i % 3]
        model = random_model(arch, rng, output_concat=bool(i % 2))
        g = random_graph(rng, rng.randint(1, 12), 0.35, max_weight=9)
        feats = extract_features(g)
        ours = forward(model, g, feats)
        ref = reference_forward(model, g, feats)
        worst = max(worst, max(abs(a - b) for a, b in zip(ours, ref)))
    zero_ok = all(
        list(default_model(a).predict(random_graph(rng, 7, 0.4))) == [0.5] * 7
        for a in archs
    )
    report(
        "gnn-parity",
        worst < 1e-6 and zero_ok,
        f"max deviation {worst:.2e}, zero-model half: {zero_ok}",
    )


def test_screening_only_defers_reductions_it_could_have_made():
    """Screened kernels always contain the exhaustive kernel, and the
    cheap-only mode performs zero expensive applicability checks."""
    stub = ConstModel(1.0)
    containment_ok = True
    expensive = 0
    for i in range(50):
        g = random_graph(random.Random(60_000 + i), 13, 0.3)
        dyn, _, _ = run_reduce(g, ScreeningMode.NEVER)
        _, never_ids = dyn.active_snapshot()
        base = {v for v in never_ids if v < g.n}
        for mode in (
            ScreeningMode.ALWAYS,
            ScreeningMode.INITIAL,
            ScreeningMode.INITIAL_TIGHT,
        ):
            dyn2, _, _ = run_reduce(g, mode, models=stub)
            _, ids = dyn2.active_snapshot()
            containment_ok &= base <= {v for v in ids if v < g.n}
        _, _, stats = run_reduce(g, ScreeningMode.NO_GNN_RED)
        expensive += stats.expensive_checks()
    report(
        "screening-containment",
        containment_ok and expensive == 0,
        f"containment {containment_ok}, cheap-mode expensive checks {expensive}",
    )


def test_documented_defaults():
    """The advertised default parameters are the ones actually in force."""
    cfg = ChilsConfig(deterministic=(1, 1))
    checks = [
        cfg.p == 16,
        cfg.t_g == 10.0,
        cfg.t_c == 10.0,
        cfg.perturb_threshold == 500,
        DEFAULT_MQ == 32,
        [cfg.m_q_for(i) for i in range(3)] == [32, 36, 40],
        screen(ConstModel(0.5), make_graph([1], [])) == set(),
        screen(ConstModel(0.5000001), make_graph([1], [])) == {0},
        ReducerBudgets().global_fraction == 0.01,
    ]
    report("defaults", all(checks), f"{sum(checks)}/{len(checks)} checks")


def test_quality_profile_hand_example():
    """Two algorithms splitting two instances 10-vs-8 profile to 0.5 at
    factor 1 and reach 1.0 by factor 0.8."""
    records = [
        RunRecord("i1", "A", 10, 1.0),
        RunRecord("i1", "B", 8, 1.0),
        RunRecord("i2", "A", 8, 1.0),
        RunRecord("i2", "B", 10, 1.0),
    ]
    curves = perf_profile(records, "quality", taus=[1.0, 0.8])
    ok = curves["A"] == [(1.0, 0.5), (0.8, 1.0)] and curves["B"] == [
        (1.0, 0.5),
        (0.8, 1.0),
    ]
    report("profile-hand-example", ok)
