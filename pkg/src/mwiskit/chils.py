"""Concurrent difference-core metaheuristic over a portfolio of local
searches.

A portfolio of P iterated local searches runs on the full graph; the
vertices on which the portfolio disagrees (in some solutions but not all)
form the difference core, which is searched again from scratch; improved
core solutions are lifted back and accepted into the portfolio. Worker
randomness is keyed by (seed, solution id, iteration, phase), so results
are independent of the number of threads actually used.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .graphs import StaticGraph
from .localsearch import (
    DEFAULT_MQ,
    BaselineResult,
    SearchState,
    greedy_initial,
    run_baseline,
)

PERTURB_THRESHOLD = 500


@dataclass
class ChilsConfig:
    p: int = 16
    m_q_base: int = DEFAULT_MQ
    t_g: float = 10.0  # per-phase budget on the full graph (seconds)
    t_c: float = 10.0  # per-phase budget on the core (seconds)
    total_time: float | None = None
    perturb_threshold: int = PERTURB_THRESHOLD
    # deterministic mode: (local search iterations per phase, CHILS iterations)
    deterministic: tuple[int, int] | None = None
    seed: int = 0
    threads: int = 1

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError("portfolio size must be at least 2")
        if self.threads < 1:
            raise ValueError("thread count must be at least 1")
        if self.deterministic is None and self.total_time is None:
            raise ValueError("need a wall-time budget or deterministic mode")

    def m_q_for(self, solution_id: int) -> int:
        return self.m_q_base + 4 * solution_id

    def rng_for(self, solution_id: int, iteration: int, phase: str) -> random.Random:
        return random.Random(f"{self.seed}:{solution_id}:{iteration}:{phase}")


@dataclass
class DCore:
    graph: StaticGraph
    to_original: list[int]  # core vertex id -> original id
    shared: frozenset[int]  # vertices in every portfolio solution
    offset: int  # total weight of the shared vertices

    def lift(self, core_members: set[int]) -> set[int]:
        return {self.to_original[v] for v in core_members} | set(self.shared)


def _solution_weight(g: StaticGraph, members: set[int]) -> int:
    return sum(g.weight[v] for v in members)


def _assert_independent(g: StaticGraph, members: set[int]) -> None:
    for v in members:
        for u in g.adjacency[v]:
            if u in members:
                raise AssertionError(f"solution contains edge ({v},{u})")


def build_dcore(g: StaticGraph, solutions: list[set[int]]) -> DCore:
    """Induced subgraph over the vertices the portfolio disagrees on."""
    if not solutions:
        raise ValueError("empty portfolio")
    shared = set(solutions[0])
    present: set[int] = set()
    for s in solutions:
        shared &= s
        present |= s
    core = sorted(present - shared)
    index = {v: i for i, v in enumerate(core)}
    weights = [g.weight[v] for v in core]
    adjacency = [
        [index[u] for u in g.adjacency[v] if u in index] for v in core
    ]
    return DCore(
        StaticGraph(weights, adjacency),
        core,
        frozenset(shared),
        sum(g.weight[v] for v in shared),
    )


@dataclass
class ChilsResult:
    weight: int
    members: set[int]
    iterations: int
    time_to_best: float
    trace: list[tuple[int, int, int]] = field(default_factory=list)
    # trace rows: (iteration, best weight, core size)


def _best_index(g: StaticGraph, solutions: list[set[int]]) -> int:
    """Heaviest portfolio member; lowest id wins ties."""
    best = 0
    best_w = _solution_weight(g, solutions[0])
    for i in range(1, len(solutions)):
        w = _solution_weight(g, solutions[i])
        if w > best_w:
            best, best_w = i, w
    return best


def run_chils(
    g: StaticGraph, cfg: ChilsConfig, warm: set[int] | None = None
) -> ChilsResult:
    """Portfolio search; returns the heaviest solution seen."""
    if g.n == 0:
        return ChilsResult(0, set(), 0, 0.0)
    started = time.perf_counter()
    det = cfg.deterministic
    ls_iters = det[0] if det else None

    solutions: list[set[int]] = []
    for i in range(cfg.p):
        if warm is not None:
            solutions.append(set(warm))
        else:
            solutions.append(greedy_initial(g, cfg.rng_for(i, 0, "init")))
        _assert_independent(g, solutions[i])

    best_members = set(solutions[_best_index(g, solutions)])
    best_weight = _solution_weight(g, best_members)
    time_to_best = time.perf_counter() - started
    trace: list[tuple[int, int, int]] = []

    def out_of_time() -> bool:
        return (
            cfg.total_time is not None
            and time.perf_counter() - started >= cfg.total_time
        )

    def run_workers(jobs) -> list:
        if cfg.threads == 1:
            return [job() for job in jobs]
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(lambda job: job(), jobs))

    iteration = 0
    while True:
        if det is not None and iteration >= det[1]:
            break
        if det is None and out_of_time():
            break

        # phase 1: refine every portfolio member on the full graph
        def full_job(i: int):
            def job() -> BaselineResult:
                return run_baseline(
                    g,
                    initial=set(solutions[i]),
                    m_q=cfg.m_q_for(i),
                    iterations=ls_iters,
                    time_limit=None if det else cfg.t_g,
                    rng=cfg.rng_for(i, iteration, "full"),
                )

            return job

        for i, res in enumerate(run_workers([full_job(i) for i in range(cfg.p)])):
            solutions[i] = res.members
        best_idx = _best_index(g, solutions)
        w = _solution_weight(g, solutions[best_idx])
        if w > best_weight:
            best_weight = w
            best_members = set(solutions[best_idx])
            time_to_best = time.perf_counter() - started

        # phase 2: difference core
        core = build_dcore(g, solutions)

        # phase 3: search the core from scratch and lift the results back
        def core_job(i: int):
            def job() -> BaselineResult:
                return run_baseline(
                    core.graph,
                    initial=set(),
                    m_q=cfg.m_q_for(i),
                    iterations=ls_iters,
                    time_limit=None if det else cfg.t_c,
                    rng=cfg.rng_for(i, iteration, "core"),
                )

            return job

        core_results = run_workers([core_job(i) for i in range(cfg.p)])
        for i, res in enumerate(core_results):
            lifted = core.lift(res.members)
            lifted_weight = _solution_weight(g, lifted)
            if lifted_weight != res.weight + core.offset:
                raise AssertionError("core lift weight mismatch")
            _assert_independent(g, lifted)
            if lifted_weight >= _solution_weight(g, solutions[i]) or (
                i % 2 == 1 and i != best_idx
            ):
                solutions[i] = lifted

        best_idx = _best_index(g, solutions)
        w = _solution_weight(g, solutions[best_idx])
        if w > best_weight:
            best_weight = w
            best_members = set(solutions[best_idx])
            time_to_best = time.perf_counter() - started

        # phase 4: shake up stagnating members when the core is small
        if core.graph.n < cfg.perturb_threshold:
            def perturb_job(i: int):
                def job() -> set[int]:
                    state = SearchState(
                        g,
                        set(solutions[i]),
                        cfg.m_q_for(i),
                        cfg.rng_for(i, iteration, "perturb"),
                    )
                    state.iteration(backtrack=False)
                    return state.sol.members()

                return job

            odd_ids = [
                i for i in range(cfg.p) if i % 2 == 1 and i != best_idx
            ]
            for i, members in zip(
                odd_ids, run_workers([perturb_job(i) for i in odd_ids])
            ):
                _assert_independent(g, members)
                solutions[i] = members

        iteration += 1
        idx = _best_index(g, solutions)
        w = _solution_weight(g, solutions[idx])
        if w > best_weight:
            best_weight = w
            best_members = set(solutions[idx])
            time_to_best = time.perf_counter() - started
        trace.append((iteration, best_weight, core.graph.n))

    return ChilsResult(best_weight, best_members, iteration, time_to_best, trace)
