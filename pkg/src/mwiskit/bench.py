"""Benchmark plumbing: solve pipelines, run records, performance profiles.

The profile generator follows the usual benchmarking convention: for a
quality profile, an algorithm's value at factor τ is the fraction of
instances on which its weight is at least τ times the best weight any
algorithm achieved there; for a time profile, the fraction of instances
solved within τ times the fastest time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .chils import ChilsConfig, run_chils
from .exact import Budget, solve_exact
from .graphs import StaticGraph
from .localsearch import run_baseline
from .reductions import ReducerBudgets, restore_solution
from .scheduler import ReduceStats, ScreeningMode, run_reduce

QUALITY_TAUS = [1.0, 0.999, 0.99, 0.98, 0.95, 0.9, 0.8, 0.5]
TIME_TAUS = [1.0, 1.1, 1.25, 1.5, 2.0, 5.0, 10.0, 100.0]


class VerificationError(AssertionError):
    """The end-to-end solution check failed; this must never happen."""


@dataclass(frozen=True)
class RunRecord:
    instance: str
    algorithm: str
    weight: int
    time: float


def maximalize(g: StaticGraph, members: set[int]) -> set[int]:
    """Greedily add every addable vertex, heaviest first."""
    out = set(members)
    blocked = set()
    for v in out:
        blocked.update(g.adjacency[v])
    for v in sorted(range(g.n), key=lambda v: (-g.weight[v], v)):
        if v in out or v in blocked:
            continue
        out.add(v)
        blocked.update(g.adjacency[v])
    return out


def verify_solution(g: StaticGraph, members: set[int]) -> int:
    """Independence check plus weight recomputation; returns the weight."""
    for v in members:
        if not 0 <= v < g.n:
            raise VerificationError(f"vertex {v} out of range")
        for u in g.adjacency[v]:
            if u in members:
                raise VerificationError(f"solution contains edge ({v},{u})")
    return sum(g.weight[v] for v in members)


def pipeline_solve(
    g: StaticGraph,
    mode: ScreeningMode = ScreeningMode.NEVER,
    solver: str = "exact",
    budgets: ReducerBudgets | None = None,
    models=None,
    solver_budget: Budget | None = None,
    seed: int = 0,
    iterations: int | None = None,
    time_limit: float | None = None,
    chils_config: ChilsConfig | None = None,
) -> tuple[int, set[int], ReduceStats]:
    """Reduce, solve the kernel, lift, and verify against the input."""
    if solver not in ("exact", "baseline", "chils"):
        raise ValueError(f"unknown solver {solver!r}")
    dyn, log, stats = run_reduce(g, mode, budgets, models)
    kernel, ids = dyn.active_snapshot()

    if kernel.n == 0:
        kernel_solution: set[int] = set()
        kernel_weight = 0
    elif solver == "exact":
        result = solve_exact(kernel, solver_budget)
        if not result.optimal:
            raise ValueError("exact solver budget exhausted on the kernel")
        kernel_solution = set(result.vertices)
        kernel_weight = result.weight
    elif solver == "baseline":
        res = run_baseline(
            kernel,
            iterations=iterations,
            time_limit=time_limit,
            seed=seed,
        )
        kernel_solution = maximalize(kernel, res.members)
        kernel_weight = verify_solution(kernel, kernel_solution)
    elif solver == "chils":
        cfg = chils_config if chils_config is not None else ChilsConfig(seed=seed)
        res = run_chils(kernel, cfg)
        kernel_solution = maximalize(kernel, res.members)
        kernel_weight = verify_solution(kernel, kernel_solution)

    lifted = restore_solution(log, {ids[i] for i in kernel_solution})
    total = verify_solution(g, lifted)
    if total != kernel_weight + log.offset:
        raise VerificationError(
            f"lifted weight {total} != kernel {kernel_weight} + offset {log.offset}"
        )
    return total, lifted, stats


# ---------------------------------------------------------------------------
# Performance profiles
# ---------------------------------------------------------------------------


def _group(records: Iterable[RunRecord]):
    instances: dict[str, dict[str, RunRecord]] = {}
    algorithms: set[str] = set()
    for r in records:
        per = instances.setdefault(r.instance, {})
        if r.algorithm in per:
            raise ValueError(
                f"duplicate record for {r.algorithm} on {r.instance}"
            )
        per[r.algorithm] = r
        algorithms.add(r.algorithm)
    for name, per in instances.items():
        missing = algorithms - set(per)
        if missing:
            raise ValueError(f"instance {name} missing records for {missing}")
    return instances, sorted(algorithms)


def perf_profile(
    records: Iterable[RunRecord],
    kind: str,
    taus: Sequence[float] | None = None,
) -> dict[str, list[tuple[float, float]]]:
    """Per-algorithm piecewise-constant profile curves."""
    if kind not in ("quality", "time"):
        raise ValueError(f"unknown profile kind {kind!r}")
    if taus is None:
        taus = QUALITY_TAUS if kind == "quality" else TIME_TAUS
    for tau in taus:
        if kind == "quality" and not 0 < tau <= 1:
            raise ValueError("quality profile factors must be in (0, 1]")
        if kind == "time" and tau < 1:
            raise ValueError("time profile factors must be at least 1")
    instances, algorithms = _group(records)
    if not instances:
        raise ValueError("no records")
    curves: dict[str, list[tuple[float, float]]] = {a: [] for a in algorithms}
    n = len(instances)
    for tau in taus:
        hits = {a: 0 for a in algorithms}
        for per in instances.values():
            if kind == "quality":
                best = max(r.weight for r in per.values())
                for a in algorithms:
                    if per[a].weight >= tau * best:
                        hits[a] += 1
            else:
                fastest = min(r.time for r in per.values())
                for a in algorithms:
                    if per[a].time <= tau * fastest:
                        hits[a] += 1
        for a in algorithms:
            curves[a].append((tau, hits[a] / n))
    return curves


def read_records(path: str) -> list[RunRecord]:
    records: list[RunRecord] = []
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if header != "instance,algorithm,weight,time":
            raise ValueError(f"unexpected record header {header!r}")
        for ln, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ValueError(f"line {ln}: expected 4 fields")
            records.append(
                RunRecord(parts[0], parts[1], int(parts[2]), float(parts[3]))
            )
    return records


def write_records(records: Iterable[RunRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("instance,algorithm,weight,time\n")
        for r in records:
            f.write(f"{r.instance},{r.algorithm},{r.weight},{r.time!r}\n")


def write_profile(
    curves: dict[str, list[tuple[float, float]]], path: str
) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("algorithm,tau,fraction\n")
        for algorithm in sorted(curves):
            for tau, fraction in curves[algorithm]:
                f.write(f"{algorithm},{tau!r},{fraction!r}\n")


def plot_profile(
    curves: dict[str, list[tuple[float, float]]], kind: str, path: str
) -> None:
    """Render the profile curves to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for algorithm in sorted(curves):
        points = curves[algorithm]
        xs = [tau for tau, _ in points]
        ys = [frac for _, frac in points]
        ax.step(xs, ys, where="post", label=algorithm, marker="o", markersize=3)
    ax.set_xlabel("factor of best" if kind == "quality" else "factor of fastest")
    ax.set_ylabel("fraction of instances")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
