"""Iterated local search for maximum weight independent set.

Each iteration perturbs the solution (either an alternating-path move or
a forced insertion followed by random flips bounded by the change-queue
size m_q), runs the greedy operators until the change queue drains, and
backtracks if the iteration lost weight. The three greedy operators are
the neighborhood swap, the two-one swap, and the improving
alternating-augmenting-path move.
"""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field

from .graphs import StaticGraph

DEFAULT_MQ = 32


class Solution:
    """Independent-set membership with incrementally maintained per-vertex
    tightness (solution-neighbor count) and solution-neighbor weight."""

    __slots__ = ("g", "in_sol", "tight", "snw", "weight")

    def __init__(self, g: StaticGraph, members: set[int] | None = None):
        self.g = g
        self.in_sol = bytearray(g.n)
        self.tight = [0] * g.n
        self.snw = [0] * g.n
        self.weight = 0
        if members:
            for v in sorted(members):
                self.add(v)

    def add(self, v: int) -> None:
        assert not self.in_sol[v] and self.tight[v] == 0
        self.in_sol[v] = 1
        w = self.g.weight[v]
        self.weight += w
        for u in self.g.adjacency[v]:
            self.tight[u] += 1
            self.snw[u] += w

    def remove(self, v: int) -> None:
        assert self.in_sol[v]
        self.in_sol[v] = 0
        w = self.g.weight[v]
        self.weight -= w
        for u in self.g.adjacency[v]:
            self.tight[u] -= 1
            self.snw[u] -= w

    def members(self) -> set[int]:
        return {v for v in range(self.g.n) if self.in_sol[v]}

    def check_consistency(self) -> None:
        """Full recomputation check of all maintained fields."""
        members = self.members()
        total = 0
        for v in range(self.g.n):
            t = sum(1 for u in self.g.adjacency[v] if self.in_sol[u])
            s = sum(self.g.weight[u] for u in self.g.adjacency[v] if self.in_sol[u])
            if self.in_sol[v]:
                if t:
                    raise AssertionError(f"vertex {v} in solution but tight")
                total += self.g.weight[v]
            if t != self.tight[v] or s != self.snw[v]:
                raise AssertionError(f"stale tightness fields at vertex {v}")
        if total != self.weight:
            raise AssertionError("stale solution weight")
        _ = members


@dataclass
class BaselineResult:
    weight: int
    members: set[int]
    iterations: int
    time_to_best: float


class SearchState:
    """One local-search worker: solution, change queue, undo journal, PRNG."""

    def __init__(
        self,
        g: StaticGraph,
        members: set[int] | None = None,
        m_q: int = DEFAULT_MQ,
        rng: random.Random | None = None,
    ):
        self.g = g
        self.adj = g.adjacency
        self.adj_set = [set(a) for a in g.adjacency]
        self.w = g.weight
        self.sol = Solution(g, members)
        self.q: deque[int] = deque()
        self.m_q = m_q
        self.rng = rng if rng is not None else random.Random(0)
        self.journal: list[tuple[int, int]] = []  # (op, vertex); 1=add 0=remove
        self.best_weight = self.sol.weight
        self.best_members = self.sol.members()
        self.time_to_best = 0.0

    # -- journaled flips that notify the change queue -----------------------

    def _observe(self, v: int) -> None:
        self.q.append(v)
        self.q.extend(self.adj[v])

    def _add(self, v: int) -> None:
        self.sol.add(v)
        self.journal.append((1, v))
        self._observe(v)

    def _remove(self, v: int) -> None:
        self.sol.remove(v)
        self.journal.append((0, v))
        self._observe(v)

    def insert_evict(self, v: int) -> None:
        for u in self.adj[v]:
            if self.sol.in_sol[u]:
                self._remove(u)
        self._add(v)

    def undo(self) -> None:
        """Revert every journaled flip (restores the pre-iteration set)."""
        for op, v in reversed(self.journal):
            if op:
                self.sol.remove(v)
            else:
                self.sol.add(v)
        self.journal.clear()

    # -- operators ----------------------------------------------------------

    def neighborhood_swap(self, v: int) -> bool:
        if self.sol.in_sol[v] or self.w[v] <= self.sol.snw[v]:
            return False
        self.insert_evict(v)
        return True

    def two_one_swap(self, v: int) -> bool:
        if not self.sol.in_sol[v]:
            return False
        in_sol, tight = self.sol.in_sol, self.sol.tight
        cands = [
            x for x in self.adj[v] if not in_sol[x] and tight[x] == 1
        ]  # tight exclusively through v
        best: tuple[int, int, int] | None = None
        for i, x in enumerate(cands):
            ax = self.adj_set[x]
            for y in cands[i + 1 :]:
                if y in ax:
                    continue
                gain = self.w[x] + self.w[y] - self.w[v]
                if gain > 0 and (best is None or gain > best[0]):
                    best = (gain, x, y)
        if best is None:
            return False
        self._remove(v)
        self._add(best[1])
        self._add(best[2])
        return True

    def aap_move(self, start: int, perturb: bool) -> bool:
        """Alternating-augmenting-path move from a solution vertex or a
        one-tight outside vertex.

        In perturbation mode the path extends in a random direction and is
        applied whole unless a strictly improving prefix exists; in greedy
        mode extension is best-first and only a strictly improving prefix
        is applied.
        """
        sol = self.sol
        in_sol, tight = sol.in_sol, sol.tight
        w = self.w
        if in_sol[start]:
            removed: list[int] = [start]
            inserted: list[int] = []
            gain = -w[start]
        else:
            if tight[start] != 1:
                return False
            anchor = next(u for u in self.adj[start] if in_sol[u])
            removed = [anchor]
            inserted = [start]
            gain = w[start] - w[anchor]
        removed_set = set(removed)
        inserted_set = set(inserted)
        # prefix snapshots: (gain, #inserted, #removed)
        prefixes = [(gain, len(inserted), len(removed))]
        endpoint = removed[-1]
        limit = 2 * self.g.n
        while len(inserted) + len(removed) < limit:
            cands: list[tuple[int, int]] = []
            for x in self.adj[endpoint]:
                if in_sol[x] or x in inserted_set or tight[x] != 2:
                    continue
                if self.adj_set[x] & inserted_set:
                    continue
                y = next(
                    u for u in self.adj[x] if in_sol[u] and u != endpoint
                )
                cands.append((x, y))
            if not cands:
                break
            if perturb:
                x, y = cands[self.rng.randrange(len(cands))]
            else:
                x, y = min(
                    cands,
                    key=lambda c: (
                        -(w[c[0]] - (w[c[1]] if c[1] not in removed_set else 0)),
                        c[0],
                    ),
                )
            inserted.append(x)
            inserted_set.add(x)
            gain += w[x]
            closed = y in removed_set
            if not closed:
                removed.append(y)
                removed_set.add(y)
                gain -= w[y]
                endpoint = y
            prefixes.append((gain, len(inserted), len(removed)))
            if closed:
                break
        best_gain, best_i, best_r = max(prefixes, key=lambda p: p[0])
        if best_gain > 0:
            take_i, take_r = best_i, best_r
        elif perturb:
            take_i, take_r = len(inserted), len(removed)
        else:
            return False
        for v in removed[:take_r]:
            self._remove(v)
        for v in inserted[:take_i]:
            self._add(v)
        return True

    def greedy(self) -> None:
        """Drain the change queue, applying the strictly improving operator
        of highest priority at each popped vertex."""
        q = self.q
        sol = self.sol
        while q:
            v = q.popleft()
            if self.neighborhood_swap(v):
                continue
            if self.two_one_swap(v):
                continue
            if not sol.in_sol[v] and sol.tight[v] == 1:
                self.aap_move(v, perturb=False)

    # -- one full perturb/improve iteration ---------------------------------

    def iteration(self, backtrack: bool = True) -> None:
        weight_before = self.sol.weight
        self.journal.clear()
        u = self.rng.randrange(self.g.n)
        if self.sol.in_sol[u] or self.sol.tight[u] == 1:
            self.aap_move(u, perturb=True)
        else:
            self.insert_evict(u)
            flips = 0
            while len(self.q) < self.m_q and self.q and flips < self.m_q:
                idx = self.rng.randrange(len(self.q))
                v = self.q[idx]
                del self.q[idx]
                if self.sol.in_sol[v]:
                    self._remove(v)
                else:
                    self.insert_evict(v)
                flips += 1
        self.greedy()
        if backtrack and self.sol.weight < weight_before:
            self.undo()

    def note_best(self, started: float) -> None:
        if self.sol.weight > self.best_weight:
            self.best_weight = self.sol.weight
            self.best_members = self.sol.members()
            self.time_to_best = time.perf_counter() - started


def greedy_initial(g: StaticGraph, rng: random.Random) -> set[int]:
    """Random-order greedy insertion."""
    order = list(range(g.n))
    rng.shuffle(order)
    sol = Solution(g)
    for v in order:
        if sol.tight[v] == 0 and not sol.in_sol[v]:
            sol.add(v)
    return sol.members()


def run_baseline(
    g: StaticGraph,
    initial: set[int] | None = None,
    m_q: int = DEFAULT_MQ,
    iterations: int | None = None,
    time_limit: float | None = None,
    seed: int = 0,
    rng: random.Random | None = None,
    target_weight: int | None = None,
    state: SearchState | None = None,
) -> BaselineResult:
    """Iterated local search; returns the best solution seen.

    Stops at the iteration or wall-time budget (at least one must be
    given), or early once ``target_weight`` is reached.
    """
    if iterations is None and time_limit is None:
        raise ValueError("need an iteration or time budget")
    if g.n == 0:
        return BaselineResult(0, set(), 0, 0.0)
    if rng is None:
        rng = random.Random(seed)
    if state is None:
        if initial is None:
            initial = greedy_initial(g, rng)
        state = SearchState(g, initial, m_q, rng)
    started = time.perf_counter()
    state.note_best(started)
    done = 0
    while True:
        if target_weight is not None and state.best_weight >= target_weight:
            break
        if iterations is not None and done >= iterations:
            break
        if time_limit is not None and time.perf_counter() - started >= time_limit:
            break
        state.iteration()
        state.note_best(started)
        done += 1
    return BaselineResult(
        state.best_weight, set(state.best_members), done, state.time_to_best
    )
