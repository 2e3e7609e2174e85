"""Maximum flow / minimum cut via Dinic's blocking-flow algorithm.

Used by the critical-weight independent-set reduction, which maximizes
ω(I) − ω(N(I)) through a project-selection style cut on a bipartite
doubling of the graph.
"""

from __future__ import annotations

from collections import deque

INF = float("inf")


class FlowNetwork:
    """Adjacency-list flow network with residual edges."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        # parallel arrays: to[i], cap[i]; edge i^1 is the residual twin
        self.to: list[int] = []
        self.cap: list[float] = []

    def add_edge(self, u: int, v: int, capacity: float) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(capacity)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0.0)

    def max_flow(self, s: int, t: int) -> float:
        flow = 0.0
        while True:
            level = self._bfs_levels(s, t)
            if level[t] < 0:
                return flow
            it = [0] * self.n
            while True:
                pushed = self._dfs(s, t, INF, level, it)
                if pushed == 0:
                    break
                flow += pushed

    def _bfs_levels(self, s: int, t: int) -> list[int]:
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for i in self.head[u]:
                v = self.to[i]
                if self.cap[i] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    q.append(v)
        return level

    def _dfs(self, u: int, t: int, limit: float, level: list[int], it: list[int]) -> float:
        if u == t:
            return limit
        while it[u] < len(self.head[u]):
            i = self.head[u][it[u]]
            v = self.to[i]
            if self.cap[i] > 0 and level[v] == level[u] + 1:
                pushed = self._dfs(v, t, min(limit, self.cap[i]), level, it)
                if pushed > 0:
                    self.cap[i] -= pushed
                    self.cap[i ^ 1] += pushed
                    return pushed
            it[u] += 1
        level[u] = -1
        return 0.0

    def min_cut_source_side(self, s: int) -> set[int]:
        """Vertices reachable from s in the residual graph after max_flow."""
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for i in self.head[u]:
                v = self.to[i]
                if self.cap[i] > 0 and v not in seen:
                    seen.add(v)
                    q.append(v)
        return seen
