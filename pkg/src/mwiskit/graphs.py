"""Weighted graph representations and file I/O.

Two layers: an immutable :class:`StaticGraph` (parsing, snapshots,
subproblems) and a journaled :class:`DynamicGraph` that supports the
mutations the reduction rules need (vertex/edge removal, weight changes,
fold-product insertion) together with checkpoint/rollback.

File format: header line ``n m 10`` followed by n lines
``weight nbr nbr ...`` with 1-indexed neighbors; ``%`` lines are comments.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from enum import IntEnum
from typing import Iterable, Iterator, Sequence


class ParseError(ValueError):
    """Malformed graph file; message names the offending line."""


class GraphMutationError(RuntimeError):
    """Operation attempted on a non-active vertex or missing edge."""


class StaticGraph:
    """Immutable vertex-weighted graph with sorted adjacency lists."""

    __slots__ = ("n", "adjacency", "weight")

    def __init__(self, weights: Sequence[int], adjacency: Sequence[Sequence[int]]):
        self.n = len(weights)
        self.weight = list(weights)
        self.adjacency = [sorted(a) for a in adjacency]
        self.validate()

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def neighbors(self, v: int) -> list[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adjacency[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def validate(self) -> None:
        for v in range(self.n):
            if self.weight[v] <= 0:
                raise ValueError(f"non-positive weight at vertex {v}")
            a = self.adjacency[v]
            for i, u in enumerate(a):
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbor {u} of vertex {v} out of range")
                if i > 0 and a[i - 1] >= u:
                    raise ValueError(f"unsorted or duplicate neighbor at vertex {v}")
                if not self.has_edge(u, v):
                    raise ValueError(f"asymmetric adjacency at vertex {v}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StaticGraph):
            return NotImplemented
        return self.weight == other.weight and self.adjacency == other.adjacency

    def __repr__(self) -> str:
        return f"StaticGraph(n={self.n}, m={self.m})"


def parse_graph(data: bytes | str) -> StaticGraph:
    """Parse the weighted adjacency format (fmt code 10, 1-indexed)."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    lines = data.splitlines()
    header = None
    header_line = 0
    body: list[tuple[int, str]] = []
    for no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if header is None:
            header = line
            header_line = no
        else:
            body.append((no, line))

    if header is None:
        raise ParseError("line 1: missing header")
    parts = header.split()
    if len(parts) != 3:
        raise ParseError(f"line {header_line}: header must be 'n m fmt'")
    try:
        n, m, fmt = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"line {header_line}: non-integer header field") from None
    if fmt != 10:
        raise ParseError(f"line {header_line}: unsupported format code {fmt}, expected 10")
    if len(body) != n:
        raise ParseError(f"line {header_line}: expected {n} vertex lines, found {len(body)}")

    weights: list[int] = []
    adjacency: list[list[int]] = []
    for v, (no, line) in enumerate(body):
        fields = line.split()
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise ParseError(f"line {no}: non-integer field") from None
        if not values:
            raise ParseError(f"line {no}: missing weight for vertex {v + 1}")
        w, nbrs = values[0], values[1:]
        if w <= 0:
            raise ParseError(f"line {no}: non-positive weight at vertex {v + 1}")
        seen: set[int] = set()
        adj: list[int] = []
        for u1 in nbrs:
            if not 1 <= u1 <= n:
                raise ParseError(f"line {no}: neighbor {u1} out of range at vertex {v + 1}")
            u = u1 - 1
            if u == v:
                raise ParseError(f"line {no}: self-loop at vertex {v + 1}")
            if u in seen:
                raise ParseError(f"line {no}: duplicate neighbor {u1} at vertex {v + 1}")
            seen.add(u)
            adj.append(u)
        weights.append(w)
        adjacency.append(sorted(adj))

    for v in range(n):
        for u in adjacency[v]:
            a = adjacency[u]
            i = bisect_left(a, v)
            if i >= len(a) or a[i] != v:
                no = body[max(u, v)][0]
                raise ParseError(f"line {no}: asymmetric adjacency at vertex {max(u, v) + 1}")
    edge_count = sum(len(a) for a in adjacency) // 2
    if edge_count != m:
        raise ParseError(f"line {header_line}: header claims {m} edges, found {edge_count}")
    return StaticGraph(weights, adjacency)


def write_graph(g: StaticGraph) -> bytes:
    """Serialize so that ``parse_graph(write_graph(g)) == g``."""
    out = [f"{g.n} {g.m} 10"]
    for v in range(g.n):
        fields = [str(g.weight[v])] + [str(u + 1) for u in g.adjacency[v]]
        out.append(" ".join(fields))
    return ("\n".join(out) + "\n").encode("ascii")


def read_solution(data: bytes | str) -> list[int]:
    """Read a solution file: one 1-indexed vertex id per line."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    out = []
    for no, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        try:
            out.append(int(line) - 1)
        except ValueError:
            raise ParseError(f"line {no}: non-integer vertex id") from None
    return out


def write_solution(vertices: Iterable[int]) -> bytes:
    return ("\n".join(str(v + 1) for v in sorted(vertices)) + "\n").encode("ascii")


class VertexStatus(IntEnum):
    ACTIVE = 0
    INCLUDED = 1
    EXCLUDED = 2
    FOLDED = 3


# journal op tags
_OP_DETACH = 0
_OP_WEIGHT = 1
_OP_EDGE_DEL = 2
_OP_EDGE_ADD = 3
_OP_NEW_VERTEX = 4


class DynamicGraph:
    """Mutable view over a StaticGraph with status flags and a mutation journal.

    Fold products get fresh ids appended after the original range. Every
    mutation is journaled, so any prefix of work can be rolled back; this
    is what lets the label generator test a rule without performing it.
    """

    def __init__(self, base: StaticGraph):
        self.original_n = base.n
        self.weight: list[int] = list(base.weight)
        self.adj: list[list[int]] = [list(a) for a in base.adjacency]
        self.status: list[VertexStatus] = [VertexStatus.ACTIVE] * base.n
        self._journal: list[tuple] = []
        self._changed: set[int] = set()

    # -- queries ---------------------------------------------------------

    @property
    def n_total(self) -> int:
        return len(self.weight)

    def is_active(self, v: int) -> bool:
        return self.status[v] == VertexStatus.ACTIVE

    def active_vertices(self) -> list[int]:
        return [v for v in range(self.n_total) if self.status[v] == VertexStatus.ACTIVE]

    def active_count(self) -> int:
        return sum(1 for s in self.status if s == VertexStatus.ACTIVE)

    def neighbors(self, v: int) -> list[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def neighborhood_weight(self, v: int) -> int:
        w = self.weight
        return sum(w[u] for u in self.adj[v])

    def checksum(self) -> int:
        """Structural hash of the active subgraph (ids, weights, edges)."""
        acc = 0
        for v in range(self.n_total):
            if self.status[v] == VertexStatus.ACTIVE:
                acc = hash((acc, v, self.weight[v], tuple(self.adj[v])))
        return acc

    # -- mutation primitives ----------------------------------------------

    def _require_active(self, v: int) -> None:
        if self.status[v] != VertexStatus.ACTIVE:
            raise GraphMutationError(f"vertex {v} is not active ({self.status[v].name})")

    def _touch(self, v: int) -> None:
        self._changed.add(v)

    def set_weight(self, v: int, w: int) -> None:
        self._require_active(v)
        if w <= 0:
            raise GraphMutationError(f"weight of vertex {v} would become {w}")
        self._journal.append((_OP_WEIGHT, v, self.weight[v]))
        self.weight[v] = w
        self._touch(v)

    def remove_edge(self, u: int, v: int) -> None:
        self._require_active(u)
        self._require_active(v)
        if not self.has_edge(u, v):
            raise GraphMutationError(f"edge ({u},{v}) does not exist")
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        self._journal.append((_OP_EDGE_DEL, u, v))
        self._touch(u)
        self._touch(v)

    def add_edge(self, u: int, v: int) -> None:
        self._require_active(u)
        self._require_active(v)
        if u == v or self.has_edge(u, v):
            raise GraphMutationError(f"cannot add edge ({u},{v})")
        insort(self.adj[u], v)
        insort(self.adj[v], u)
        self._journal.append((_OP_EDGE_ADD, u, v))
        self._touch(u)
        self._touch(v)

    def detach(self, v: int, new_status: VertexStatus) -> None:
        """Remove v from the active graph, recording its adjacency."""
        self._require_active(v)
        if new_status == VertexStatus.ACTIVE:
            raise GraphMutationError("detach requires a non-active status")
        nbrs = list(self.adj[v])
        for u in nbrs:
            self.adj[u].remove(v)
            self._touch(u)
        self._journal.append((_OP_DETACH, v, nbrs))
        self.adj[v] = []
        self.status[v] = new_status

    def include_vertex(self, v: int) -> None:
        self.detach(v, VertexStatus.INCLUDED)

    def exclude_vertex(self, v: int) -> None:
        self.detach(v, VertexStatus.EXCLUDED)

    def fold_out_vertex(self, v: int) -> None:
        self.detach(v, VertexStatus.FOLDED)

    def add_fold_vertex(self, weight: int, neighbors: Iterable[int]) -> int:
        """Allocate a fresh vertex id above the original range."""
        if weight <= 0:
            raise GraphMutationError(f"fold product weight would be {weight}")
        nbrs = sorted(set(neighbors))
        v = self.n_total
        for u in nbrs:
            self._require_active(u)
        self.weight.append(weight)
        self.adj.append(list(nbrs))
        self.status.append(VertexStatus.ACTIVE)
        for u in nbrs:
            insort(self.adj[u], v)
            self._touch(u)
        self._journal.append((_OP_NEW_VERTEX, v))
        self._touch(v)
        return v

    # -- checkpoint / rollback ---------------------------------------------

    def checkpoint(self) -> int:
        return len(self._journal)

    def rollback(self, mark: int) -> None:
        while len(self._journal) > mark:
            entry = self._journal.pop()
            op = entry[0]
            if op == _OP_DETACH:
                _, v, nbrs = entry
                self.status[v] = VertexStatus.ACTIVE
                self.adj[v] = list(nbrs)
                for u in nbrs:
                    insort(self.adj[u], v)
            elif op == _OP_WEIGHT:
                _, v, old = entry
                self.weight[v] = old
            elif op == _OP_EDGE_DEL:
                _, u, v = entry
                insort(self.adj[u], v)
                insort(self.adj[v], u)
            elif op == _OP_EDGE_ADD:
                _, u, v = entry
                self.adj[u].remove(v)
                self.adj[v].remove(u)
            elif op == _OP_NEW_VERTEX:
                _, v = entry
                assert v == self.n_total - 1
                for u in self.adj[v]:
                    self.adj[u].remove(v)
                self.weight.pop()
                self.adj.pop()
                self.status.pop()

    def pop_changed(self) -> set[int]:
        """Drain the set of vertices whose neighborhood or weight changed."""
        out = {v for v in self._changed if self.is_active(v)}
        self._changed.clear()
        return out

    # -- snapshots ---------------------------------------------------------

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[StaticGraph, dict[int, int]]:
        """Active-induced subgraph plus an old->new id mapping."""
        vs = sorted(set(vertices))
        for v in vs:
            self._require_active(v)
        mapping = {v: i for i, v in enumerate(vs)}
        weights = [self.weight[v] for v in vs]
        adjacency = [[mapping[u] for u in self.adj[v] if u in mapping] for v in vs]
        return StaticGraph(weights, adjacency), mapping

    def active_snapshot(self) -> tuple[StaticGraph, list[int]]:
        """Immutable snapshot of the active subgraph; returns (graph, new->old ids)."""
        vs = self.active_vertices()
        sub, mapping = self.induced_subgraph(vs)
        return sub, vs

    def validate_active(self) -> None:
        """Check StaticGraph invariants on the active-induced subgraph."""
        for v in range(self.n_total):
            if self.status[v] != VertexStatus.ACTIVE:
                if self.adj[v]:
                    raise ValueError(f"non-active vertex {v} still has adjacency")
                continue
            if self.weight[v] <= 0:
                raise ValueError(f"non-positive weight at active vertex {v}")
            a = self.adj[v]
            for i, u in enumerate(a):
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if i > 0 and a[i - 1] >= u:
                    raise ValueError(f"unsorted or duplicate neighbor at vertex {v}")
                if not self.is_active(u):
                    raise ValueError(f"active vertex {v} adjacent to non-active {u}")
                if not self.has_edge(u, v):
                    raise ValueError(f"asymmetric adjacency at vertex {v}")
