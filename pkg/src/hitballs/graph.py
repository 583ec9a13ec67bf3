"""Undirected weighted graphs, the edge-list format, degree splitting and Dijkstra.

Weights are only ever added and compared inside the algorithms here, so any
totally ordered additive type works. ``CountingWeight`` enforces that.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional


class GraphFormatError(ValueError):
    """Malformed edge-list document."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class GraphValidationError(ValueError):
    """Well-formed document describing an invalid graph."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple
    zero: Any = 0
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphValidationError("vertex count must be non-negative")
        adj = [[] for _ in range(self.n)]
        for eid, (u, v, w) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(f"edge {eid} ({u}, {v}) has an endpoint out of range")
            if w < self.zero:
                raise GraphValidationError(f"edge {eid} ({u}, {v}) has negative weight {w}")
            adj[u].append((v, w, eid))
            if u != v:
                adj[v].append((u, w, eid))
        object.__setattr__(self, "adj", tuple(tuple(a) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, zero: Any = 0) -> "Graph":
        return cls(n, tuple((int(u), int(v), w) for u, v, w in edges), zero)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)


def parse_graph(text: str) -> Graph:
    header = None
    edges = []
    expected = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphFormatError("header must be 'n m'", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise GraphFormatError(f"non-integer header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise GraphFormatError("negative count in header", lineno)
            expected = header[1]
            continue
        if len(parts) != 3:
            raise GraphFormatError(f"edge line must be 'u v w', got {line!r}", lineno)
        try:
            u, v, w = (int(x) for x in parts)
        except ValueError:
            raise GraphFormatError(f"non-integer field in {line!r}", lineno) from None
        if len(edges) == expected:
            raise GraphFormatError(f"more than {expected} edge lines", lineno)
        if w < 0:
            raise GraphValidationError(f"line {lineno}: negative weight {w}")
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise GraphValidationError(f"line {lineno}: endpoint out of range [0, {header[0]})")
        edges.append((u, v, w))
    if header is None:
        raise GraphFormatError("empty document: missing 'n m' header")
    if len(edges) != expected:
        raise GraphFormatError(f"expected {expected} edge lines, found {len(edges)}")
    return Graph(header[0], tuple(edges))


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    try:
        return parse_graph(Path(path).read_text())
    except (GraphFormatError, GraphValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def write_graph(path, g: Graph) -> None:
    Path(path).write_text(format_graph(g))


def components(g: Graph) -> list[int]:
    """Component id per vertex, numbered by smallest member."""
    comp = [-1] * g.n
    c = 0
    for s in range(g.n):
        if comp[s] >= 0:
            continue
        comp[s] = c
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u, _, _ in g.adj[v]:
                if comp[u] < 0:
                    comp[u] = c
                    queue.append(u)
        c += 1
    return comp


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or max(components(g)) == 0


def split_degrees(g: Graph, cap: int) -> tuple[Graph, list[int]]:
    """Split every vertex of degree > ``cap`` into a zero-weight path of copies.

    Copy 0 keeps the original id; extra copies are appended after ``g.n``.
    Incident edges are dealt round-robin, at most ``cap - 2`` per copy, so each
    copy has degree <= cap. Self-loops are dropped. Returns the new graph and
    the representative of every original vertex.
    """
    if cap < 3:
        raise ValueError(f"degree cap must be >= 3, got {cap}")
    has_loops = any(u == v for u, v, _ in g.edges)
    if not has_loops and g.max_degree() <= cap:
        return g, list(range(g.n))

    incident = [[] for _ in range(g.n)]
    for eid, (u, v, _) in enumerate(g.edges):
        if u != v:
            incident[u].append(eid)
            incident[v].append(eid)

    next_id = g.n
    slot = {}
    chain = []
    for v in range(g.n):
        deg = len(incident[v])
        if deg <= cap:
            ids = [v]
        else:
            count = -(-deg // (cap - 2))
            ids = [v] + list(range(next_id, next_id + count - 1))
            next_id += count - 1
            chain += [(ids[t], ids[t + 1], g.zero) for t in range(count - 1)]
        for t, eid in enumerate(incident[v]):
            slot[(v, eid)] = ids[t % len(ids)]

    edges = []
    for eid, (u, v, w) in enumerate(g.edges):
        if u != v:
            edges.append((slot[(u, eid)], slot[(v, eid)], w))
    return Graph(next_id, tuple(edges + chain), g.zero), list(range(g.n))


def make_constant_degree(g: Graph) -> tuple[Graph, list[int]]:
    return split_degrees(g, 3)


@dataclass(frozen=True)
class DistanceTable:
    source: int
    dist: tuple
    settle_order: tuple

    def reachable(self, v: int) -> bool:
        return self.dist[v] is not None


def dijkstra(g: Graph, s: int) -> DistanceTable:
    if not 0 <= s < g.n:
        raise ValueError(f"source {s} out of range [0, {g.n})")
    dist: list = [None] * g.n
    done = [False] * g.n
    dist[s] = g.zero
    heap = [(g.zero, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for u, w, _ in g.adj[v]:
            if done[u]:
                continue
            nd = d + w
            if dist[u] is None or nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    # zero-weight edges can settle an equal-distance vertex with a larger id first
    order = sorted((v for v in range(g.n) if done[v]), key=lambda v: (dist[v], v))
    return DistanceTable(s, tuple(dist), tuple(order))


class PartialDijkstra:
    """Dijkstra from one source, advanced one settled vertex at a time.

    Vertices come out in (distance, vertex-id) order. To honour the id
    tie-break across zero-weight edges, a whole distance class is settled
    internally before its members are released in id order.
    """

    def __init__(self, g: Graph, source: int):
        if not 0 <= source < g.n:
            raise ValueError(f"source {source} out of range [0, {g.n})")
        self.graph = g
        self.source = source
        self.settled: list[tuple[int, Any]] = []
        self._heap = [(g.zero, source)]
        self._best = {source: g.zero}
        self._done: set[int] = set()
        self._pending: deque = deque()
        self.pushes = 1
        self.pops = 0

    @property
    def exhausted(self) -> bool:
        return not self._pending and not self._fill()

    def step(self) -> Optional[tuple[int, Any]]:
        if not self._pending and not self._fill():
            return None
        item = self._pending.popleft()
        self.settled.append(item)
        return item

    def _fill(self) -> bool:
        heap, done, best = self._heap, self._done, self._best
        adj = self.graph.adj
        while heap and heap[0][1] in done:
            heapq.heappop(heap)
            self.pops += 1
        if not heap:
            return False
        d0 = heap[0][0]
        batch = []
        while heap and not d0 < heap[0][0]:
            d, v = heapq.heappop(heap)
            self.pops += 1
            if v in done:
                continue
            done.add(v)
            batch.append((v, d))
            for u, w, _ in adj[v]:
                if u in done:
                    continue
                nd = d + w
                cur = best.get(u)
                if cur is None or nd < cur:
                    best[u] = nd
                    heapq.heappush(heap, (nd, u))
                    self.pushes += 1
        batch.sort(key=lambda item: item[0])
        self._pending.extend(batch)
        return True


def partial_step(state: PartialDijkstra) -> Optional[tuple[int, Any]]:
    return state.step()


class CountingWeight:
    """Weight wrapper that only supports addition and comparison.

    Any other arithmetic, conversion or hashing raises ``TypeError``; the
    class-level counters record how many additions and comparisons ran.
    """

    __slots__ = ("value",)
    additions = 0
    comparisons = 0

    def __init__(self, value):
        self.value = value

    @classmethod
    def reset(cls) -> None:
        cls.additions = 0
        cls.comparisons = 0

    def __add__(self, other):
        if not isinstance(other, CountingWeight):
            return NotImplemented
        CountingWeight.additions += 1
        return CountingWeight(self.value + other.value)

    def _cmp(self, other):
        if not isinstance(other, CountingWeight):
            raise TypeError("CountingWeight only compares with CountingWeight")
        CountingWeight.comparisons += 1
        return self.value, other.value

    def __lt__(self, other):
        a, b = self._cmp(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp(other)
        return a >= b

    def __eq__(self, other):
        if not isinstance(other, CountingWeight):
            return NotImplemented
        a, b = self._cmp(other)
        return a == b

    __hash__ = None

    def _forbidden(self, *args):
        raise TypeError("only addition and comparison are allowed on weights")

    __sub__ = __rsub__ = __mul__ = __rmul__ = __truediv__ = __rtruediv__ = _forbidden
    __floordiv__ = __mod__ = __pow__ = __neg__ = __abs__ = _forbidden
    __int__ = __float__ = __index__ = __bool__ = _forbidden

    def __repr__(self):
        return f"CountingWeight({self.value!r})"


def instrumented(g: Graph) -> Graph:
    """Copy of ``g`` whose weights are ``CountingWeight``."""
    return Graph(
        g.n,
        tuple((u, v, CountingWeight(w)) for u, v, w in g.edges),
        CountingWeight(g.zero),
    )


def plain_distances(table: DistanceTable) -> list:
    return [None if d is None else getattr(d, "value", d) for d in table.dist]


def all_pairs(g: Graph) -> list[tuple]:
    return [dijkstra(g, s).dist for s in range(g.n)]


def settle_prefix(table: DistanceTable, length: int) -> list[tuple[int, Any]]:
    return [(v, table.dist[v]) for v in table.settle_order[:length]]

