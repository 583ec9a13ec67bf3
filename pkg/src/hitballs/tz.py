"""Deterministic Thorup-Zwick approximate distance oracle.

Level sets V = A_0 >= A_1 >= ... >= A_{k-1} are chosen by the hitting engine
(p = 1, budget ceil(|A_i| / n^(1/k))). Bunches grow in lockstep: the j+1-th
nearest level member of every vertex comes out of one Dijkstra run from a
super-source on an auxiliary graph, restricted to the vertices whose bunch
is still unhit. Queries walk the pivots and answer within stretch 2k - 1.
"""
from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Optional

from .engine import CenterSelection, ContractViolation, select_centers
from .graph import Graph, components, dijkstra


def nearest_in_set(g: Graph, members) -> list[Optional[tuple[int, Any]]]:
    """Nearest member of ``members`` for every vertex, ties to the smaller id.

    Multi-source Dijkstra keyed by (distance, member id). Vertices with no
    member in their component map to None.
    """
    members = sorted(set(members))
    if not members:
        raise ValueError("member set must be non-empty")
    best = {a: (g.zero, a) for a in members}
    heap = [(g.zero, a, a) for a in members]
    out: list = [None] * g.n
    while heap:
        d, a, v = heapq.heappop(heap)
        if out[v] is not None:
            continue
        out[v] = (a, d)
        for u, w, _ in g.adj[v]:
            if out[u] is not None:
                continue
            key = (d + w, a)
            cur = best.get(u)
            if cur is None or key < cur:
                best[u] = key
                heapq.heappush(heap, (key[0], a, u))
    return out


def _extend(g: Graph, bunches, vertices, active) -> dict[int, tuple[int, Any]]:
    """Next nearest level member for each vertex in ``vertices``.

    ``active[v]`` marks the vertices being grown (all of ``vertices``); every
    other vertex only contributes super-source edges. Returns v -> (w, d(v, w))
    for the vertices that still have a member left to add.
    """
    sets: dict[int, set] = {}

    def member_set(v):
        s = sets.get(v)
        if s is None:
            s = sets[v] = {w for w, _ in bunches[v]}
        return s

    best: dict[int, tuple] = {}
    kept = defaultdict(list)
    for v in vertices:
        sv = member_set(v)
        for u, length, _ in g.adj[v]:
            if u == v:
                continue
            su = member_set(u)
            if active[u] and su == sv:
                kept[u].append((v, length))
                continue
            for w, dwu in bunches[u]:
                if w not in sv:
                    break
            else:
                if not active[u]:
                    raise ContractViolation(
                        f"hit vertex {u} has no bunch member outside the bunch of unhit vertex {v}"
                    )
                continue
            key = (dwu + length, w)
            cur = best.get(v)
            if cur is None or key < cur:
                best[v] = key

    heap = [(d, w, v) for v, (d, w) in best.items()]
    heapq.heapify(heap)
    found: dict[int, tuple[int, Any]] = {}
    while heap:
        d, w, v = heapq.heappop(heap)
        if v in found:
            continue
        found[v] = (w, d)
        for x, length in kept[v]:
            if x in found:
                continue
            key = (d + length, w)
            cur = best.get(x)
            if cur is None or key < cur:
                best[x] = key
                heapq.heappush(heap, (key[0], w, x))
    return found


@dataclass
class LevelState:
    """Ordered bunches S(v) over one level set; ``full`` marks exhausted bunches."""

    level: int
    members: tuple
    bunches: list
    hit: list
    full: list = None
    centers: frozenset = frozenset()

    def __post_init__(self):
        if self.full is None:
            self.full = [False] * len(self.bunches)

    @classmethod
    def initial(cls, g: Graph, members, level: int = 0) -> "LevelState":
        members = tuple(sorted(set(members)))
        pivots = nearest_in_set(g, members)
        bunches = [[p] if p is not None else [] for p in pivots]
        return cls(level, members, bunches, [False] * g.n, [p is None for p in pivots])


def _check_sizes(state: LevelState, vertices, j: int) -> None:
    for v in vertices:
        if len(state.bunches[v]) != j:
            raise ContractViolation(f"bunch of vertex {v} has size {len(state.bunches[v])}, expected {j}")


def _apply(g: Graph, state: LevelState, vertices, found, hit) -> LevelState:
    bunches = [list(b) for b in state.bunches]
    full = list(state.full)
    for v in vertices:
        item = found.get(v)
        if item is None:
            full[v] = True
        else:
            bunches[v].append(item)
    return LevelState(state.level, state.members, bunches, hit, full, state.centers)


def grow_all_step(g: Graph, state: LevelState, j: int) -> LevelState:
    """Extend every bunch from its j nearest level members to its j + 1 nearest."""
    if j < 1:
        raise ValueError("j must be >= 1")
    vertices = [v for v in range(g.n) if not state.full[v]]
    _check_sizes(state, vertices, j)
    active = [not f for f in state.full]
    found = _extend(g, state.bunches, vertices, active)
    return _apply(g, state, vertices, found, [False] * g.n)


def grow_unhit_step(g: Graph, state: LevelState, j: int) -> LevelState:
    """Same as ``grow_all_step`` but only unhit bunches grow.

    Hit bunches may be shorter than j; each must contain a center, which is
    what lets the auxiliary graph skip hit vertices entirely.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    vertices = [v for v in range(g.n) if not state.hit[v] and not state.full[v]]
    _check_sizes(state, vertices, j)
    for v in range(g.n):
        if state.hit[v] and len(state.bunches[v]) > j:
            raise ContractViolation(f"hit bunch of vertex {v} is longer than j = {j}")
    if state.centers:
        for v in range(g.n):
            has_center = any(w in state.centers for w, _ in state.bunches[v])
            if has_center != bool(state.hit[v]) and not state.full[v]:
                raise ContractViolation(f"hit flag of vertex {v} disagrees with its bunch")
    active = [False] * g.n
    for v in vertices:
        active[v] = True
    found = _extend(g, state.bunches, vertices, active)
    return _apply(g, state, vertices, found, list(state.hit))


class _LevelBalls:
    """Engine-facing ball system over one level set; grows only in batches."""

    exhaustible = True

    def __init__(self, g: Graph, members: tuple, pivots):
        self.graph = g
        self.members = members
        self.index = {a: t for t, a in enumerate(members)}
        self.universe_size = len(members)
        self.ball_count = g.n
        self.pivots = pivots
        self.bunches: list[list] = [[] for _ in range(g.n)]
        self.batches = 0

    def grow(self, ball: int):
        raise TypeError("level bunches grow in batches only; use grow_batch")

    def grow_batch(self, balls):
        vertices = [int(v) for v in balls]
        sizes = {len(self.bunches[v]) for v in vertices}
        if len(sizes) != 1:
            raise ContractViolation(f"unhit bunches must share one size, got {sorted(sizes)}")
        self.batches += 1
        if sizes.pop() == 0:
            found = {v: self.pivots[v] for v in vertices if self.pivots[v] is not None}
        else:
            active = [False] * self.graph.n
            for v in vertices:
                active[v] = True
            found = _extend(self.graph, self.bunches, vertices, active)
        out = []
        for v in vertices:
            item = found.get(v)
            if item is None:
                out.append(None)
            else:
                self.bunches[v].append(item)
                out.append(self.index[item[0]])
        return out


def level_budget(n: int, k: int, size: int) -> int:
    """ceil(size / n^(1/k)), at least 1, computed exactly on integers."""
    if size < 1:
        return 1
    r = max(1, math.ceil(size / n ** (1 / k)))
    while r > 1 and (r - 1) ** k * n >= size**k:
        r -= 1
    while r**k * n < size**k:
        r += 1
    return r


def _check_separated(members, pivots) -> None:
    for a in members:
        if pivots[a][0] != a:
            raise ValueError(
                f"level members {pivots[a][0]} and {a} are at distance zero; "
                "bunch growth needs distinct level members at positive distance"
            )


@dataclass
class LevelBuild:
    level: int
    members: tuple
    next_members: tuple
    bunches: list
    pivots: list
    budget: int
    selection: CenterSelection | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.bunches)


def build_level(g: Graph, i: int, members, k: int, n: int | None = None) -> LevelBuild:
    members = tuple(sorted(set(members)))
    if not members:
        raise ValueError("level set must be non-empty")
    n = g.n if n is None else n
    pivots = nearest_in_set(g, members)
    _check_separated(members, pivots)
    r = level_budget(n, k, len(members))
    system = _LevelBalls(g, members, pivots)
    sel = select_centers(system, r, 1)
    nxt = tuple(sorted(members[c] for c in sel.centers))
    return LevelBuild(i, members, nxt, system.bunches, pivots, r, sel)


def _last_level(g: Graph, i: int, members: tuple) -> LevelBuild:
    pivots = nearest_in_set(g, members)
    bunches: list[list] = [[] for _ in range(g.n)]
    for a in members:
        table = dijkstra(g, a)
        for v in table.settle_order:
            bunches[v].append((a, table.dist[v]))
    for b in bunches:
        b.sort(key=lambda item: (item[1], item[0]))
    return LevelBuild(i, members, (), bunches, pivots, len(members))


@dataclass(frozen=True)
class Oracle:
    """Merged bunch tables, pivots and per-component level statistics.

    ``level_sizes[c][i]`` is the sum of |B_i(v)| over the vertices of
    component c and ``budgets[c][i]`` the center budget that component used
    at level i; components are numbered as in ``graph.components``.
    """

    k: int
    n: int
    levels: tuple
    pivots: tuple
    bunches: tuple
    component: tuple
    level_sizes: tuple
    budgets: tuple
    graph: Graph | None = field(default=None, compare=False, repr=False)
    zero: Any = 0

    @property
    def level_totals(self) -> tuple:
        """Sum over all vertices of |B_i(v)|, per level."""
        return tuple(sum(part[i] for part in self.level_sizes) for i in range(self.k))

    @property
    def total_size(self) -> int:
        """Sum over levels and vertices of |B_i(v)|."""
        return sum(sum(part) for part in self.level_sizes)

    @property
    def stored_pairs(self) -> int:
        return sum(len(b) for b in self.bunches)

    def bunch(self, v: int) -> dict:
        return self.bunches[v]


def _split_components(g: Graph, comp: list[int]) -> list[tuple[list[int], Graph]]:
    """Induced subgraph of every component; local ids keep the global order."""
    verts: dict[int, list[int]] = defaultdict(list)
    for v, c in enumerate(comp):
        verts[c].append(v)
    if len(verts) == 1:
        return [(verts[0], g)]
    local = {}
    for members in verts.values():
        for t, v in enumerate(members):
            local[v] = t
    edges: dict[int, list] = defaultdict(list)
    for u, v, w in g.edges:
        edges[comp[u]].append((local[u], local[v], w))
    return [(verts[c], Graph(len(verts[c]), tuple(edges[c]), g.zero)) for c in sorted(verts)]


def _build_levels(g: Graph, k: int) -> list[LevelBuild]:
    members = tuple(range(g.n))
    builds = []
    for i in range(k - 1):
        lb = build_level(g, i, members, k)
        builds.append(lb)
        members = lb.next_members
    builds.append(_last_level(g, k - 1, members))
    return builds


def build_oracle(g: Graph, k: int) -> Oracle:
    """Oracle of stretch 2k - 1; each connected component is built on its own."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if g.n == 0:
        raise ValueError("graph has no vertices")
    comp = components(g)
    levels = [[] for _ in range(k)]
    pivots = [[None] * g.n for _ in range(k)]
    merged: list[dict] = [dict() for _ in range(g.n)]
    sizes, budgets = [], []
    for verts, sub in _split_components(g, comp):
        builds = _build_levels(sub, k)
        for lb in builds:
            levels[lb.level].extend(verts[a] for a in lb.members)
            for t, piv in enumerate(lb.pivots):
                pivots[lb.level][verts[t]] = (verts[piv[0]], piv[1])
            for t, bunch in enumerate(lb.bunches):
                table = merged[verts[t]]
                for w, d in bunch:
                    if verts[w] not in table:
                        table[verts[w]] = (lb.level, d)
        sizes.append(tuple(lb.size for lb in builds))
        budgets.append(tuple(lb.budget for lb in builds))
    return Oracle(
        k=k,
        n=g.n,
        levels=tuple(tuple(sorted(a)) for a in levels),
        pivots=tuple(tuple(p) for p in pivots),
        bunches=tuple(merged),
        component=tuple(comp),
        level_sizes=tuple(sizes),
        budgets=tuple(budgets),
        graph=g,
        zero=g.zero,
    )


def query(o: Oracle, u: int, v: int):
    """Estimated distance within [d(u, v), (2k - 1) d(u, v)]; None if unreachable."""
    for x in (u, v):
        if not 0 <= x < o.n:
            raise ValueError(f"vertex {x} out of range [0, {o.n})")
    if o.component[u] != o.component[v]:
        return None
    w, du, i = u, o.zero, 0
    while w not in o.bunches[v]:
        i += 1
        if i >= o.k:
            raise RuntimeError(f"query ({u}, {v}) did not terminate within k levels")
        u, v = v, u
        w, du = o.pivots[i][u]
    return du + o.bunches[v][w][1]


def oracle_violations(o: Oracle) -> list[str]:
    """Level budgets, per-level sizes and the total size against their bounds.

    Checked per connected component, with that component's vertex count as n;
    for a connected graph these are the global statements.
    """
    out = []
    k = o.k
    counts = defaultdict(int)
    for c in o.component:
        counts[c] += 1
    members = [defaultdict(int) for _ in range(k)]
    for i, level in enumerate(o.levels):
        for a in level:
            members[i][o.component[a]] += 1
    for c in sorted(counts):
        n, tag = counts[c], f"component {c}: " if len(counts) > 1 else ""
        sizes, budgets = o.level_sizes[c], o.budgets[c]
        for i in range(k - 1):
            a_i, a_next, r = members[i][c], members[i + 1][c], budgets[i]
            if r != level_budget(n, k, a_i):
                out.append(f"{tag}level {i}: budget {r} != ceil(|A_i| n^(-1/k))")
            if a_next > r:
                out.append(f"{tag}level {i}: |A_{i + 1}| = {a_next} > budget {r}")
            if sizes[i] * r > 16 * n * a_i:
                out.append(f"{tag}level {i}: size {sizes[i]} > 16 n |A_i| / r")
        total = sum(sizes)
        if total**k > (16 * k + 1) ** k * n ** (k + 1):
            out.append(f"{tag}total size {total} > (16k + 1) n^(1 + 1/k)")
    return out


def stretch_violations(o: Oracle, pairs=None, g: Graph | None = None) -> list[tuple]:
    """Pairs whose estimate falls outside [d, (2k - 1) d], as (u, v, d, estimate).

    Exact distances come from full Dijkstras on ``g`` (default: the graph the
    oracle carries). ``pairs`` defaults to all ordered pairs.
    """
    g = g if g is not None else o.graph
    if g is None:
        raise ValueError("no graph to check the oracle against")
    if g.n != o.n:
        raise ValueError(f"graph has {g.n} vertices, oracle has {o.n}")
    if pairs is None:
        pairs = ((u, v) for u in range(o.n) for v in range(o.n))
    tables: dict[int, tuple] = {}
    bad = []
    for u, v in pairs:
        dist = tables.get(u)
        if dist is None:
            dist = tables[u] = dijkstra(g, u).dist
        d = dist[v]
        try:
            est = query(o, u, v)
        except (RuntimeError, TypeError, KeyError, IndexError) as exc:
            bad.append((u, v, d, f"error: {exc}"))
            continue
        if d is None or est is None:
            if d is not est:
                bad.append((u, v, d, est))
        elif not d <= est <= (2 * o.k - 1) * d:
            bad.append((u, v, d, est))
    return bad
