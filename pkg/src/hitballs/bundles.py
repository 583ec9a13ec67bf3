"""Deterministic bundle construction.

Every vertex v owns a ball grown by its own partial Dijkstra; the engine
picks the center set R. The result is R together with every ball B(v),
each a settle-order prefix from v that contains a center.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .engine import CenterSelection, select_centers
from .graph import Graph, PartialDijkstra, components, dijkstra


class DijkstraBalls:
    """Ball system whose ball v grows by one partial-Dijkstra step from v.

    A ball that has settled its whole connected component reports
    exhaustion instead of growing.
    """

    exhaustible = True

    def __init__(self, g: Graph):
        self.graph = g
        self.universe_size = g.n
        self.ball_count = g.n
        self.walks: list[PartialDijkstra | None] = [None] * g.n

    def walk(self, v: int) -> PartialDijkstra:
        w = self.walks[v]
        if w is None:
            w = self.walks[v] = PartialDijkstra(self.graph, v)
        return w

    def grow(self, v: int):
        item = self.walk(v).step()
        return None if item is None else item[0]

    def grow_batch(self, balls):
        return [self.grow(int(v)) for v in balls]

    def ball(self, v: int) -> list[tuple[int, Any]]:
        w = self.walks[v]
        return [] if w is None else list(w.settled)


@dataclass(frozen=True)
class BundleSet:
    centers: tuple
    balls: tuple
    nearest: tuple
    r: int = field(default=0, compare=False)
    p: int = field(default=2, compare=False)
    selection: CenterSelection | None = field(default=None, compare=False, repr=False)

    @property
    def n(self) -> int:
        return len(self.balls)

    @property
    def total_size(self) -> int:
        return sum(len(b) for b in self.balls)

    @property
    def xlogx_cost(self) -> float:
        return math.fsum(len(b) * math.log2(len(b)) for b in self.balls if b)

    def sssp_cost_terms(self) -> tuple[float, float]:
        """(|R| log2 n + sum |B(v)|, sum |B(v)| log2 |B(v)|)."""
        lead = len(self.centers) * math.log2(max(self.n, 2)) + self.total_size
        return lead, self.xlogx_cost


def _nearest_center(ball, centers) -> tuple | None:
    for u, d in ball:
        if u in centers:
            return (u, d)
    return None


def build_bundles(g: Graph, r: int, p: int = 2, *, instrument: bool = False,
                  check_degree: bool = True) -> BundleSet:
    """Select at most r centers and grow every vertex's ball until it holds one.

    ``g`` is expected to have maximum degree 3 (see ``make_constant_degree``).
    """
    if not 1 <= r <= g.n:
        raise ValueError(f"r must lie in [1, {g.n}], got {r}")
    if check_degree and g.max_degree() > 3:
        raise ValueError("graph has a vertex of degree > 3; run make_constant_degree first")
    parts = len(set(components(g)))
    if parts > r:
        raise ValueError(f"every one of the {parts} components needs its own center, but r = {r}")
    system = DijkstraBalls(g)
    sel = select_centers(system, r, p, instrument=instrument)
    centers = frozenset(sel.centers)
    balls = tuple(tuple(system.ball(v)) for v in range(g.n))
    nearest = tuple(_nearest_center(b, centers) for b in balls)
    return BundleSet(tuple(sel.centers), balls, nearest, r, p, sel)


def choose_r(n: int, m: int) -> int:
    """m * sqrt(log log n) / sqrt(log n), rounded and clamped to [1, n]."""
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    lg = math.log2(n)
    return max(1, min(n, round(m * math.sqrt(math.log2(lg)) / math.sqrt(lg))))


def bundle_cost_bound(n: int, r: int, p: int = 2) -> float | None:
    """2^((p+1)^2) * n * (n/r) * log2(n/r); None when n/r < 2."""
    if n < 2 * r:
        return None
    return 2 ** ((p + 1) ** 2) * n * (n / r) * math.log2(n / r)


@dataclass
class BundleVerdict:
    not_prefix: list = field(default_factory=list)
    not_hit: list = field(default_factory=list)
    wrong_nearest: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.not_prefix or self.not_hit or self.wrong_nearest)

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        for name in ("not_prefix", "not_hit", "wrong_nearest"):
            bad = getattr(self, name)
            if bad:
                parts.append(f"{name.replace('_', ' ')}: {bad[:10]}{' ...' if len(bad) > 10 else ''}")
        return "; ".join(parts)


def verify_bundles(g: Graph, bs: BundleSet) -> BundleVerdict:
    """Check every ball against a fresh full Dijkstra from its owner."""
    verdict = BundleVerdict()
    centers = frozenset(bs.centers)
    if len(bs.balls) != g.n:
        verdict.not_hit.extend(range(len(bs.balls), g.n))
    for v in range(min(g.n, len(bs.balls))):
        ball = list(bs.balls[v])
        table = dijkstra(g, v)
        expect = [(u, table.dist[u]) for u in table.settle_order[: len(ball)]]
        if ball != expect:
            verdict.not_prefix.append(v)
        first = _nearest_center(expect, centers)
        if first is None:
            verdict.not_hit.append(v)
        if tuple(bs.nearest[v] or ()) != tuple(first or ()):
            verdict.wrong_nearest.append(v)
    return verdict


def format_bundle_dump(bs: BundleSet) -> str:
    """'centers: ...' line, then 'v : c d_c : u1 d1 u2 d2 ...' per vertex."""
    lines = ["centers: " + " ".join(str(c) for c in bs.centers)]
    for v, (ball, near) in enumerate(zip(bs.balls, bs.nearest)):
        head = "- -" if near is None else f"{near[0]} {near[1]}"
        body = " ".join(f"{u} {d}" for u, d in ball)
        lines.append(f"{v} : {head} : {body}".rstrip())
    return "\n".join(lines) + "\n"


def parse_bundle_dump(text: str) -> BundleSet:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("centers:"):
        raise ValueError("bundle dump must start with a 'centers:' line")
    centers = tuple(int(x) for x in lines[0].split(":", 1)[1].split())
    balls, nearest = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = [x.strip() for x in line.split(":")]
        if len(parts) != 3 or int(parts[0]) != len(balls):
            raise ValueError(f"bad bundle line {lineno}: {line!r}")
        head = parts[1].split()
        nearest.append(None if head == ["-", "-"] else (int(head[0]), int(head[1])))
        nums = [int(x) for x in parts[2].split()]
        balls.append(tuple(zip(nums[::2], nums[1::2])))
    return BundleSet(centers, tuple(balls), tuple(nearest))
