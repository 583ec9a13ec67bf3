"""Comparison baselines: uniformly sampled centers and greedy hitting of fixed balls."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .engine import HittingState, greedy_phase
from .graph import Graph, PartialDijkstra


@dataclass(frozen=True)
class BaselineStats:
    method: str
    centers: tuple
    ball_sizes: tuple

    @property
    def total_size(self) -> int:
        return sum(self.ball_sizes)

    @property
    def xlogx_cost(self) -> float:
        return math.fsum(s * math.log2(s) for s in self.ball_sizes if s)

    @property
    def mean_size(self) -> float:
        return self.total_size / max(1, len(self.ball_sizes))


def run_baseline_random(g: Graph, r: int, seed: int) -> BaselineStats:
    """r distinct uniform centers; each ball grows until it settles one."""
    if not 1 <= r <= g.n:
        raise ValueError(f"r must lie in [1, {g.n}], got {r}")
    centers = sorted(random.Random(seed).sample(range(g.n), r))
    is_center = set(centers)
    sizes = []
    for v in range(g.n):
        walk = PartialDijkstra(g, v)
        while (item := walk.step()) is not None and item[0] not in is_center:
            pass
        sizes.append(len(walk.settled))
    return BaselineStats("random", tuple(centers), tuple(sizes))


def run_baseline_folklore(g: Graph, r: int) -> BaselineStats:
    """Fix every ball to its ceil(n/r) nearest vertices, then greedy until all are hit."""
    if not 1 <= r <= g.n:
        raise ValueError(f"r must lie in [1, {g.n}], got {r}")
    size = -(-g.n // r)
    balls = []
    for v in range(g.n):
        walk = PartialDijkstra(g, v)
        while len(walk.settled) < size and walk.step() is not None:
            pass
        balls.append([u for u, _ in walk.settled])
    state = HittingState.from_balls(g.n, balls)
    centers = greedy_phase(state, 0)
    return BaselineStats("folklore", tuple(centers), tuple(len(b) for b in balls))
