"""Seeded graph families for experiments. Output is a pure function of the spec."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .graph import Graph

FAMILIES = ("path", "cycle", "grid", "random-gnm", "random-geometric")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    m: int | None = None
    wmin: int = 1
    wmax: int = 1
    seed: int = 0

    def graph_id(self) -> str:
        tag = f"{self.family}-n{self.n}"
        if self.m is not None and self.family.startswith("random"):
            tag += f"-m{self.m}"
        return f"{tag}-w{self.wmin}_{self.wmax}-s{self.seed}"


def generate(spec: GeneratorSpec) -> Graph:
    if spec.family not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
    if spec.n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= spec.wmin <= spec.wmax:
        raise ValueError(f"bad weight range [{spec.wmin}, {spec.wmax}]")
    rng = random.Random(spec.seed)

    def weight():
        return rng.randint(spec.wmin, spec.wmax)

    n = spec.n
    if spec.family == "path":
        pairs = [(v, v + 1) for v in range(n - 1)]
    elif spec.family == "cycle":
        pairs = [(v, v + 1) for v in range(n - 1)]
        if n >= 3:
            pairs.append((n - 1, 0))
    elif spec.family == "grid":
        pairs = _grid_pairs(n)
    elif spec.family == "random-gnm":
        return _gnm(spec, rng, weight)
    else:
        return _geometric(spec, rng)
    return Graph.from_edges(n, [(u, v, weight()) for u, v in pairs])


def _grid_pairs(n: int) -> list[tuple[int, int]]:
    """Row-major lattice with isqrt(n) columns; a short last row if n is not square."""
    cols = max(1, math.isqrt(n))
    pairs = []
    for v in range(n):
        if (v + 1) % cols and v + 1 < n:
            pairs.append((v, v + 1))
        if v + cols < n:
            pairs.append((v, v + cols))
    return pairs


def _check_m(n: int, m: int | None) -> int:
    if m is None:
        raise ValueError("random families need m")
    if m < n - 1 or m > n * (n - 1) // 2:
        raise ValueError(f"m = {m} infeasible for a simple connected graph on {n} vertices")
    return m


def _gnm(spec: GeneratorSpec, rng: random.Random, weight) -> Graph:
    n = spec.n
    m = _check_m(n, spec.m)
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    seen = set()
    for t in range(1, n):
        u, v = order[t], order[rng.randrange(t)]
        pairs.append((u, v))
        seen.add((min(u, v), max(u, v)))
    while len(pairs) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        key = (min(u, v), max(u, v))
        if u == v or key in seen:
            continue
        seen.add(key)
        pairs.append((u, v))
    return Graph.from_edges(n, [(u, v, weight()) for u, v in pairs])


def _geometric(spec: GeneratorSpec, rng: random.Random) -> Graph:
    """Points in the unit square; Euclidean MST plus the next-shortest pairs.

    Weights are the scaled distances mapped into [wmin, wmax].
    """
    n = spec.n
    m = _check_m(n, spec.m if spec.m is not None else min(2 * n, n * (n - 1) // 2))
    pts = [(rng.random(), rng.random()) for _ in range(n)]

    def dist(a, b):
        return math.dist(pts[a], pts[b])

    in_tree = [False] * n
    best = [math.inf] * n
    parent = [-1] * n
    best[0] = 0.0
    chosen = set()
    for _ in range(n):
        v = min((x for x in range(n) if not in_tree[x]), key=lambda x: (best[x], x))
        in_tree[v] = True
        if parent[v] >= 0:
            chosen.add((min(v, parent[v]), max(v, parent[v])))
        for x in range(n):
            if not in_tree[x] and dist(v, x) < best[x]:
                best[x] = dist(v, x)
                parent[x] = v
    rest = sorted(
        ((dist(a, b), a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in chosen)
    )
    for _, a, b in rest[: m - len(chosen)]:
        chosen.add((a, b))
    span = spec.wmax - spec.wmin
    edges = [
        (a, b, spec.wmin + round(span * dist(a, b) / math.sqrt(2)))
        for a, b in sorted(chosen)
    ]
    return Graph.from_edges(n, edges)
