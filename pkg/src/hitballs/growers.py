"""Ball systems used to exercise the engine.

``CyclicAdversary`` is the lower-bound adversary: ball i's j-th growth adds
element (i + j) mod N. ``RandomGrower`` grows every ball along its own
seeded pseudo-random order. ``SettleOrderGrower`` grows ball v in Dijkstra
settle order from v, computing each prefix only as deep as needed.
"""
from __future__ import annotations

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix

from .graph import Graph


class CyclicAdversary:
    def __init__(self, universe_size: int, ball_count: int):
        self.universe_size = universe_size
        self.ball_count = ball_count
        self.sizes = np.zeros(ball_count, np.int64)

    def grow(self, ball: int) -> int:
        self.sizes[ball] += 1
        return int((ball + self.sizes[ball]) % self.universe_size)

    def grow_batch(self, balls: np.ndarray) -> np.ndarray:
        self.sizes[balls] += 1
        return (balls + self.sizes[balls]) % self.universe_size


class RandomGrower:
    """Ball i visits perm[(a_i * j + c_i) mod N] for j = 0, 1, ... with a_i a unit mod N."""

    def __init__(self, universe_size: int, ball_count: int, seed: int):
        rng = np.random.default_rng(seed)
        n = universe_size
        self.universe_size = n
        self.ball_count = ball_count
        self.perm = rng.permutation(n)
        mult = rng.integers(1, max(n, 2), size=ball_count)
        bad = np.gcd(mult, n) != 1
        while bad.any():
            mult[bad] = rng.integers(1, max(n, 2), size=int(bad.sum()))
            bad = np.gcd(mult, n) != 1
        self.mult = mult % n if n > 1 else np.zeros(ball_count, np.int64)
        self.offset = rng.integers(0, n, size=ball_count)
        self.sizes = np.zeros(ball_count, np.int64)

    def grow(self, ball: int) -> int:
        return int(self.grow_batch(np.array([ball]))[0])

    def grow_batch(self, balls: np.ndarray) -> np.ndarray:
        pos = (self.mult[balls] * self.sizes[balls] + self.offset[balls]) % self.universe_size
        self.sizes[balls] += 1
        return self.perm[pos]


@njit(cache=True)
def _extend_rows(indptr, indices, weights, rows, targets, order, length, complete, seen, settled, best, heap):
    """Recompute the settle-order prefix of every source in ``rows`` to its target length.

    Heap keys pack (d, v) as d * n + v, so popping the minimum key yields
    (distance, id) order. Positive weights guarantee that every vertex at
    distance d is queued before any of them is popped, which makes that
    order the settle order. ``seen``/``settled`` hold per-source stamps so
    nothing is reset between sources.
    """
    n = order.shape[0]
    for t in range(len(rows)):
        src = rows[t]
        k = targets[t]
        stamp = seen[n] + 1
        seen[n] = stamp
        seen[src] = stamp
        best[src] = 0
        heap[0] = src
        size = 1
        got = 0
        while size > 0 and got < k:
            key = heap[0]
            size -= 1
            last = heap[size]
            i = 0
            while True:
                c = 2 * i + 1
                if c >= size:
                    break
                if c + 1 < size and heap[c + 1] < heap[c]:
                    c += 1
                if heap[c] >= last:
                    break
                heap[i] = heap[c]
                i = c
            heap[i] = last
            v = key % n
            if settled[v] == stamp:
                continue
            settled[v] = stamp
            d = key // n
            order[src, got] = v
            got += 1
            for e in range(indptr[v], indptr[v + 1]):
                u = indices[e]
                if settled[u] == stamp:
                    continue
                nd = d + weights[e]
                if seen[u] != stamp or nd < best[u]:
                    seen[u] = stamp
                    best[u] = nd
                    item = nd * n + u
                    i = size
                    size += 1
                    while i > 0:
                        parent = (i - 1) // 2
                        if heap[parent] <= item:
                            break
                        heap[i] = heap[parent]
                        i = parent
                    heap[i] = item
        length[src] = got
        complete[src] = got < k or k == n


def _csr(g: Graph):
    if any(w <= 0 for u, v, w in g.edges if u != v):
        raise ValueError("settle-order growth needs strictly positive weights")
    best = {}
    for u, v, w in g.edges:
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key not in best or w < best[key]:
            best[key] = w
    rows = [a for a, b in best] + [b for a, b in best]
    cols = [b for a, b in best] + [a for a, b in best]
    vals = list(best.values()) * 2
    if (sum(best.values()) + 1) * max(g.n, 1) >= 2**62:
        raise ValueError("weights too large for packed (distance, vertex) heap keys")
    mat = coo_matrix((np.array(vals, np.int64), (rows, cols)), shape=(g.n, g.n)).tocsr()
    return mat.indptr.astype(np.int64), mat.indices.astype(np.int64), mat.data.astype(np.int64)


class SettleOrders:
    """Lazily computed Dijkstra settle orders for every source of a graph.

    Row v holds the first ``length[v]`` vertices in (distance, id) order;
    a row is recomputed at least twice as deep whenever a caller needs more,
    so total work tracks the deepest request, not n^2. Shareable between
    growers on the same graph.
    """

    def __init__(self, g: Graph):
        n = g.n
        self.n = n
        self.csr = _csr(g)
        self.order = np.zeros((n, n), np.int32)
        self.length = np.zeros(n, np.int64)
        self.complete = np.zeros(n, np.bool_)
        self._seen = np.zeros(n + 1, np.int64)
        self._settled = np.zeros(n, np.int64)
        self._best = np.zeros(n, np.int64)
        self._heap = np.zeros(len(self.csr[1]) + 1, np.int64)

    def ensure(self, rows: np.ndarray, need: np.ndarray) -> None:
        short = (need > self.length[rows]) & ~self.complete[rows]
        if not short.any():
            return
        rows, need = rows[short], need[short]
        targets = np.minimum(self.n, np.maximum(np.maximum(need, 2 * self.length[rows]), 4))
        _extend_rows(*self.csr, rows.astype(np.int64), targets.astype(np.int64), self.order,
                     self.length, self.complete, self._seen, self._settled, self._best, self._heap)

    def prefix(self, v: int, length: int) -> np.ndarray:
        self.ensure(np.array([v]), np.array([length]))
        return self.order[v, : min(length, self.length[v])].astype(np.int64)


class SettleOrderGrower:
    """Ball v grows in Dijkstra settle order from v; exhausts at its component."""

    exhaustible = True

    def __init__(self, g: Graph | SettleOrders):
        self.orders = g if isinstance(g, SettleOrders) else SettleOrders(g)
        self.universe_size = self.orders.n
        self.ball_count = self.orders.n
        self.sizes = np.zeros(self.orders.n, np.int64)

    def grow(self, ball: int):
        out = int(self.grow_batch(np.array([ball]))[0])
        return None if out < 0 else out

    def grow_batch(self, balls: np.ndarray) -> np.ndarray:
        balls = np.asarray(balls, np.int64)
        s = self.sizes[balls]
        self.orders.ensure(balls, s + 1)
        ok = s < self.orders.length[balls]
        out = np.full(len(balls), -1, np.int64)
        out[ok] = self.orders.order[balls[ok], s[ok]]
        self.sizes[balls[ok]] += 1
        return out
