"""Binary oracle snapshots.

All integers little-endian, in this order:

    magic      4 bytes  b"HBTZ"
    version    u16      (1)
    reserved   u16      (0)
    k, n, m    u32 x 3
    edges      m x (u: u32, v: u32, w: i64)        graph the oracle was built on
    component  n x u32   component ids 0 .. P-1
    levels     k x (count: u32, members: count x u32)
    sizes      P x k x u64   per component, sum over its v of |B_i(v)|
    budgets    P x k x u32   per component, center budget used at level i
    pivots     k x n x (vertex: i32, dist: i64)    vertex -1 = no pivot
    bunches    n x (count: u32, count x (w: u32, level: u32, dist: i64))
               each vertex's entries sorted by (dist, w)

Weights must be integers fitting in i64.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .graph import Graph
from .tz import Oracle

MAGIC = b"HBTZ"
VERSION = 1

_EDGE = np.dtype([("u", "<u4"), ("v", "<u4"), ("w", "<i8")])
_PIVOT = np.dtype([("vertex", "<i4"), ("dist", "<i8")])
_ENTRY = np.dtype([("w", "<u4"), ("level", "<u4"), ("dist", "<i8")])
_HEADER = np.dtype([("magic", "S4"), ("version", "<u2"), ("reserved", "<u2"),
                    ("k", "<u4"), ("n", "<u4"), ("m", "<u4")])


class SnapshotError(ValueError):
    pass


def dumps(o: Oracle) -> bytes:
    g = o.graph
    if g is None:
        raise SnapshotError("oracle carries no graph")
    parts = [np.array([(MAGIC, VERSION, 0, o.k, o.n, g.m)], _HEADER).tobytes()]
    parts.append(np.array(list(g.edges), _EDGE).tobytes() if g.m else b"")
    parts.append(np.asarray(o.component, "<u4").tobytes())
    for level in o.levels:
        parts.append(np.array([len(level), *level], "<u4").tobytes())
    parts.append(np.asarray(o.level_sizes, "<u8").reshape(-1).tobytes())
    parts.append(np.asarray(o.budgets, "<u4").reshape(-1).tobytes())
    for piv in o.pivots:
        rows = [(-1, 0) if p is None else p for p in piv]
        parts.append(np.array(rows, _PIVOT).tobytes())
    for table in o.bunches:
        entries = sorted(((d, w, lvl) for w, (lvl, d) in table.items()))
        parts.append(np.array([len(entries)], "<u4").tobytes())
        parts.append(np.array([(w, lvl, d) for d, w, lvl in entries], _ENTRY).tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, dtype, count: int) -> np.ndarray:
        dtype = np.dtype(dtype)
        end = self.pos + dtype.itemsize * count
        if end > len(self.data):
            raise SnapshotError("snapshot truncated")
        out = np.frombuffer(self.data, dtype, count, self.pos)
        self.pos = end
        return out


def loads(data: bytes) -> Oracle:
    rd = _Reader(data)
    head = rd.take(_HEADER, 1)[0]
    if bytes(head["magic"]) != MAGIC:
        raise SnapshotError("not an oracle snapshot (bad magic)")
    if int(head["version"]) != VERSION:
        raise SnapshotError(f"unsupported snapshot version {int(head['version'])}")
    k, n, m = int(head["k"]), int(head["n"]), int(head["m"])
    edges = rd.take(_EDGE, m)
    g = Graph(n, tuple((int(e["u"]), int(e["v"]), int(e["w"])) for e in edges))
    component = tuple(int(c) for c in rd.take("<u4", n))
    levels = []
    for _ in range(k):
        count = int(rd.take("<u4", 1)[0])
        levels.append(tuple(int(x) for x in rd.take("<u4", count)))
    count = max(component) + 1 if n else 0
    if sorted(set(component)) != list(range(count)):
        raise SnapshotError("component ids must be 0 .. P-1")
    sizes = tuple(tuple(int(x) for x in row) for row in rd.take("<u8", count * k).reshape(count, k))
    budgets = tuple(tuple(int(x) for x in row) for row in rd.take("<u4", count * k).reshape(count, k))
    pivots = []
    for _ in range(k):
        rows = rd.take(_PIVOT, n)
        pivots.append(tuple(None if int(p["vertex"]) < 0 else (int(p["vertex"]), int(p["dist"])) for p in rows))
    bunches = []
    for _ in range(n):
        count = int(rd.take("<u4", 1)[0])
        bunches.append({int(e["w"]): (int(e["level"]), int(e["dist"])) for e in rd.take(_ENTRY, count)})
    if rd.pos != len(data):
        raise SnapshotError(f"{len(data) - rd.pos} trailing bytes after snapshot")
    return Oracle(k, n, tuple(levels), tuple(pivots), tuple(bunches), component, sizes, budgets, g, 0)


def save_oracle(path, o: Oracle) -> None:
    Path(path).write_bytes(dumps(o))


def load_oracle(path) -> Oracle:
    return loads(Path(path).read_bytes())
