"""Deterministic selection of centers hitting adaptively grown balls.

The engine owns the bookkeeping; how a ball grows is entirely up to the
ball system (an adversary from the engine's point of view). Growth is done
in layers: every unhit ball below the current size target receives one new
element per layer, so all unhit balls always share one size. Systems that
can extend many balls at once expose ``grow_batch``.

The greedy step uses the bucket structure: per element, the number of unhit
balls containing it, kept in doubly linked lists keyed by that count, plus a
pointer to the largest non-empty list. All counts move by +-1, so each update
is O(1); the hot loops are compiled with numba.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Protocol, Sequence

import numba as nb
import numpy as np


class ContractViolation(RuntimeError):
    """A ball system broke the growth contract."""


class AuditFailure(AssertionError):
    """Instrumented operation counts exceed their proven bound."""


class GrowableBallSystem(Protocol):
    universe_size: int
    ball_count: int

    def grow(self, ball: int) -> Optional[int]:
        """Add one new element to ``ball`` and return it (None if exhausted)."""


# ---------------------------------------------------------------------------
# bucket structure kernels

@nb.njit(cache=True)
def _unlink(j, k, nxt, prv, head):
    p = prv[j]
    q = nxt[j]
    if p >= 0:
        nxt[p] = q
    else:
        head[k] = q
    if q >= 0:
        prv[q] = p


@nb.njit(cache=True)
def _link(j, k, nxt, prv, head):
    q = head[k]
    nxt[j] = q
    prv[j] = -1
    if q >= 0:
        prv[q] = j
    head[k] = j


@nb.njit(cache=True)
def _increment(j, counts, nxt, prv, head, top, ops):
    k = counts[j]
    _unlink(j, k, nxt, prv, head)
    counts[j] = k + 1
    _link(j, k + 1, nxt, prv, head)
    if k + 1 > top[0]:
        top[0] = k + 1
    ops[0] += 1


@nb.njit(cache=True)
def _decrement(j, counts, nxt, prv, head, ops):
    k = counts[j]
    _unlink(j, k, nxt, prv, head)
    counts[j] = k - 1
    _link(j, k - 1, nxt, prv, head)
    ops[1] += 1


@nb.njit(cache=True)
def _settle_top(head, top):
    while top[0] > 0 and head[top[0]] < 0:
        top[0] -= 1
    return top[0]


@nb.njit(cache=True)
def _find_max(nxt, head, top, ops):
    ops[2] += 1
    k = _settle_top(head, top)
    if k == 0:
        return -1, 0
    # smallest id among the elements of the top bucket
    best = head[k]
    j = nxt[best]
    while j >= 0:
        if j < best:
            best = j
        j = nxt[j]
    return best, k


# The two kernels below inline the bucket moves: calling helper kernels with
# array arguments costs a reference-count round trip per call.

@nb.njit(cache=True)
def _absorb(balls, elems, universe, counts, nxt, prv, head, top, ops,
            sizes, hit, exhausted, members, bits,
            ent_ball, ent_next, elem_head, ent_top, is_center):
    newly = 0
    for t in range(balls.shape[0]):
        i = balls[t]
        e = elems[t]
        if e == -1:
            exhausted[i] = True
            continue
        if e < 0 or e >= universe:
            return t, newly
        word = e >> 6
        mask = np.uint64(1) << np.uint64(e & 63)
        if bits[i, word] & mask:
            return t, newly
        bits[i, word] |= mask
        s = sizes[i]
        members[i, s] = e
        sizes[i] = s + 1
        x = ent_top[0]
        ent_ball[x] = i
        ent_next[x] = elem_head[e]
        elem_head[e] = x
        ent_top[0] = x + 1
        if is_center[e]:
            hit[i] = True
            newly += 1
            for q in range(s):
                j = members[i, q]
                k = counts[j]
                a = prv[j]
                b = nxt[j]
                if a >= 0:
                    nxt[a] = b
                else:
                    head[k] = b
                if b >= 0:
                    prv[b] = a
                k -= 1
                counts[j] = k
                b = head[k]
                nxt[j] = b
                prv[j] = -1
                if b >= 0:
                    prv[b] = j
                head[k] = j
            ops[1] += s
        else:
            k = counts[e]
            a = prv[e]
            b = nxt[e]
            if a >= 0:
                nxt[a] = b
            else:
                head[k] = b
            if b >= 0:
                prv[b] = a
            k += 1
            counts[e] = k
            b = head[k]
            nxt[e] = b
            prv[e] = -1
            if b >= 0:
                prv[b] = e
            head[k] = e
            if k > top[0]:
                top[0] = k
            ops[0] += 1
    return -1, newly


@nb.njit(cache=True)
def _select(counts, nxt, prv, head, top, ops, sizes, hit, members,
            ent_ball, ent_next, elem_head, is_center):
    c, kmax = _find_max(nxt, head, top, ops)
    if c < 0:
        return -1, 0, 0
    is_center[c] = True
    newly = 0
    x = elem_head[c]
    while x >= 0:
        i = ent_ball[x]
        if not hit[i]:
            hit[i] = True
            newly += 1
            s = sizes[i]
            for q in range(s):
                j = members[i, q]
                k = counts[j]
                a = prv[j]
                b = nxt[j]
                if a >= 0:
                    nxt[a] = b
                else:
                    head[k] = b
                if b >= 0:
                    prv[b] = a
                k -= 1
                counts[j] = k
                b = head[k]
                nxt[j] = b
                prv[j] = -1
                if b >= 0:
                    prv[b] = j
                head[k] = j
            ops[1] += s
        x = ent_next[x]
    return c, kmax, newly


class BucketMaxTracker:
    """Per-element counts with O(1) increment, decrement and find-max.

    ``find_max`` breaks ties toward the smallest element id.
    """

    def __init__(self, size: int, max_count: int):
        self.size = size
        self.counts = np.zeros(size, np.int64)
        self.nxt = np.arange(1, size + 1, dtype=np.int64)
        self.prv = np.arange(-1, size - 1, dtype=np.int64)
        self.head = np.full(max_count + 2, -1, np.int64)
        if size:
            self.nxt[-1] = -1
            self.head[0] = 0
        self.top = np.zeros(1, np.int64)
        self.ops = np.zeros(3, np.int64)

    def increment(self, j: int) -> None:
        if self.counts[j] + 1 >= len(self.head):
            raise ValueError(f"count of element {j} would exceed capacity {len(self.head) - 2}")
        _increment(j, self.counts, self.nxt, self.prv, self.head, self.top, self.ops)

    def decrement(self, j: int) -> None:
        if self.counts[j] == 0:
            raise ValueError(f"count of element {j} is already zero")
        _decrement(j, self.counts, self.nxt, self.prv, self.head, self.ops)

    def find_max(self) -> Optional[tuple[int, int]]:
        j, k = _find_max(self.nxt, self.head, self.top, self.ops)
        return None if j < 0 else (int(j), int(k))

    @property
    def max_nonempty(self) -> int:
        return int(_settle_top(self.head, self.top))

    def bucket(self, k: int) -> list[int]:
        out = []
        j = self.head[k]
        while j >= 0:
            out.append(int(j))
            j = self.nxt[j]
        return out

    @property
    def increments(self) -> int:
        return int(self.ops[0])

    @property
    def decrements(self) -> int:
        return int(self.ops[1])

    @property
    def find_max_calls(self) -> int:
        return int(self.ops[2])


class HittingState:
    """Ball memberships, hit flags and the tracker for one hitting instance."""

    def __init__(self, universe_size: int, ball_count: int):
        self.universe_size = universe_size
        self.ball_count = ball_count
        self.tracker = BucketMaxTracker(universe_size, ball_count)
        self.sizes = np.zeros(ball_count, np.int64)
        self.hit = np.zeros(ball_count, np.bool_)
        self.exhausted = np.zeros(ball_count, np.bool_)
        self.members = np.zeros((ball_count, 4), np.int64)
        self.bits = np.zeros((ball_count, (universe_size + 63) // 64), np.uint64)
        self.ent_ball = np.zeros(max(16, ball_count), np.int64)
        self.ent_next = np.zeros_like(self.ent_ball)
        self.elem_head = np.full(universe_size, -1, np.int64)
        self.ent_top = np.zeros(1, np.int64)
        self.is_center = np.zeros(universe_size, np.bool_)
        self.centers: list[int] = []
        self.hit_count = 0

    @classmethod
    def from_balls(cls, universe_size: int, balls: Sequence[Sequence[int]]) -> "HittingState":
        """State for a fixed ball family, no centers chosen yet."""
        state = cls(universe_size, len(balls))
        pairs = [(i, e) for i, ball in enumerate(balls) for e in ball]
        if pairs:
            ids, elems = (np.array(x, np.int64) for x in zip(*pairs))
            state.absorb(ids, elems)
        return state

    @property
    def unhit(self) -> int:
        return self.ball_count - self.hit_count

    def ball(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.members[i, : self.sizes[i]])

    def _reserve(self, balls: np.ndarray, distinct: bool) -> None:
        if not len(balls):
            return
        per_ball = 1 if distinct else int(np.bincount(balls).max())
        need = int(self.sizes[balls].max()) + per_ball
        cap = self.members.shape[1]
        if need > cap:
            grown = np.zeros((self.ball_count, max(need, 2 * cap)), np.int64)
            grown[:, :cap] = self.members
            self.members = grown
        total = int(self.ent_top[0]) + len(balls)
        if total > len(self.ent_ball):
            size = max(total, 2 * len(self.ent_ball))
            for name in ("ent_ball", "ent_next"):
                old = getattr(self, name)
                new = np.zeros(size, np.int64)
                new[: len(old)] = old
                setattr(self, name, new)

    def absorb(self, balls: np.ndarray, elems: np.ndarray, distinct: bool = False) -> int:
        """Record one new element per (ball, element) pair; -1 marks exhaustion.

        ``distinct`` promises each ball appears at most once. Returns how many
        balls became hit because they grew into a center.
        """
        self._reserve(balls, distinct)
        t = self.tracker
        bad, newly = _absorb(
            balls, elems, self.universe_size, t.counts, t.nxt, t.prv, t.head, t.top, t.ops,
            self.sizes, self.hit, self.exhausted, self.members, self.bits,
            self.ent_ball, self.ent_next, self.elem_head, self.ent_top, self.is_center,
        )
        self.hit_count += int(newly)
        if bad >= 0:
            i, e = int(balls[bad]), int(elems[bad])
            if 0 <= e < self.universe_size:
                raise ContractViolation(f"ball {i} grew by element {e} it already contains")
            raise ContractViolation(f"ball {i} grew by element {e} outside [0, {self.universe_size})")
        return int(newly)

    def select(self) -> Optional[int]:
        """Make the element hitting the most unhit balls a center."""
        t = self.tracker
        c, k, newly = _select(
            t.counts, t.nxt, t.prv, t.head, t.top, t.ops, self.sizes, self.hit, self.members,
            self.ent_ball, self.ent_next, self.elem_head, self.is_center,
        )
        if c < 0:
            return None
        assert newly == k, "tracker count disagrees with balls hit"
        self.hit_count += int(newly)
        self.centers.append(int(c))
        return int(c)


def greedy_phase(state: HittingState, target_unhit: int) -> list[int]:
    """Add greedy centers until at most ``target_unhit`` balls are unhit."""
    chosen = []
    while state.unhit > target_unhit:
        c = state.select()
        if c is None:
            raise ContractViolation("unhit balls remain but no element hits any of them")
        chosen.append(c)
    return chosen


# ---------------------------------------------------------------------------
# Algorithm driver

@dataclass(frozen=True)
class RoundRecord:
    index: int
    b: int
    size_target: int
    unhit_at_start: int
    centers_added: int


@dataclass(frozen=True)
class OpCounts:
    increments: int
    decrements: int
    find_max_calls: int


@dataclass(frozen=True)
class CostFunction:
    kind: str
    p: int = 1

    def __post_init__(self):
        if self.kind not in ("power", "xlogx"):
            raise ValueError(f"unknown cost kind {self.kind!r}")
        if self.kind == "power" and self.p < 1:
            raise ValueError("power cost needs p >= 1")

    @classmethod
    def power(cls, p: int) -> "CostFunction":
        return cls("power", p)

    @classmethod
    def xlogx(cls) -> "CostFunction":
        return cls("xlogx")

    def __call__(self, x):
        if x < 1:
            raise ValueError(f"cost is defined on positive sizes, got {x}")
        if self.kind == "power":
            return x**self.p
        return x * math.log2(x)


@dataclass(frozen=True)
class CenterSelection:
    universe_size: int
    ball_count: int
    r: int
    p: int
    centers: tuple
    rounds: tuple
    ball_sizes: np.ndarray
    members: np.ndarray
    ops: Optional[OpCounts] = None

    def ball(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.members[i, : self.ball_sizes[i]])

    @property
    def total_size(self) -> int:
        return int(self.ball_sizes.sum())

    @property
    def power_cost(self) -> int:
        return evaluate_cost(self, CostFunction.power(self.p))

    @property
    def xlogx_cost(self) -> float:
        return evaluate_cost(self, CostFunction.xlogx())


def evaluate_cost(selection, f: CostFunction):
    """Total cost sum of f(|B_i|); accepts a selection or a list of sizes."""
    sizes = getattr(selection, "ball_sizes", selection)
    sizes = [int(x) for x in sizes]
    if f.kind == "power":
        return sum(f(x) for x in sizes)
    return math.fsum(f(x) for x in sizes)


def _grower(system):
    batch = getattr(system, "grow_batch", None)
    if batch is not None:
        return batch
    return lambda ids: [system.grow(int(i)) for i in ids]


def _as_elements(out, count: int) -> np.ndarray:
    if isinstance(out, np.ndarray):
        return out.astype(np.int64, copy=False)
    return np.fromiter((-1 if e is None else e for e in out), np.int64, count)


def _grow_unhit(state: HittingState, grow, target: int, exhaustible: bool) -> None:
    while True:
        live = ~state.hit & ~state.exhausted & (state.sizes < target)
        ids = np.flatnonzero(live).astype(np.int64)
        if not len(ids):
            return
        elems = _as_elements(grow(ids), len(ids))
        if len(elems) != len(ids):
            raise ContractViolation(f"grow_batch returned {len(elems)} elements for {len(ids)} balls")
        if not exhaustible and (elems == -1).any():
            i = int(ids[np.argmax(elems == -1)])
            raise ContractViolation(
                f"system refused to grow ball {i} of size {state.sizes[i]} < {state.universe_size}"
            )
        state.absorb(ids, elems, distinct=True)


def initial_size_target(universe_size: int, r: int, p: int) -> int:
    return -(-(2 ** (p + 2)) * universe_size // r)


def select_centers(system, r: int, p: int = 1, *, instrument: bool = False) -> CenterSelection:
    """Choose at most ``r`` centers so that every ball of ``system`` is hit.

    Balls start at ceil(2^(p+2) N / r) elements. Each round adds greedy
    centers until the unhit count drops to 1/2^(p+1) of its value at the
    round start, then doubles the size target for the balls still unhit.
    """
    n_univ = int(system.universe_size)
    n_balls = int(system.ball_count)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if not 1 <= r <= max(n_univ, 0) or n_univ < 1:
        raise ValueError(f"r must lie in [1, {n_univ}], got {r}")
    exhaustible = bool(getattr(system, "exhaustible", False))
    grow = _grower(system)
    state = HittingState(n_univ, n_balls)

    b = initial_size_target(n_univ, r, p)
    _grow_unhit(state, grow, min(b, n_univ), exhaustible)
    rounds = []
    while state.unhit:
        m0 = state.unhit
        added = greedy_phase(state, m0 >> (p + 1))
        rounds.append(RoundRecord(len(rounds) + 1, b, min(b, n_univ), m0, len(added)))
        b *= 2
        _grow_unhit(state, grow, min(b, n_univ), exhaustible)

    ops = None
    if instrument:
        t = state.tracker
        ops = OpCounts(t.increments, t.decrements, t.find_max_calls)
    return CenterSelection(
        universe_size=n_univ,
        ball_count=n_balls,
        r=r,
        p=p,
        centers=tuple(state.centers),
        rounds=tuple(rounds),
        ball_sizes=state.sizes,
        members=state.members,
        ops=ops,
    )


# ---------------------------------------------------------------------------
# checks of the proven guarantees

def cost_bound(universe_size: int, ball_count: int, r: int, p: int) -> Fraction:
    """2^((p+1)^2) * M * (N/r)^p as an exact rational."""
    return Fraction(2 ** ((p + 1) ** 2) * ball_count * universe_size**p, r**p)


def unhit_balls(selection: CenterSelection) -> list[int]:
    is_center = np.zeros(selection.universe_size, np.bool_)
    is_center[list(selection.centers)] = True
    m = selection.members
    filled = np.arange(m.shape[1]) < np.asarray(selection.ball_sizes)[:, None]
    hit = (is_center[m] & filled).any(axis=1)
    return [int(i) for i in np.flatnonzero(~hit)]


def round_violations(selection: CenterSelection) -> list[str]:
    """Rounds breaking 'centers <= r/2^i' or 'unhit at start <= M/2^((i-1)(p+1))'."""
    out = []
    r, p, m = selection.r, selection.p, selection.ball_count
    for rec in selection.rounds:
        i = rec.index
        if rec.centers_added * 2**i > r:
            out.append(f"round {i}: {rec.centers_added} centers > r/2^{i}")
        if rec.unhit_at_start * 2 ** ((i - 1) * (p + 1)) > m:
            out.append(f"round {i}: {rec.unhit_at_start} unhit at start > M/2^{(i - 1) * (p + 1)}")
    return out


def tracker_ops_audit(selection: CenterSelection) -> OpCounts:
    """Operation counts of an instrumented run, checked against their bounds."""
    ops = selection.ops
    if ops is None:
        raise AuditFailure("run was not instrumented; pass instrument=True")
    total = selection.total_size
    if ops.decrements > ops.increments:
        raise AuditFailure(f"{ops.decrements} decrements exceed {ops.increments} increments")
    if ops.increments + ops.decrements > 2 * total:
        raise AuditFailure(
            f"{ops.increments} + {ops.decrements} tracker updates exceed 2 * {total}"
        )
    if ops.find_max_calls > len(selection.centers) + len(selection.rounds):
        raise AuditFailure(
            f"{ops.find_max_calls} find-max calls exceed centers + rounds"
            f" = {len(selection.centers) + len(selection.rounds)}"
        )
    return ops
