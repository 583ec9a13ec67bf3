import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import graphs

from hitballs.engine import ContractViolation
from hitballs.generators import GeneratorSpec, generate
from hitballs.graph import Graph, dijkstra
from hitballs.tz import (
    LevelState,
    build_level,
    build_oracle,
    grow_all_step,
    grow_unhit_step,
    level_budget,
    nearest_in_set,
    oracle_violations,
    query,
    stretch_violations,
)


def path(n, w=1):
    return Graph.from_edges(n, [(v, v + 1, w) for v in range(n - 1)])


def brute_nearest(g, members, j):
    out = []
    tables = {a: dijkstra(g, a).dist for a in members}
    for v in range(g.n):
        items = sorted((tables[a][v], a) for a in members if tables[a][v] is not None)
        out.append([(a, d) for d, a in items[:j]])
    return out


# ---------------------------------------------------------------- nearest_in_set

def test_nearest_singleton():
    g = path(4, 2)
    assert nearest_in_set(g, {2}) == [(2, 4), (2, 2), (2, 0), (2, 2)]


def test_nearest_two_ends():
    res = nearest_in_set(path(4), {0, 3})
    assert res[1] == (0, 1) and res[2] == (3, 1)


def test_nearest_everything_and_empty():
    g = path(5)
    assert nearest_in_set(g, range(5)) == [(v, 0) for v in range(5)]
    with pytest.raises(ValueError):
        nearest_in_set(g, [])


def test_nearest_unreachable_is_none():
    g = Graph.from_edges(3, [(0, 1, 1)])
    assert nearest_in_set(g, {0}) == [(0, 0), (0, 1), None]


@given(graphs(max_n=15, max_w=4), st.data())
def test_nearest_matches_brute_force(g, data):
    members = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    truth = brute_nearest(g, members, 1)
    assert nearest_in_set(g, members) == [t[0] if t else None for t in truth]


# ---------------------------------------------------------------- grow_all_step

def test_grow_path_tie_broken_by_id():
    g = path(3)
    state = LevelState.initial(g, {0, 2})
    assert state.bunches[1] == [(0, 1)]
    nxt = grow_all_step(g, state, 1)
    assert nxt.bunches[1] == [(0, 1), (2, 1)]


def test_grow_single_edge():
    g = Graph.from_edges(2, [(0, 1, 5)])
    nxt = grow_all_step(g, LevelState.initial(g, {0, 1}), 1)
    assert nxt.bunches == [[(0, 0), (1, 5)], [(1, 0), (0, 5)]]


def test_grow_spanning_bunches_flagged_full():
    g = path(3)
    state = grow_all_step(g, LevelState.initial(g, {0, 2}), 1)
    again = grow_all_step(g, state, 2)
    assert again.bunches == state.bunches
    assert all(again.full)


def test_grow_requires_equal_sizes():
    g = path(3)
    state = LevelState.initial(g, {0, 2})
    with pytest.raises(ContractViolation):
        grow_all_step(g, state, 2)
    with pytest.raises(ValueError):
        grow_all_step(g, state, 0)


@given(graphs(max_n=14, max_m=25, min_w=1, max_w=3), st.data())
@settings(max_examples=120, deadline=None)
def test_grow_all_matches_brute_force(g, data):
    members = sorted(data.draw(st.sets(st.integers(0, g.n - 1), min_size=1)))
    state = LevelState.initial(g, members)
    for j in range(1, len(members) + 1):
        assert state.bunches == brute_nearest(g, members, j)
        if j < len(members):
            state = grow_all_step(g, state, j)


# ---------------------------------------------------------------- grow_unhit_step

def _mark(state, centers):
    hit = [any(w in centers for w, _ in b) for b in state.bunches]
    return LevelState(state.level, state.members, state.bunches, hit, state.full, frozenset(centers))


def test_unhit_without_hits_equals_full_step():
    g = path(5)
    state = grow_all_step(g, LevelState.initial(g, range(5)), 1)
    assert grow_unhit_step(g, state, 2).bunches == grow_all_step(g, state, 2).bunches


def test_unhit_path_with_center_zero():
    g = path(4)
    state = LevelState.initial(g, range(4))
    marked = _mark(state, {0})
    assert marked.hit == [True, False, False, False]
    part = grow_unhit_step(g, marked, 1)
    full = grow_all_step(g, state, 1)
    assert part.bunches[0] == state.bunches[0]
    assert [part.bunches[v] for v in (1, 2, 3)] == [full.bunches[v] for v in (1, 2, 3)]


def test_unhit_all_hit_is_noop():
    g = path(4)
    state = _mark(LevelState.initial(g, range(4)), set(range(4)))
    assert grow_unhit_step(g, state, 1).bunches == state.bunches


def test_unhit_rejects_unequal_sizes():
    g = path(4)
    state = grow_all_step(g, LevelState.initial(g, range(4)), 1)
    state.bunches[2] = state.bunches[2][:1]
    with pytest.raises(ContractViolation):
        grow_unhit_step(g, state, 2)


def test_unhit_rejects_inconsistent_hit_flags():
    g = path(4)
    state = _mark(LevelState.initial(g, range(4)), {0})
    state.hit[3] = True
    with pytest.raises(ContractViolation):
        grow_unhit_step(g, state, 1)


@given(graphs(max_n=14, max_m=25, min_w=1, max_w=3), st.integers(0, 2**20))
@settings(max_examples=120, deadline=None)
def test_unhit_equals_full_on_unhit(g, seed):
    rng = random.Random(seed)
    members = sorted(rng.sample(range(g.n), rng.randint(1, g.n)))
    state = LevelState.initial(g, members)
    for j in range(1, len(members)):
        owners = rng.sample(range(g.n), rng.randint(0, g.n))
        centers = {rng.choice(state.bunches[v])[0] for v in owners if state.bunches[v]}
        marked = _mark(state, centers)
        part = grow_unhit_step(g, marked, j)
        full = grow_all_step(g, state, j)
        for v in range(g.n):
            assert part.bunches[v] == (state.bunches[v] if marked.hit[v] else full.bunches[v])
        state = full


# ---------------------------------------------------------------- levels and oracle

def test_level_budget_exact():
    assert level_budget(16, 2, 16) == 4
    assert level_budget(27, 3, 27) == 9
    assert level_budget(10, 2, 1) == 1
    for n in range(1, 60):
        for k in range(1, 5):
            for size in range(1, n + 1):
                r = level_budget(n, k, size)
                assert r >= 1 and r**k * n >= size**k
                assert r == 1 or (r - 1) ** k * n < size**k


def test_level_of_one_member():
    g = path(5)
    lb = build_level(g, 0, {2}, 3)
    assert lb.budget == 1 and lb.next_members == (2,)
    assert all(b == [(2, abs(v - 2))] for v, b in enumerate(lb.bunches))


def test_level_budget_on_16_vertices():
    g = generate(GeneratorSpec("grid", 16, wmin=1, wmax=3, seed=4))
    lb = build_level(g, 0, range(16), 2)
    assert lb.budget == 4 and 1 <= len(lb.next_members) <= 4
    assert lb.size * lb.budget <= 16 * 16 * 16


def test_k1_is_exact():
    g = generate(GeneratorSpec("random-gnm", 30, 60, 1, 9, 2))
    o = build_oracle(g, 1)
    for u in range(g.n):
        assert [query(o, u, v) for v in range(g.n)] == list(dijkstra(g, u).dist)


def test_k2_grid_16():
    g = generate(GeneratorSpec("grid", 16, wmin=1, wmax=5, seed=1))
    o = build_oracle(g, 2)
    assert len(o.levels[1]) <= 4
    assert stretch_violations(o) == [] and oracle_violations(o) == []


def test_single_vertex_oracle():
    o = build_oracle(Graph(1, ()), 3)
    assert query(o, 0, 0) == 0
    assert o.levels == ((0,), (0,), (0,))


def test_oracle_errors():
    g = path(3)
    with pytest.raises(ValueError):
        build_oracle(g, 0)
    o = build_oracle(g, 2)
    with pytest.raises(ValueError):
        query(o, 0, 3)
    with pytest.raises(ValueError):
        build_oracle(Graph.from_edges(3, [(0, 1, 0), (1, 2, 1)]), 2)


def test_disconnected_queries():
    g = Graph.from_edges(5, [(0, 1, 2), (1, 2, 2), (3, 4, 1)])
    o = build_oracle(g, 2)
    assert query(o, 0, 4) is None and query(o, 3, 4) == 1
    assert stretch_violations(o) == [] and oracle_violations(o) == []


@given(graphs(max_n=25, max_m=40, min_w=1, max_w=6), st.integers(1, 4))
@settings(max_examples=100, deadline=None)
def test_oracle_invariants(g, k):
    o = build_oracle(g, k)
    assert stretch_violations(o) == []
    assert oracle_violations(o) == []
    for v in range(g.n):
        assert query(o, v, v) == 0
        dists = [o.pivots[i][v][1] for i in range(k)]
        assert dists == sorted(dists)
    for i in range(k - 1):
        assert set(o.levels[i + 1]) <= set(o.levels[i])
    assert o.levels[0] == tuple(range(g.n))


def test_size_bound_total():
    g = generate(GeneratorSpec("random-gnm", 120, 300, 1, 20, 8))
    for k in (2, 3):
        o = build_oracle(g, k)
        assert o.total_size <= (16 * k + 1) * g.n ** (1 + 1 / k)
        assert o.stored_pairs <= o.total_size
        assert math.isclose(sum(o.level_totals), o.total_size)
