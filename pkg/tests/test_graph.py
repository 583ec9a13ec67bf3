import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import graphs

from hitballs.graph import (
    CountingWeight,
    Graph,
    GraphFormatError,
    GraphValidationError,
    PartialDijkstra,
    all_pairs,
    components,
    dijkstra,
    format_graph,
    instrumented,
    is_connected,
    make_constant_degree,
    parse_graph,
    partial_step,
    plain_distances,
    split_degrees,
)

TRIANGLE = "3 3\n0 1 1\n1 2 1\n0 2 5"


def test_parse_smallest_document():
    g = parse_graph("2 1\n0 1 5")
    assert g.n == 2 and g.edges == ((0, 1, 5),)
    assert g.adj[0] == ((1, 5, 0),) and g.adj[1] == ((0, 5, 0),)


def test_parse_triangle_distance():
    assert dijkstra(parse_graph(TRIANGLE), 0).dist == (0, 1, 2)


def test_negative_weight_rejected():
    with pytest.raises(GraphValidationError):
        parse_graph("2 1\n0 1 -3")


@pytest.mark.parametrize(
    "text, lineno",
    [("2 1\n0 1", 2), ("2 x\n", 1), ("2 1\n0 1 a", 2), ("2 1\n0 1 1\n1 0 1", 3)],
)
def test_malformed_lines_report_line_number(text, lineno):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.lineno == lineno


def test_comments_and_parallel_edges_kept():
    g = parse_graph("# demo\n2 2\n# edges\n0 1 4\n0 1 2\n")
    assert g.m == 2
    assert dijkstra(g, 0).dist == (0, 2)


def test_short_document_rejected():
    with pytest.raises(GraphFormatError):
        parse_graph("3 2\n0 1 1\n")
    with pytest.raises(GraphFormatError):
        parse_graph("# only a comment\n")


def test_endpoint_out_of_range():
    with pytest.raises(GraphValidationError):
        parse_graph("2 1\n0 2 1")


@given(graphs())
def test_format_roundtrip(g):
    assert parse_graph(format_graph(g)) == g


@given(graphs())
def test_adjacency_symmetric(g):
    for v in range(g.n):
        for u, w, eid in g.adj[v]:
            assert (v, w, eid) in g.adj[u]


def test_dijkstra_path():
    g = Graph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
    t = dijkstra(g, 0)
    assert t.dist == (0, 1, 2) and t.settle_order == (0, 1, 2)


def test_dijkstra_unreachable():
    t = dijkstra(Graph(2, ()), 0)
    assert t.dist[1] is None and t.settle_order == (0,)
    with pytest.raises(ValueError):
        dijkstra(Graph(2, ()), 2)


def test_self_loops_ignored():
    g = Graph.from_edges(2, [(0, 0, 0), (0, 1, 3), (1, 1, 1)])
    assert dijkstra(g, 1).dist == (3, 0)


def test_zero_weight_ties_follow_ids():
    # 0 -0- 3, 0 -0- 1: both at distance 0, vertex 3 discovered first
    g = Graph.from_edges(4, [(0, 3, 0), (3, 2, 0), (0, 1, 1)])
    assert dijkstra(g, 0).settle_order == (0, 2, 3, 1)
    walk = PartialDijkstra(g, 0)
    assert [walk.step()[0] for _ in range(4)] == [0, 2, 3, 1]


@given(graphs(max_w=3))
@settings(max_examples=150)
def test_settle_order_sorted(g):
    for s in range(g.n):
        t = dijkstra(g, s)
        keys = [(t.dist[v], v) for v in t.settle_order]
        assert keys == sorted(keys) and len(set(keys)) == len(keys)
        assert t.dist[s] == 0
        assert {v for v in range(g.n) if t.dist[v] is not None} == set(t.settle_order)


@given(graphs(max_w=3))
@settings(max_examples=150)
def test_partial_matches_full(g):
    for s in range(g.n):
        walk = PartialDijkstra(g, s)
        seq = []
        while (item := partial_step(walk)) is not None:
            seq.append(item)
        t = dijkstra(g, s)
        assert seq == [(v, t.dist[v]) for v in t.settle_order]
        assert partial_step(walk) is None and walk.exhausted


def test_partial_examples():
    path = Graph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
    walk = PartialDijkstra(path, 0)
    assert [partial_step(walk) for _ in range(4)] == [(0, 0), (1, 1), (2, 2), None]
    walk = PartialDijkstra(parse_graph(TRIANGLE), 0)
    assert [partial_step(walk) for _ in range(3)] == [(0, 0), (1, 1), (2, 2)]


def test_split_star():
    star = Graph.from_edges(9, [(0, v, v) for v in range(1, 9)])
    h, rep = split_degrees(star, 4)
    assert h.max_degree() <= 4 and h.n > star.n
    assert sum(1 for u, v, w in h.edges if w == 0) >= 1
    before, after = all_pairs(star), all_pairs(h)
    for u in range(star.n):
        for v in range(star.n):
            assert after[rep[u]][rep[v]] == before[u][v]


def test_split_noops():
    cubic = Graph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 1), (1, 3, 1)])
    assert split_degrees(cubic, 3) == (cubic, [0, 1, 2, 3])
    path = Graph.from_edges(5, [(v, v + 1, 1) for v in range(4)])
    assert split_degrees(path, 3)[0] == path
    tri = parse_graph(TRIANGLE)
    assert make_constant_degree(tri)[0] == tri
    single = Graph(1, ())
    assert make_constant_degree(single) == (single, [0])
    with pytest.raises(ValueError):
        split_degrees(tri, 2)


def test_k5_split_preserves_distances():
    k5 = Graph.from_edges(5, [(u, v, u + v) for u in range(5) for v in range(u + 1, 5)])
    h, rep = make_constant_degree(k5)
    assert h.max_degree() <= 3 and h.n > 5
    before, after = all_pairs(k5), all_pairs(h)
    assert all(after[rep[u]][rep[v]] == before[u][v] for u in range(5) for v in range(5))


@given(graphs(max_n=10, max_m=40), st.integers(3, 6))
@settings(max_examples=100)
def test_split_preserves_distances(g, cap):
    h, rep = split_degrees(g, cap)
    assert h.max_degree() <= cap
    assert h.n <= 2 * (g.n + g.m)
    if cap == 3:
        assert h.n <= g.n + 2 * g.m
    before, after = all_pairs(g), all_pairs(h)
    for u in range(g.n):
        for v in range(g.n):
            assert after[rep[u]][rep[v]] == before[u][v]


@given(graphs(max_n=10))
def test_components(g):
    comp = components(g)
    for s in range(g.n):
        reach = dijkstra(g, s).dist
        assert all((reach[v] is not None) == (comp[v] == comp[s]) for v in range(g.n))
    assert is_connected(g) == (len(set(comp)) <= 1)


@given(graphs(max_n=10, max_w=4))
@settings(max_examples=60)
def test_only_addition_and_comparison(g):
    CountingWeight.reset()
    gi = instrumented(g)
    for s in range(g.n):
        t = dijkstra(gi, s)
        assert plain_distances(t) == list(dijkstra(g, s).dist)
        walk = PartialDijkstra(gi, s)
        while walk.step() is not None:
            pass
    if g.m:
        assert CountingWeight.comparisons > 0


def test_counting_weight_forbids_other_ops():
    a, b = CountingWeight(2), CountingWeight(3)
    CountingWeight.reset()
    assert (a + b).value == 5 and a < b
    assert CountingWeight.additions == 1 and CountingWeight.comparisons == 1
    for op in (lambda: a - b, lambda: a * b, lambda: a / b, lambda: int(a), lambda: hash(a), lambda: -a):
        with pytest.raises(TypeError):
            op()
