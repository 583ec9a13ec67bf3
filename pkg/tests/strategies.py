"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from hitballs.graph import Graph


@st.composite
def graphs(draw, max_n=12, max_m=30, min_w=0, max_w=5, connected=False, loops=True):
    n = draw(st.integers(1, max_n))
    edges = []
    if connected:
        for v in range(1, n):
            edges.append((draw(st.integers(0, v - 1)), v, draw(st.integers(min_w, max_w))))
    extra = draw(st.integers(0, max_m))
    for _ in range(extra):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1))
        if u == v and not loops:
            continue
        edges.append((u, v, draw(st.integers(min_w, max_w))))
    return Graph.from_edges(n, edges)
