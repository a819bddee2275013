from hypothesis import strategies as st

from unitacq.graph import Graph, is_connected


@st.composite
def graphs(draw, min_n=1, max_n=8, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])
    if connected and not is_connected(g):
        # chain the components together with the smallest ids
        extra = [(i, i + 1) for i in range(n - 1) if not g.has_edge(i, i + 1)]
        g = Graph.from_edges(n, list(g.edges) + extra)
    return g


@st.composite
def trees(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    return Graph.from_edges(n, [(p, v + 1) for v, p in enumerate(parents)])
