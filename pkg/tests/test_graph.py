import math

import networkx as nx
import pytest
from hypothesis import given, settings

from strategies import graphs, trees
from unitacq.generators import complete, cycle, petersen, star, to_networkx
from unitacq.graph import (
    INF,
    Graph,
    GraphError,
    ParseError,
    RootedTreeView,
    bfs_tree,
    components,
    diameter,
    eccentricity,
    find_isomorphism,
    from_edge_list,
    girth,
    is_ascending_tree,
    is_connected,
    shortest_cycle,
)


def test_parse_path():
    g = from_edge_list("0 1\n1 2")
    assert g.n == 3 and g.m == 2
    assert g.adj == ((1,), (0, 2), (1,))


def test_parse_ignores_comments_and_blanks():
    g = from_edge_list("# header\n\n0 1   # trailing\n  1 2\n")
    assert g.sorted_edges() == [(0, 1), (1, 2)]


def test_parse_is_order_independent():
    assert from_edge_list("2 1\n0 1\n") == from_edge_list("0 1\n1 2\n")


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("0 1\n0 1", 2, "duplicate"),
        ("0 1\n1 0", 2, "duplicate"),
        ("0 0", 1, "self-loop"),
        ("0 1\n1 x", 2, ""),
        ("0 1 2", 1, ""),
        ("0 -1", 1, ""),
    ],
)
def test_parse_errors_name_the_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        from_edge_list(text)
    assert info.value.lineno == line
    assert fragment in str(info.value)


def test_single_id_declares_isolated_vertex():
    g = from_edge_list("0 1\n3\n")
    assert g.n == 4 and g.degree(3) == 0
    assert not is_connected(g)


@given(graphs(max_n=9))
def test_edge_list_roundtrip(g):
    assert from_edge_list(g.to_edge_list()) == g


def test_from_edges_rejects_bad_input():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(1, 1)])


def test_dot_is_deterministic():
    assert petersen().to_dot() == petersen().to_dot()
    assert "0 -- 1;" in petersen().to_dot()


def test_digest_depends_on_edges_only():
    a = from_edge_list("1 2\n0 1")
    b = from_edge_list("0 1\n1 2")
    assert a.digest() == b.digest()
    assert a.digest() != from_edge_list("0 1\n0 2").digest()


def test_diameter_examples():
    assert diameter(petersen()) == 2
    assert diameter(complete(4)) == 1
    assert diameter(cycle(8)) == 4
    assert diameter(Graph.from_edges(3, [(0, 1)])) == INF


def test_girth_examples():
    assert girth(petersen()) == 5
    assert girth(cycle(4)) == 4
    assert girth(star(4)) == INF


@settings(max_examples=300)
@given(graphs(max_n=9))
def test_diameter_and_girth_match_networkx(g):
    h = to_networkx(g)
    if nx.is_connected(h):
        assert diameter(g) == nx.diameter(h)
    else:
        assert diameter(g) == INF
    expected = nx.girth(h)
    assert girth(g) == (INF if math.isinf(expected) else expected)


@given(graphs(max_n=8))
def test_shortest_cycle_is_a_cycle_of_girth_length(g):
    c = shortest_cycle(g)
    if c is None:
        assert girth(g) == INF
        return
    assert len(c) == girth(g)
    assert len(set(c)) == len(c)
    assert all(g.has_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))
    assert c[0] == min(c) and c[1] < c[-1]


def test_components_and_eccentricity():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    assert components(g) == [[0, 1, 2], [3, 4]]
    assert eccentricity(g, 1) == INF
    assert eccentricity(cycle(6), 0) == 3


def test_rooted_view_depths_and_paths():
    view = RootedTreeView(0, {1: 0, 2: 1, 3: 1})
    assert view.depth == {0: 0, 1: 1, 2: 2, 3: 2}
    assert view.path_to_root(3) == [3, 1, 0]
    with pytest.raises(GraphError):
        RootedTreeView(0, {1: 2, 2: 1})


def test_bfs_tree_takes_smallest_parent():
    view = bfs_tree(cycle(4), 0)
    assert view.parent == {1: 0, 3: 0, 2: 1}


def test_ascending_star():
    g = star(4)
    w = (2, 1, 1, 1, 1)
    assert is_ascending_tree(g, RootedTreeView(0, {i: 0 for i in range(1, 5)}), w)


def test_path_of_ones_is_not_ascending():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert not is_ascending_tree(g, RootedTreeView(0, {1: 0, 2: 1}), (1, 1, 1))


def test_t2_after_first_move_is_ascending():
    # root 0 holds 2, child 1 gave its chip away, children 2..5 hold 1
    g = star(5)
    view = RootedTreeView(0, {v: 0 for v in range(2, 6)})
    assert is_ascending_tree(g, view, (2, 0, 1, 1, 1, 1))


def test_ascending_rejects_non_edges_and_empty_vertices():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(GraphError):
        is_ascending_tree(g, RootedTreeView(0, {2: 0}), (2, 1, 1))
    with pytest.raises(GraphError):
        is_ascending_tree(g, RootedTreeView(0, {1: 0}), (2, 0, 1))


@given(trees(min_n=2, max_n=10))
def test_ascending_is_monotone_in_root_weight(t):
    view = bfs_tree(t, 0)
    w = [1] * t.n
    w[0] = t.n
    w = tuple(w)
    if is_ascending_tree(t, view, w):
        bumped = (w[0] + 1,) + w[1:]
        assert is_ascending_tree(t, view, bumped)


@settings(max_examples=200)
@given(graphs(max_n=7))
def test_isomorphism_matches_networkx(g):
    perm = list(reversed(range(g.n)))
    h = g.relabel(perm)
    phi = find_isomorphism(g, h)
    assert phi is not None
    assert all(h.has_edge(phi[u], phi[v]) for u, v in g.edges)
    assert (find_isomorphism(g, cycle(5)) is not None) == (
        g.n == 5 and nx.is_isomorphic(to_networkx(g), nx.cycle_graph(5))
    )
