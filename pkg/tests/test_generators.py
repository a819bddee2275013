import networkx as nx
import pytest

from unitacq.caterpillar import recognize
from unitacq.engine import replay, support
from unitacq.generators import (
    FamilyError,
    FamilySpec,
    diameter4_tree,
    diameter4_tree_from_n,
    enumerate_connected_graphs,
    enumerate_trees,
    fig1,
    fig4,
    g_mk,
    grow_td_leaves,
    h_k,
    make,
    make_td,
    petersen,
    random_graph,
    td_closed_form,
    td_alt_closed_form,
    td_recurrence,
    to_networkx,
)
from unitacq.graph import diameter, girth, is_ascending_tree, is_connected
from unitacq.solver import min_maximal_matching


def test_petersen_is_the_petersen_graph():
    assert nx.is_isomorphic(to_networkx(petersen()), nx.petersen_graph())


def test_fig1_shape():
    g = fig1()
    assert (g.n, g.m, girth(g)) == (7, 7, 3)
    assert nx.cycle_basis(to_networkx(g)) and len(nx.cycle_basis(to_networkx(g))) == 1


def test_fig4_shape():
    t = fig4()
    assert (t.n, t.max_degree()) == (10, 3)
    assert recognize(t).k == 2


def test_h_k():
    g = h_k(4)
    assert g.n == 8 and g.degree(0) == g.degree(1) == 4


def test_g45():
    G = g_mk(4, 5)
    g = G.graph
    assert g.n == 34 and g.max_degree() == 5
    assert min_maximal_matching(g)[0] == 4
    assert len(G.cut_pairs) == 3
    assert all(g.degree(x) == 2 and g.degree(y) == 2 for x, y in G.cut_pairs)
    assert len(G.private_leaves) == 4 and all(g.degree(v) == 1 for v in G.private_leaves)


@pytest.mark.parametrize("m, k", [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)])
def test_g_mk_vertex_count(m, k):
    G = g_mk(m, k)
    assert G.graph.n == 2 * k * m - 2 * (m - 1)
    assert is_connected(G.graph)
    assert G.sharp == (k >= 4)


def test_g_mk_rejects_crowded_copies():
    with pytest.raises(FamilyError):
        g_mk(3, 2)


def test_diameter4_tree():
    t = diameter4_tree(3)
    assert t.n == 10 and t.degree(0) == 3
    assert all(t.degree(v) == 3 for v in t.adj[0])
    assert diameter(t) == 4
    assert diameter4_tree_from_n(17).n == 17
    with pytest.raises(FamilyError):
        diameter4_tree_from_n(11)


def test_td_small_cases():
    t2 = make_td(2)
    assert t2.graph.n == 6 and t2.active_counts == [1, 4]
    t3 = make_td(3)
    assert t3.graph.n == 22 and t3.active_counts[-1] == 11
    assert make_td(4).active_counts[-1] == 28


@pytest.mark.parametrize("d", range(1, 9))
def test_td_protocol_and_counts(d):
    t = make_td(d)
    assert is_ascending_tree(t.graph, t.view(), replay(t.graph, t.ascend))
    assert support(replay(t.graph, t.protocol)) == 1
    assert t.active_counts == td_recurrence(d)
    assert t.graph.max_degree() <= 5


@pytest.mark.parametrize("d", range(2, 11))
def test_td_closed_form_matches_recurrence(d):
    a = td_recurrence(d)
    assert td_closed_form(d) == a[-1]
    if d >= 4:
        assert a[-1] == 4 * a[-2] - 4 * a[-3]


def test_alt_closed_form_disagrees_at_two():
    assert td_alt_closed_form(2) == 11 != td_recurrence(2)[-1]


def test_td_branching_four():
    t = make_td(5, 4)
    assert t.active_counts == [1, 3, 5, 6, 3]
    assert t.graph.n == 47 and t.graph.max_degree() <= 4
    g, p = grow_td_leaves(t)
    assert g.n == 56 and g.max_degree() <= 4
    assert support(replay(g, p)) == 1
    with pytest.raises(FamilyError, match="-9"):
        make_td(6, 4)


def test_family_dispatch():
    assert make(FamilySpec("path", n=4)).m == 3
    assert make(FamilySpec("gmk", m=2, k=4)).n == 14
    assert make(FamilySpec("td", d=2)).n == 6
    with pytest.raises(FamilyError):
        make(FamilySpec("cycle"))
    with pytest.raises(FamilyError):
        make(FamilySpec("nonsense", n=3))


def test_connected_graph_counts():
    counts = [sum(1 for _ in enumerate_connected_graphs(n, n)) for n in range(1, 8)]
    assert counts == [1, 1, 2, 6, 21, 112, 853]


def test_tree_counts():
    assert [sum(1 for _ in enumerate_trees(n)) for n in range(1, 11)] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]


def test_random_graph_is_reproducible():
    assert random_graph(8, "gnp", seed=1) == random_graph(8, "gnp", seed=1)
    assert random_graph(2, "gnp", seed=0, p=1.0).sorted_edges() == [(0, 1)]
    for seed in range(20):
        assert diameter(random_graph(9, "diameter2", seed=seed)) == 2


def test_random_graph_errors():
    with pytest.raises(FamilyError):
        random_graph(5, "diameter2", seed=0, p=0.0, max_tries=10)
    with pytest.raises(FamilyError):
        random_graph(5, "lattice", seed=0)
