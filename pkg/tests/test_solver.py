from functools import lru_cache
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings

from strategies import graphs
from unitacq.engine import replay, support
from unitacq.generators import complete, cycle, fig1, g_mk, path, petersen, star, to_networkx
from unitacq.graph import Graph, GraphError
from unitacq.solver import (
    CutCertificate,
    certified_pairs,
    cut_lower_bound,
    is_maximal_matching,
    max_acquirable_weight,
    max_clique,
    min_maximal_matching,
    unit_acquisition_by_components,
    unit_acquisition_number,
    verify_certificate,
    witness_replays,
)


def brute_force_a_u(g: Graph) -> int:
    """Minimum support over every reachable configuration, no pruning."""

    @lru_cache(maxsize=None)
    def best(w: tuple) -> int:
        out = support(w)
        for u in range(g.n):
            for v in g.adj[u]:
                if w[u] and w[v] >= w[u]:
                    nxt = list(w)
                    nxt[u] -= 1
                    nxt[v] += 1
                    out = min(out, best(tuple(nxt)))
        return out

    return best((1,) * g.n)


def test_solver_examples():
    assert unit_acquisition_number(path(5)).value == 2
    assert unit_acquisition_number(complete(6)).value == 1
    assert unit_acquisition_number(Graph.from_edges(1, [])).value == 1


def test_petersen_needs_two():
    res = unit_acquisition_number(petersen())
    assert res.value == 2
    assert witness_replays(petersen(), res)


def test_fig1_and_its_edge_deletions():
    g = fig1()
    assert unit_acquisition_number(g).value == 1
    for e in g.sorted_edges():
        assert unit_acquisition_by_components(g.remove_edge(*e)) == 2


def test_disconnected_graph_is_rejected():
    with pytest.raises(GraphError):
        unit_acquisition_number(Graph.from_edges(3, [(0, 1)]))


@pytest.mark.parametrize("n", range(2, 11))
def test_paths_and_cycles(n):
    want = -(-n // 4)
    assert unit_acquisition_number(path(n)).value == want
    if n >= 3:
        assert unit_acquisition_number(cycle(n)).value == want


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=1, max_n=6, connected=True))
def test_solver_matches_brute_force(g):
    res = unit_acquisition_number(g)
    assert res.value == brute_force_a_u(g)
    assert support(replay(g, res.witness)) == res.value


def test_budget_exhaustion_is_inconclusive():
    res = unit_acquisition_number(petersen(), budget=100)
    assert res.value is None and res.status == "inconclusive"
    assert res.lower <= 2 <= res.upper
    assert support(replay(petersen(), res.witness)) == res.upper


def test_lower_bound_hint_stops_early():
    res = unit_acquisition_number(path(8), lower_bound=2)
    assert res.value == 2


def test_max_acquirable_weight_examples():
    assert max_acquirable_weight(path(2)).global_max == 2
    assert max_acquirable_weight(path(5)).global_max == 4
    # reachable by 0->1, 3->2, 1->2, 1->2
    assert max_acquirable_weight(path(4)).global_max == 4
    assert max_acquirable_weight(path(4)).per_vertex == [2, 4, 4, 2]


def brute_min_maximal_matching(g: Graph) -> int:
    edges = g.sorted_edges()
    for size in range(1, len(edges) + 1):
        for sub in combinations(edges, size):
            if is_maximal_matching(g, sub):
                return size
    raise AssertionError


def test_min_maximal_matching_examples():
    assert min_maximal_matching(path(4)) == (1, [(1, 2)])
    assert min_maximal_matching(petersen())[0] == 3
    assert min_maximal_matching(g_mk(2, 4).graph)[0] == 2
    with pytest.raises(GraphError):
        min_maximal_matching(Graph.from_edges(2, []))


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=2, max_n=8))
def test_min_maximal_matching_matches_brute_force(g):
    if g.m == 0:
        return
    size, witness = min_maximal_matching(g)
    assert is_maximal_matching(g, witness) and len(witness) == size
    assert size == brute_min_maximal_matching(g)


@settings(max_examples=150)
@given(graphs(max_n=9))
def test_max_clique_matches_networkx(g):
    clique = max_clique(g.n, g.adj)
    assert all(g.has_edge(a, b) for a, b in combinations(clique, 2))
    expected = max((len(c) for c in nx.find_cliques(to_networkx(g))), default=0)
    assert len(clique) == expected


def test_certificate_examples():
    p9 = path(9)
    assert verify_certificate(p9, CutCertificate(0, 8, (4,)))
    assert not verify_certificate(cycle(4), CutCertificate(0, 2, (1,)))
    assert not verify_certificate(complete(4), CutCertificate(0, 1, (2,)))
    # 1 is adjacent to 0
    assert not verify_certificate(p9, CutCertificate(0, 8, (1,)))
    # {2, 3} separates but is not minimal
    assert not verify_certificate(p9, CutCertificate(0, 8, (3, 4)))


def test_cut_lower_bound_examples():
    assert cut_lower_bound(g_mk(4, 5).graph).value == 4
    assert cut_lower_bound(path(9)).value == 3
    assert cut_lower_bound(complete(5)).value == 1
    assert cut_lower_bound(star(4)).value == 1


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=7, connected=True))
def test_certificates_are_valid_and_bound_is_sound(g):
    for cert in certified_pairs(g).values():
        assert verify_certificate(g, cert)
    bound = cut_lower_bound(g)
    assert bound.value <= unit_acquisition_number(g).value
    for cert in bound.certificates:
        assert verify_certificate(g, cert)


def test_exhaustive_cut_search_is_at_least_default():
    g = cycle(9)
    assert cut_lower_bound(g, exhaustive=True).value >= cut_lower_bound(g).value
