import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from unitacq.caterpillar import (
    NotCaterpillar,
    a_u_caterpillar,
    assignment_to_protocol,
    build_assignment,
    condition_check,
    ell,
    fill_order,
    hungarian,
    is_caterpillar,
    mu,
    pyramid,
    recognize,
    synthesize,
)
from unitacq.engine import replay, support
from unitacq.generators import caterpillar, cycle, enumerate_caterpillars, fig4, j_graph, path, spider, star
from unitacq.graph import Graph, is_isomorphic
from unitacq.solver import unit_acquisition_number


def test_recognize_path():
    v = recognize(path(6))
    assert v.spine == (1, 2, 3, 4) and v.k == 2


def test_recognize_fig4():
    v = recognize(fig4())
    assert v.spine == (0, 1, 2, 3)
    assert v.leaf_counts == [2, 1, 1, 2]
    assert [v.leaf_counts[i] for i in v.internal] == [1, 1]


def test_recognize_rejects_spider_and_cycles():
    with pytest.raises(NotCaterpillar) as info:
        recognize(spider())
    assert info.value.witness is not None
    with pytest.raises(NotCaterpillar):
        recognize(cycle(5))
    with pytest.raises(NotCaterpillar):
        recognize(Graph.from_edges(3, [(0, 1)]))


def test_tiny_trees_are_caterpillars():
    assert recognize(Graph.from_edges(1, [])).spine == (0,)
    assert recognize(path(2)).spine == (0,)
    assert recognize(star(5)).spine == (0,)


def test_orientation_prefers_smaller_code():
    g = caterpillar([3, 0, 1])
    assert recognize(g).leaf_counts == [1, 0, 3]


def test_ell_examples():
    assert ell(1) == 1
    assert ell(4) == 6
    assert ell(7) == 16
    with pytest.raises(ValueError):
        ell(0)


@pytest.mark.parametrize("s", range(1, 15))
def test_ell_is_sum_of_half_ceilings_and_pyramid_size(s):
    assert ell(s) == sum((i + 1) // 2 for i in range(1, s + 1))
    assert len(pyramid(s).cells) == ell(s)
    assert sum(mu(i, s) for i in range(1, s + 1)) == ell(s)


def test_condition_examples():
    assert condition_check(recognize(j_graph())).ok
    bad = condition_check(recognize(path(5)))
    assert not bad.ok and bad.segment == (1, 1)
    # internal counts (1, 1, 1): every short segment passes, the whole one fails
    res = condition_check(recognize(caterpillar([1, 1, 1, 1, 1])))
    assert not res.ok and res.segment == (1, 3)


def test_condition_witness_is_shortest_then_leftmost():
    # internal counts (2, 1, 1, 1, 2): no single vertex or pair fails, the
    # middle triple does
    res = condition_check(recognize(caterpillar([1, 2, 1, 1, 1, 2, 1])))
    assert res.segment == (2, 4)


def test_hungarian_small():
    cost = [[4, 1, 3], [2, 0, 5], [3, 2, 2]]
    cols = hungarian(cost)
    assert sum(cost[i][c] for i, c in enumerate(cols)) == 5


@settings(max_examples=200)
@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.lists(st.integers(0, 20), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_hungarian_matches_scipy(cost):
    cols = hungarian(cost)
    assert sorted(cols) == list(range(len(cost)))
    rows, ref = linear_sum_assignment(cost)
    assert sum(cost[i][c] for i, c in enumerate(cols)) == sum(cost[r][c] for r, c in zip(rows, ref))


def test_assignment_for_j():
    a = build_assignment(recognize(j_graph()))
    assert a.pairs == [(5, 1, (1, 1))] and a.cost == 0


def test_assignment_for_fig4_is_cost_zero():
    a = build_assignment(recognize(fig4()))
    assert a is not None and a.cost == 0
    assert [cell for _, _, cell in a.pairs] == [(1, 1), (2, 1)]


def test_assignment_for_121():
    g = caterpillar([1, 1, 2, 1, 1])
    view = recognize(g)
    a = build_assignment(view)
    assert sorted(cell for _, _, cell in a.pairs) == [(1, 1), (2, 1), (2, 2), (3, 1)]
    p = synthesize(g, view)
    assert support(replay(g, p)) == 1
    assert unit_acquisition_number(g).value == 1


def test_infeasible_assignment_matches_condition():
    assert build_assignment(recognize(path(5))) is None


def test_protocol_for_j_is_one_fill_move_then_drain():
    g = j_graph()
    view = recognize(g)
    fill = assignment_to_protocol(view, build_assignment(view))
    assert [tuple(m) for m in fill] == [(5, 2)]
    assert support(replay(g, synthesize(g, view))) == 1


def test_fill_order_on_every_feasible_caterpillar():
    for g in enumerate_caterpillars(15):
        view = recognize(g)
        if view.k < 1 or not condition_check(view).ok:
            continue
        a = build_assignment(view)
        order = fill_order(a)
        assert sorted(order) == list(range(len(a.pairs)))
        w = replay(g, assignment_to_protocol(view, a))
        for pos in view.internal:
            assert w[view.spine[pos]] == 1 + mu(pos, view.k)


def test_enumeration_count_matches_networkx_trees():
    def nx_caterpillar(t):
        inner = t.subgraph([v for v in t if t.degree(v) > 1])
        return inner.number_of_nodes() == 0 or max(d for _, d in inner.degree()) <= 2

    for n in range(1, 12):
        ours = sum(1 for g in enumerate_caterpillars(n) if g.n == n)
        trees = [nx.empty_graph(1)] if n == 1 else list(nx.nonisomorphic_trees(n))
        assert ours == sum(1 for t in trees if nx_caterpillar(t))


def test_enumeration_shapes():
    assert [g.n for g in enumerate_caterpillars(1)] == [1]
    small = list(enumerate_caterpillars(4))
    assert any(is_isomorphic(g, path(4)) for g in small)
    assert any(is_isomorphic(g, star(3)) for g in small)
    codes = [tuple(recognize(g).leaf_counts) for g in enumerate_caterpillars(7) if g.n == 5]
    assert codes.count((1, 0, 1)) == 1 and (1, 1, 0) not in codes


@pytest.mark.parametrize("n", range(1, 13))
def test_paths_through_caterpillar_formula(n):
    assert a_u_caterpillar(path(n)).value == -(-n // 4)


def test_j_has_value_one():
    assert a_u_caterpillar(j_graph()).value == 1


def test_formula_matches_solver_up_to_ten():
    for g in enumerate_caterpillars(10):
        res = a_u_caterpillar(g)
        assert res.value == unit_acquisition_number(g).value
        assert support(replay(g, res.protocol)) == res.value
        assert sorted(v for piece in res.pieces for v in piece) == list(range(g.n))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=12), st.integers(0, 10**6))
def test_formula_is_orientation_invariant(counts, seed):
    counts[0] = max(counts[0], 1)
    counts[-1] = max(counts[-1], 1)
    g = caterpillar(counts)
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    h = g.relabel(perm)
    assert a_u_caterpillar(g).value == a_u_caterpillar(h).value
    assert a_u_caterpillar(caterpillar(counts[::-1])).value == a_u_caterpillar(g).value


def test_condition_scan_is_linear():
    for g in enumerate_caterpillars(16):
        view = recognize(g)
        assert condition_check(view).sums_evaluated <= g.n
        assert a_u_caterpillar(g).sums_evaluated <= g.n


def test_is_caterpillar():
    assert is_caterpillar(fig4())
    assert not is_caterpillar(spider())
