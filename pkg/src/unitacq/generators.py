"""Named graph families, the bounded-degree trees that collect all weight on
one vertex, and small-graph enumerators.

Labelings are fixed and documented per family so drawings can be checked
against vertex ids.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

from .engine import Protocol, drain_ascending, replay
from .graph import Graph, RootedTreeView, diameter, is_ascending_tree, is_isomorphic


class FamilyError(ValueError):
    pass


# -- classic families --------------------------------------------------------


def path(n: int) -> Graph:
    """P_n on ``0 - 1 - ... - n-1``."""
    if n < 1:
        raise FamilyError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    """C_n on ``0 - 1 - ... - n-1 - 0``."""
    if n < 3:
        raise FamilyError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise FamilyError("complete graph needs n >= 1")
    return Graph.from_edges(n, combinations(range(n), 2))


def star(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    if leaves < 0:
        raise FamilyError("star needs leaves >= 0")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen() -> Graph:
    """Outer 5-cycle 0..4, spokes i - i+5, inner pentagram on 5..9."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(i + 5, (i + 2) % 5 + 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def fig1() -> Graph:
    """Seven vertices with one triangle; a_u = 1 but every edge is needed.

    Bottom row left to right is 0..4, vertex 5 sits above between 1 and 2,
    vertex 6 above 5.
    """
    return Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5), (5, 6)])


def fig4() -> Graph:
    """The 10-vertex caterpillar of maximum degree 3 with a_u = 1.

    Spine 0 - 1 - 2 - 3 left to right; leaves 4, 5 on 0; 6 on 1; 7 on 2;
    8, 9 on 3.
    """
    return caterpillar([2, 1, 1, 2])


def j_graph() -> Graph:
    """P_5 ``0..4`` plus leaf 5 on the center 2."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)])


def spider(legs: int = 3, length: int = 2) -> Graph:
    """Center 0 with ``legs`` paths of ``length`` edges; leg ``j`` uses ids
    ``1 + j*length ..`` outward."""
    edges = []
    for j in range(legs):
        prev = 0
        for t in range(length):
            v = 1 + j * length + t
            edges.append((prev, v))
            prev = v
    return Graph.from_edges(1 + legs * length, edges)


def caterpillar(counts: Sequence[int]) -> Graph:
    """Spine ``0..L-1`` in order, then the leaves of spine vertex 0, of 1,
    and so on."""
    L = len(counts)
    if L < 1 or any(c < 0 for c in counts):
        raise FamilyError("leaf counts must be nonnegative and nonempty")
    edges = [(i, i + 1) for i in range(L - 1)]
    nxt = L
    for i, c in enumerate(counts):
        for _ in range(c):
            edges.append((i, nxt))
            nxt += 1
    return Graph.from_edges(nxt, edges)


def diameter4_tree(k: int) -> Graph:
    """Center 0 with children ``1..k``, each child carrying ``k-1`` leaves;
    ``n - 1 = k^2``."""
    if k < 2:
        raise FamilyError("diameter-4 tree needs k >= 2")
    edges = [(0, i) for i in range(1, k + 1)]
    nxt = k + 1
    for i in range(1, k + 1):
        for _ in range(k - 1):
            edges.append((i, nxt))
            nxt += 1
    return Graph.from_edges(nxt, edges)


def diameter4_tree_from_n(n: int) -> Graph:
    k = round((n - 1) ** 0.5)
    if k * k != n - 1:
        raise FamilyError(f"n - 1 = {n - 1} is not a square")
    return diameter4_tree(k)


def h_k(k: int) -> Graph:
    """Double star: centers 0 and 1, leaves ``2..k`` on 0 and ``k+1..2k-1``
    on 1."""
    if k < 2:
        raise FamilyError("H_k needs k >= 2")
    edges = [(0, 1)] + [(0, i) for i in range(2, k + 1)] + [(1, i) for i in range(k + 1, 2 * k)]
    return Graph.from_edges(2 * k, edges)


@dataclass
class GmkGraph:
    graph: Graph
    m: int
    k: int
    centers: list[tuple[int, int]]
    cut_pairs: list[tuple[int, int]]
    private_leaves: list[int]
    sharp: bool = True


def g_mk(m: int, k: int) -> GmkGraph:
    """m copies of H_k chained by merging leaf pairs.

    Copy ``i`` has centers ``2i`` and ``2i+1``.  The merged vertices between
    copies ``i`` and ``i+1`` are ``2m + 2i`` (on the ``2i`` side) and
    ``2m + 2i + 1``.  Private leaves follow, copy by copy.  The lower bound
    a_u >= m needs a private leaf in every copy, which holds for ``k >= 4``.
    """
    if m < 1:
        raise FamilyError("G_{m,k} needs m >= 1")
    shared = 0 if m == 1 else (1 if m == 2 else 2)
    if k - 1 < shared:
        raise FamilyError(f"k = {k} leaves no room for {shared} merged leaves per center")
    edges = []
    centers = [(2 * i, 2 * i + 1) for i in range(m)]
    cut_pairs = [(2 * m + 2 * i, 2 * m + 2 * i + 1) for i in range(m - 1)]
    for i, (a, b) in enumerate(centers):
        edges.append((a, b))
        if i > 0:
            edges += [(a, cut_pairs[i - 1][0]), (b, cut_pairs[i - 1][1])]
        if i < m - 1:
            edges += [(a, cut_pairs[i][0]), (b, cut_pairs[i][1])]
    nxt = 2 * m + 2 * (m - 1)
    private = []
    for i, (a, b) in enumerate(centers):
        used = (i > 0) + (i < m - 1)
        for center in (a, b):
            for t in range(k - 1 - used):
                edges.append((center, nxt))
                if center == a and t == 0:
                    private.append(nxt)
                nxt += 1
    g = Graph.from_edges(nxt, edges)
    assert g.n == 2 * k * m - 2 * (m - 1)
    return GmkGraph(g, m, k, centers, cut_pairs, private, sharp=k >= 4)


# -- trees of maximum degree 5 (or 4) with a_u = 1 ---------------------------


@dataclass
class TdTree:
    """The level-by-level tree together with the protocol that makes it an
    ascending tree and the full protocol collecting everything at the root.

    Levels are numbered from 1 (the root).  ``active_counts[i-1]`` is the
    number of active vertices on level ``i``.
    """

    graph: Graph
    d: int
    branching: int
    level: list[int]
    parent: list[int]
    active: set[int]
    ascend: Protocol
    protocol: Protocol
    active_counts: list[int]
    ascending_weights: tuple[int, ...] = field(default=(), repr=False)

    def view(self) -> RootedTreeView:
        w = self.ascending_weights
        return RootedTreeView(0, {v: self.parent[v] for v in range(1, self.graph.n) if w[v] > 0})


def td_recurrence(d: int, branching: int = 5) -> list[int]:
    """Active counts a_1..a_d from ``a_d = (b-1) a_{d-1} - sum_{i<d} a_i``."""
    if branching not in (4, 5):
        raise FamilyError("branching must be 4 or 5")
    a = [1]
    if d >= 2:
        a.append(branching - 1)
    for _ in range(3, d + 1):
        a.append((branching - 1) * a[-1] - sum(a))
    return a[:d]


def td_closed_form(d: int) -> int:
    """Closed form of the branching-5 recurrence, valid for ``d >= 2``."""
    return (3 * d + 2) * 2 ** d // 8


def td_alt_closed_form(d: int) -> int:
    """The formula ``(3d+5) 2^(d-2)``, which disagrees with a_2 = 4."""
    return (3 * d + 5) * 2 ** d // 4


def make_td(d: int, branching: int = 5) -> TdTree:
    """Build the depth-``d`` tree and its protocols.

    The root has ``branching`` children; every later active vertex gets
    ``branching - 1`` new leaves, so the maximum degree is ``branching``.
    Chips climb in level order, left to right; when an active vertex has no
    active leaf below it, the smallest-id spare leaf is marked inactive.
    """
    if d < 1:
        raise FamilyError("d must be >= 1")
    counts = td_recurrence(d, branching)
    if counts[-1] < 0:
        raise FamilyError(
            f"branching {branching} cannot reach depth {d}: the recurrence gives a_{d} = {counts[-1]}"
        )
    level = [1]
    parent = [-1]
    active = {0}
    ascend = Protocol()
    edges: list[tuple[int, int]] = []

    def add_child(p: int) -> int:
        v = len(level)
        level.append(level[p] + 1)
        parent.append(p)
        edges.append((p, v))
        return v

    if d >= 2:
        kids = [add_child(0) for _ in range(branching)]
        ascend.add(kids[0], 0)
        active.update(kids[1:])
    for depth in range(3, d + 1):
        new = []
        for u in sorted(v for v in active if level[v] == depth - 1):
            new.extend(add_child(u) for _ in range(branching - 1))
        spare = set(new)  # active level-depth leaves still carrying their chip
        below: dict[int, list[int]] = {}
        for x in new:
            y = parent[x]
            while y != -1:
                below.setdefault(y, []).append(x)
                y = parent[y]
        for i in range(1, depth):
            for u in sorted(v for v in active if level[v] == i):
                cands = [x for x in below.get(u, []) if x in spare]
                if cands:
                    x = min(cands)
                    climb = [x]
                    while climb[-1] != u:
                        climb.append(parent[climb[-1]])
                    for a, b in zip(climb, climb[1:]):
                        ascend.add(a, b)
                else:
                    x = min(spare)  # arbitrary leaf, kept at weight 1 but inactive
                spare.discard(x)
        active.update(spare)
    g = Graph.from_edges(len(level), edges)
    w = replay(g, ascend)
    measured = [sum(1 for v in active if level[v] == i) for i in range(1, d + 1)]
    tree = TdTree(g, d, branching, level, parent, active, ascend, Protocol(), measured, w)
    view = tree.view()
    if not is_ascending_tree(g, view, w):
        raise AssertionError("construction did not produce an ascending tree")
    tree.protocol = Protocol(list(ascend.moves) + list(drain_ascending(g, view, w).moves))
    return tree


def grow_td_leaves(tree: TdTree) -> tuple[Graph, Protocol]:
    """Hang ``branching - 1`` more leaves on every deepest active vertex
    without augmenting.  The ascending tree stays ascending, so all weight
    still reaches the root."""
    edges = tree.graph.sorted_edges()
    n = tree.graph.n
    for u in sorted(v for v in tree.active if tree.level[v] == tree.d):
        for _ in range(tree.branching - 1):
            edges.append((u, n))
            n += 1
    g = Graph.from_edges(n, edges)
    w = replay(g, tree.ascend)
    parent = {v: (tree.parent[v] if v < tree.graph.n else next(iter(g.adj[v]))) for v in range(1, n) if w[v] > 0}
    view = RootedTreeView(0, parent)
    return g, Protocol(list(tree.ascend.moves) + list(drain_ascending(g, view, w).moves))


# -- enumeration -------------------------------------------------------------


def caterpillar_codes(max_n: int) -> Iterator[tuple[int, ...]]:
    """Leaf-count sequences of caterpillars with spine length >= 2, one per
    isomorphism class: ends carry a leaf, and the sequence is no larger than
    its reverse."""
    for n in range(4, max_n + 1):
        for L in range(2, n - 1):
            leaves = n - L
            yield from _codes(L, leaves)


def _codes(L: int, leaves: int) -> Iterator[tuple[int, ...]]:
    def rec(prefix: list[int], left: int) -> Iterator[tuple[int, ...]]:
        pos = len(prefix)
        if pos == L - 1:
            if left >= 1:
                code = tuple(prefix + [left])
                if code <= code[::-1]:
                    yield code
            return
        lo = 1 if pos == 0 else 0
        for c in range(lo, left + 1):
            prefix.append(c)
            yield from rec(prefix, left - c)
            prefix.pop()

    yield from rec([], leaves)


def enumerate_caterpillars(max_n: int) -> Iterator[Graph]:
    """Every caterpillar with at most ``max_n`` vertices, once per
    isomorphism class, by vertex count."""
    for n in range(1, max_n + 1):
        if n <= 3:
            yield star(n - 1) if n > 1 else Graph.from_edges(1, [])
            continue
        yield star(n - 1)
        for L in range(2, n - 1):
            for code in _codes(L, n - L):
                yield caterpillar(code)


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.sorted_edges())
    return h


def from_networkx(h) -> Graph:
    nodes = sorted(h.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(idx[u], idx[v]) for u, v in h.edges()])


def enumerate_trees(n: int) -> Iterator[Graph]:
    """Unlabeled trees on ``n`` vertices (networkx generator)."""
    import networkx as nx

    if n == 1:
        yield Graph.from_edges(1, [])
        return
    for t in nx.nonisomorphic_trees(n):
        yield from_networkx(t)


def _invariant(n: int, masks: list[int]) -> tuple:
    deg = [bin(m).count("1") for m in masks]
    rows = []
    for v in range(n):
        nbrs = [u for u in range(n) if masks[v] >> u & 1]
        tri = sum(bin(masks[u] & masks[v]).count("1") for u in nbrs) // 2
        reach = masks[v]
        for u in nbrs:
            reach |= masks[u]
        rows.append((deg[v], tri, bin(reach & ~(1 << v)).count("1"), tuple(sorted(deg[u] for u in nbrs))))
    return tuple(sorted(rows))


def _from_masks(n: int, masks: list[int]) -> Graph:
    return Graph.from_edges(n, [(u, v) for v in range(n) for u in range(v) if masks[v] >> u & 1])


@lru_cache(maxsize=None)
def _connected_graphs(n: int) -> tuple[Graph, ...]:
    import networkx as nx

    if n <= 7:
        out = [
            from_networkx(h)
            for h in nx.graph_atlas_g()
            if h.number_of_nodes() == n and n > 0 and nx.is_connected(h)
        ]
        return tuple(out)
    # every connected graph has a vertex whose deletion leaves it connected,
    # so adding one vertex to each smaller connected graph reaches them all
    buckets: dict[tuple, list[Graph]] = {}
    out = []
    for g in _connected_graphs(n - 1):
        base = [0] * n
        for u, v in g.edges:
            base[u] |= 1 << v
            base[v] |= 1 << u
        for nbrs in range(1, 1 << (n - 1)):
            masks = list(base)
            masks[n - 1] = nbrs
            for u in range(n - 1):
                if nbrs >> u & 1:
                    masks[u] |= 1 << (n - 1)
            reps = buckets.setdefault(_invariant(n, masks), [])
            h = _from_masks(n, masks)
            if any(is_isomorphic(h, r) for r in reps):
                continue
            reps.append(h)
            out.append(h)
    return tuple(out)


def enumerate_connected_graphs(max_n: int, min_n: int = 1) -> Iterator[Graph]:
    """Connected graphs up to isomorphism, ``min_n <= n <= max_n``."""
    if max_n > 8:
        raise FamilyError("exhaustive enumeration is limited to n <= 8")
    for n in range(min_n, max_n + 1):
        yield from _connected_graphs(n)


# -- random graphs -----------------------------------------------------------


def random_graph(
    n: int, model: str = "gnp", seed: int = 0, p: float = 0.5, max_tries: int = 100_000
) -> Graph:
    """Seeded random graph.

    ``gnp`` keeps each pair independently with probability ``p``;
    ``diameter2`` resamples ``gnp`` until the diameter is exactly 2.
    """
    rng = random.Random(seed)
    if model == "gnp":
        return _gnp(n, p, rng)
    if model == "diameter2":
        if n < 3:
            raise FamilyError("diameter 2 needs n >= 3")
        for _ in range(max_tries):
            g = _gnp(n, p, rng)
            if diameter(g) == 2:
                return g
        raise FamilyError(f"no diameter-2 graph in {max_tries} tries")
    raise FamilyError(f"unknown model {model!r}")


def _gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def random_tree(n: int, rng: random.Random, max_degree: int | None = None) -> Graph:
    """Random recursive tree, optionally capped in degree."""
    deg = [0] * n
    edges = []
    for v in range(1, n):
        choices = [u for u in range(v) if max_degree is None or deg[u] < max_degree]
        u = rng.choice(choices)
        deg[u] += 1
        deg[v] += 1
        edges.append((u, v))
    return Graph.from_edges(n, edges)


# -- family dispatch ---------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None = None
    m: int | None = None
    k: int | None = None
    d: int | None = None
    branching: int = 5


def make(spec: FamilySpec) -> Graph:
    f = spec.family.lower()

    def need(name: str) -> int:
        value = getattr(spec, name)
        if value is None:
            raise FamilyError(f"family {spec.family} needs parameter {name}")
        return value

    if f == "path":
        return path(need("n"))
    if f == "cycle":
        return cycle(need("n"))
    if f == "complete":
        return complete(need("n"))
    if f == "star":
        return star(need("n") - 1)
    if f == "petersen":
        return petersen()
    if f == "fig1":
        return fig1()
    if f == "fig4":
        return fig4()
    if f == "j":
        return j_graph()
    if f == "spider":
        return spider()
    if f == "hk":
        return h_k(need("k"))
    if f == "gmk":
        return g_mk(need("m"), need("k")).graph
    if f == "diam4":
        return diameter4_tree(need("k")) if spec.k is not None else diameter4_tree_from_n(need("n"))
    if f == "td":
        return make_td(need("d"), spec.branching).graph
    raise FamilyError(f"unknown family {spec.family!r}")


FAMILIES = ("path", "cycle", "complete", "star", "petersen", "fig1", "fig4", "j", "spider", "hk", "gmk", "diam4", "td")
