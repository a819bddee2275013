"""Constructive protocols that certify upper bounds on a_u.

Every builder returns a :class:`SynthesisOutcome` whose protocol replays
legally from the all-ones configuration; ``final_support`` is recomputed by
replay, never trusted from the construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .engine import Protocol, collect_forest, collect_small_tree, drain_ascending, replay, support
from .graph import (
    Graph,
    GraphError,
    RootedTreeView,
    bfs_distances,
    bfs_tree,
    diameter,
    find_isomorphism,
    girth,
    is_connected,
    shortest_cycle,
)
from .solver import max_clique, min_maximal_matching

METHODS = (
    "level2",
    "radius2-partition",
    "matching-partition",
    "diam2-girth3",
    "diam2-girth4",
    "diam2-girth5",
    "star",
    "special-C5",
    "special-petersen",
)


class Inapplicable(GraphError):
    pass


class SynthesisError(RuntimeError):
    """A step the construction guarantees turned out impossible."""


@dataclass
class SynthesisOutcome:
    protocol: Protocol
    final_support: int
    method: str

    def to_json(self, g: Graph) -> dict:
        return {
            "method": self.method,
            "final_support": self.final_support,
            "protocol": self.protocol.to_json(g),
        }


def _outcome(g: Graph, p: Protocol, method: str) -> SynthesisOutcome:
    return SynthesisOutcome(p, support(replay(g, p)), method)


class _Runner:
    """Protocol under construction with its current weights."""

    def __init__(self, g: Graph):
        self.g = g
        self.w = [1] * g.n
        self.p = Protocol()

    def move(self, a: int, b: int) -> None:
        self.w = list(replay(self.g, [(a, b)], self.w))
        self.p.add(a, b)

    def extend(self, moves: Protocol) -> None:
        self.w = list(replay(self.g, moves, self.w))
        self.p.extend(moves)


# -- depth-2 trees ---------------------------------------------------------------


def level2_protocol(g: Graph, root: int | None = None) -> SynthesisOutcome | None:
    """Support at most 2 from a BFS tree of depth 2 with an edge between two
    depth-2 vertices.  Without ``root``, the smallest applicable root is
    used.  Returns None when no root qualifies."""
    if not is_connected(g):
        raise GraphError("graph must be connected")
    roots = g.vertices() if root is None else [root]
    for r in roots:
        out = _level2_at(g, r)
        if out is not None:
            return out
    return None


def _level2_at(g: Graph, v: int) -> SynthesisOutcome | None:
    dist = bfs_distances(g, v)
    if max(dist) > 2:
        return None
    far = [(a, b) for a, b in g.sorted_edges() if dist[a] == 2 and dist[b] == 2]
    if not far:
        return None
    tree = bfs_tree(g, v)
    z, w = far[0]
    x1 = tree.parent[z]
    run = _Runner(g)
    run.move(w, z)
    for y in sorted(c for c, p in tree.parent.items() if p == x1):
        if y in (z, w):
            continue
        run.move(y, x1)
        run.move(x1, z)
    run.move(x1, v)
    rest = {u: p for u, p in tree.parent.items() if run.w[u] > 0 and u != z}
    run.extend(drain_ascending(g, RootedTreeView(v, rest), run.w))
    return _outcome(g, run.p, "level2")


# -- radius-2 partition --------------------------------------------------------


def spread_set(g: Graph) -> list[int]:
    """Largest vertex set with pairwise distance at least 3."""
    dist = [bfs_distances(g, v) for v in g.vertices()]
    far = [{u for u in g.vertices() if dist[v][u] >= 3} for v in g.vertices()]
    return max_clique(g.n, far)


def radius2_partition_protocol(g: Graph) -> SynthesisOutcome:
    """Support at most ``(n-1)/delta``: split around a spread set and drain
    each part after feeding its center the chip of its lightest child."""
    if not is_connected(g) or g.n < 2:
        raise GraphError("graph must be connected with n >= 2")
    centers = spread_set(g)
    dists = {s: bfs_distances(g, s) for s in centers}
    owner = {}
    for u in g.vertices():
        owner[u] = min(centers, key=lambda s: (dists[s][u], s))
    run = _Runner(g)
    for s in centers:
        parent = {}
        for u in g.vertices():
            if owner[u] != s or u == s:
                continue
            if dists[s][u] == 1:
                parent[u] = s
            else:
                parent[u] = min(x for x in g.adj[u] if x in g.adj[s])
        kids = {u: [c for c, p in parent.items() if p == u] for u in parent}
        x = min(g.adj[s], key=lambda u: (len(kids[u]), u))
        run.move(x, s)
        rest = {u: p for u, p in parent.items() if u != x and p != x}
        run.extend(drain_ascending(g, RootedTreeView(s, rest), run.w))
    return _outcome(g, run.p, "radius2-partition")


def radius2_bound(g: Graph) -> int:
    return (g.n - 1) // g.min_degree()


# -- matching partition --------------------------------------------------------


def matching_partition_protocol(g: Graph) -> SynthesisOutcome:
    """Support at most the minimum maximal matching size: every unmatched
    vertex hangs on a matched neighbour, giving one double star per edge."""
    if not is_connected(g) or g.m == 0:
        raise GraphError("graph must be connected with at least one edge")
    _, matching = min_maximal_matching(g)
    mate = {}
    for a, b in matching:
        mate[a], mate[b] = b, a
    pendants: dict[int, list[int]] = {u: [] for u in mate}
    for u in g.vertices():
        if u not in mate:
            pendants[min(g.adj[u])].append(u)
    run = _Runner(g)
    for a, b in matching:
        if not pendants[a] and pendants[b]:
            a, b = b, a
        if not pendants[a]:
            run.move(b, a)
            continue
        run.move(pendants[a][0], a)
        parent = {u: a for u in pendants[a][1:]}
        parent[b] = a
        parent.update({u: b for u in pendants[b]})
        run.extend(drain_ascending(g, RootedTreeView(a, parent), run.w))
    return _outcome(g, run.p, "matching-partition")


# -- diameter 2 ----------------------------------------------------------------


def _c5_template() -> tuple[Graph, Protocol]:
    from .generators import cycle

    # 1 and 3 feed 2, then 0 feeds 4: weights end as 3 on 2 and 2 on 4
    return cycle(5), _protocol([(1, 2), (3, 2), (0, 4)])


def _protocol(moves) -> Protocol:
    p = Protocol()
    p.extend(moves)
    return p


def _petersen_template() -> tuple[Graph, Protocol]:
    from .generators import petersen

    _, moves = _c5_template()
    spokes = _protocol([(i + 5, i) for i in range(5)])
    spokes.extend(moves.scaled(2))
    return petersen(), spokes


def _special_case(g: Graph) -> SynthesisOutcome | None:
    for builder, tag in ((_c5_template, "special-C5"), (_petersen_template, "special-petersen")):
        template, moves = builder()
        if g.n != template.n or g.m != template.m:
            continue
        phi = find_isomorphism(template, g)
        if phi is not None:
            return _outcome(g, moves.relabeled(phi), tag)
    return None


def diam2_protocol(g: Graph) -> SynthesisOutcome:
    """Support 1 on every diameter-2 graph except C_5 and Petersen, where it
    is 2."""
    if diameter(g) != 2:
        raise Inapplicable("graph does not have diameter 2")
    if any(g.degree(v) == g.n - 1 for v in g.vertices()) and g.m == g.n - 1:
        return _outcome(g, collect_small_tree(g, list(g.vertices())), "star")
    special = _special_case(g)
    if special is not None:
        return special
    gi = girth(g)
    if gi == 3:
        return _girth3(g)
    if gi == 4:
        return _girth4(g)
    if gi == 5:
        return _girth5(g)
    raise SynthesisError(f"diameter 2 non-star with girth {gi}")


def _finish(run: _Runner, roots: list[int], method: str) -> SynthesisOutcome:
    try:
        run.extend(collect_forest(run.g, run.w, roots))
    except GraphError as exc:
        raise SynthesisError(f"{method}: expected an ascending forest: {exc}") from exc
    return _outcome(run.g, run.p, method)


def _girth3(g: Graph) -> SynthesisOutcome:
    Q = max_clique(g.n, g.adj)
    qset = set(Q)
    adj = [set(a) for a in g.adj]
    S = [x for x in g.vertices() if x not in qset and adj[x] & qset]
    U = [x for x in g.vertices() if x not in qset and not adj[x] & qset]
    solos = {q: sorted(x for x in S if adj[x] & qset == {q}) for q in Q}
    run = _Runner(g)
    if not U:
        fed = [(q, min(adj[q] - qset)) for q in Q if adj[q] - qset]
        if fed:
            v, s = fed[0]
            run.move(s, v)
        else:
            v = Q[0]
            run.move(Q[1], v)
        return _finish(run, [v], "diam2-girth3")
    lonely = [q for q in Q if not solos[q]]
    if lonely:
        u = lonely[0]
        v = next(q for q in Q if q != u)
        run.move(u, v)
        return _finish(run, [v], "diam2-girth3")
    for u, v, w in permutations(Q, 3):
        s_prime = {x for q in Q if q != w for x in solos[q]}
        if any(adj[z] <= s_prime for z in U):
            continue
        for s in solos[v]:
            run.move(s, v)
        for s in solos[u]:
            run.move(s, u)
            run.move(u, v)
        run.move(u, w)
        for q in Q:
            if q not in (u, v, w):
                run.move(solos[q][0], q)
        return _finish(run, [v], "diam2-girth3")
    raise SynthesisError("every clique triple has a bad vertex")


def _girth4(g: Graph) -> SynthesisOutcome:
    w, x, y, z = shortest_cycle(g)
    run = _Runner(g)
    run.move(w, x)
    run.move(z, y)
    return _finish(run, [x, y], "diam2-girth4")


def _girth5(g: Graph) -> SynthesisOutcome:
    if g.min_degree() < 4:
        raise SynthesisError("girth 5 with diameter 2 needs minimum degree 4 here")
    v, w, x, y, z = shortest_cycle(g)
    on = {v, w, x, y, z}
    X = sorted(set(g.adj[x]) - on)
    W = set(g.adj[w]) - on
    Y = set(g.adj[y]) - on
    run = _Runner(g)
    run.move(X[0], x)
    run.move(X[1], x)
    w1, y1 = next((a, b) for a, b in _oriented_edges(g) if a in W and b in Y)
    run.move(w1, w)
    run.move(y1, y)
    return _finish(run, [x], "diam2-girth5")


def _oriented_edges(g: Graph):
    for a, b in g.sorted_edges():
        yield a, b
        yield b, a
