"""Unit acquisition moves: legality, application, replay and draining."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .graph import Graph, GraphError, RootedTreeView, is_ascending_tree


class UnitMove(NamedTuple):
    src: int
    dst: int


class IllegalMoveError(ValueError):
    def __init__(self, move: UnitMove, reason: str):
        super().__init__(f"illegal move {move.src}->{move.dst}: {reason}")
        self.move = move
        self.reason = reason


class ReplayError(ValueError):
    def __init__(self, index: int, move: UnitMove, reason: str):
        super().__init__(f"move {index} ({move.src}->{move.dst}) is illegal: {reason}")
        self.index = index
        self.move = move
        self.reason = reason


@dataclass
class Protocol:
    """An ordered list of unit moves."""

    moves: list[UnitMove] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def add(self, src: int, dst: int) -> None:
        self.moves.append(UnitMove(src, dst))

    def extend(self, other: Iterable) -> None:
        self.moves.extend(UnitMove(*m) for m in other)

    def relabeled(self, mapping: Sequence[int]) -> "Protocol":
        return Protocol([UnitMove(mapping[a], mapping[b]) for a, b in self.moves])

    def scaled(self, factor: int) -> "Protocol":
        """Each move repeated ``factor`` times; legal on ``factor * w`` whenever
        the original is legal on ``w``."""
        return Protocol([m for m in self.moves for _ in range(factor)])

    def to_json(self, g: Graph) -> dict:
        return {"graph_hash": g.digest(), "moves": [[a, b] for a, b in self.moves]}

    def dumps(self, g: Graph) -> str:
        return json.dumps(self.to_json(g))

    @classmethod
    def from_json(cls, data: dict, g: Graph | None = None) -> "Protocol":
        if g is not None and data.get("graph_hash") != g.digest():
            raise GraphError("protocol was recorded for a different graph")
        return cls([UnitMove(int(a), int(b)) for a, b in data["moves"]])


def all_ones(n: int) -> tuple[int, ...]:
    return (1,) * n


def _why_illegal(g: Graph, w: Sequence[int], src: int, dst: int) -> str | None:
    g.check_vertex(src)
    g.check_vertex(dst)
    if not g.has_edge(src, dst):
        return "non-adjacent"
    if w[src] < 1:
        return "empty source"
    if w[dst] < w[src]:
        return "target lighter"
    return None


def is_legal(g: Graph, w: Sequence[int], m: UnitMove | tuple[int, int]) -> bool:
    return _why_illegal(g, w, m[0], m[1]) is None


def apply(g: Graph, w: Sequence[int], m: UnitMove | tuple[int, int]) -> tuple[int, ...]:
    move = UnitMove(*m)
    reason = _why_illegal(g, w, *move)
    if reason:
        raise IllegalMoveError(move, reason)
    out = list(w)
    out[move.src] -= 1
    out[move.dst] += 1
    return tuple(out)


def potential(w: Sequence[int]) -> int:
    return sum(x * x for x in w)


def support(w: Sequence[int]) -> int:
    return sum(1 for x in w if x > 0)


def replay(g: Graph, p: Protocol | Iterable, start: Sequence[int] | None = None) -> tuple[int, ...]:
    """Run ``p`` from ``start`` (all ones by default); stops at the first
    illegal move with :class:`ReplayError`."""
    w = list(all_ones(g.n) if start is None else start)
    for i, m in enumerate(p):
        reason = _why_illegal(g, w, m[0], m[1])
        if reason:
            raise ReplayError(i, UnitMove(*m), reason)
        w[m[0]] -= 1
        w[m[1]] += 1
    return tuple(w)


def drain_ascending(g: Graph, view: RootedTreeView, w: Sequence[int]) -> Protocol:
    """Moves that bring all weight of an ascending tree onto its root.

    Vertices are emptied deepest first (ties by id).  Each unit walks the
    whole path to the root before the next one starts, which keeps the tree
    ascending between units.  Positive vertices outside the view are left
    alone.
    """
    if not is_ascending_tree(g, view, w):
        raise GraphError("weights do not form an ascending tree on this view")
    out = Protocol()
    order = sorted(view.parent, key=lambda v: (-view.depth[v], v))
    for v in order:
        path = view.path_to_root(v)
        for _ in range(w[v]):
            for a, b in zip(path, path[1:]):
                out.add(a, b)
    return out


def grow_ascending_forest(g: Graph, w: Sequence[int], roots: Sequence[int]) -> dict[int, RootedTreeView]:
    """Greedily hang every positive vertex below one of ``roots``.

    A vertex may take children only if it is a root or strictly lighter than
    its parent; a leaf may be as heavy as its parent.  Vertices first hung as
    heavy leaves are moved under a strictly heavier parent when one opens up.
    Raises :class:`GraphError` if some positive vertex stays unreachable.
    """
    parent: dict[int, int] = {}
    in_tree = set(roots)
    for r in roots:
        if w[r] <= 0:
            raise GraphError(f"root {r} has no weight")

    def is_open(p: int) -> bool:
        return p in roots or (p in parent and w[p] < w[parent[p]])

    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            if w[v] <= 0 or v in roots:
                continue
            if v in parent and is_open(v):
                continue
            if v in parent and any(parent[x] == v for x in parent):
                continue
            strict = [p for p in g.adj[v] if p in in_tree and p != v and is_open(p) and w[v] < w[p]]
            if strict:
                parent[v] = strict[0]
                in_tree.add(v)
                changed = True
                continue
            if v not in parent:
                loose = [p for p in g.adj[v] if p in in_tree and is_open(p) and w[v] <= w[p]]
                if loose:
                    parent[v] = loose[0]
                    in_tree.add(v)
                    changed = True
    missing = [v for v in range(g.n) if w[v] > 0 and v not in in_tree]
    if missing:
        raise GraphError(f"no ascending forest reaches {missing}")
    forest = {}
    for r in roots:
        members = {}
        for v in parent:
            x = v
            while x in parent:
                x = parent[x]
            if x == r:
                members[v] = parent[v]
        forest[r] = RootedTreeView(r, members)
    return forest


def merge_pair(g: Graph, w: Sequence[int], a: int, b: int) -> Protocol:
    """Pour the lighter of two adjacent vertices into the heavier until one is
    empty."""
    if not g.has_edge(a, b):
        raise GraphError(f"{a} and {b} are not adjacent")
    out = Protocol()
    src, dst = (a, b) if w[a] <= w[b] else (b, a)
    out.moves.extend([UnitMove(src, dst)] * w[src])
    return out


def collect_forest(g: Graph, w: Sequence[int], roots: Sequence[int]) -> Protocol:
    """Drain the ascending forest below ``roots`` onto the roots; with two
    adjacent roots, merge them afterwards."""
    forest = grow_ascending_forest(g, w, roots)
    out = Protocol()
    cur = tuple(w)
    for r in roots:
        moves = drain_ascending(g, forest[r], cur)
        cur = replay(g, moves, cur)
        out.extend(moves)
    if len(roots) == 2:
        out.extend(merge_pair(g, cur, *roots))
    return out


def collect_small_tree(g: Graph, vertices: Sequence[int]) -> Protocol:
    """Protocol gathering all chips of a star or double star onto one vertex.

    ``vertices`` must induce a tree of diameter at most 3, each vertex
    carrying weight 1.
    """
    verts = sorted(vertices)
    vs = set(verts)
    if len(verts) <= 1:
        return Protocol()
    deg = {v: sum(1 for x in g.adj[v] if x in vs) for v in verts}
    centers = [v for v in verts if deg[v] >= 2]
    if len(centers) > 2:
        raise GraphError("vertex set is not a star or double star")
    w = [0] * g.n
    for v in verts:
        w[v] = 1
    out = Protocol()
    if not centers:
        out.add(verts[1], verts[0])
        return out
    root = centers[0]
    leaf = next(x for x in g.adj[root] if x in vs and deg[x] == 1)
    out.add(leaf, root)
    w[leaf] -= 1
    w[root] += 1
    parent = {}
    for v in verts:
        if v == root or w[v] == 0:
            continue
        parent[v] = root if g.has_edge(v, root) else next(x for x in centers if g.has_edge(v, x))
    out.extend(drain_ascending(g, RootedTreeView(root, parent), w))
    return out
