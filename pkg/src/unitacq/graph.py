"""Graph and weight-configuration data model.

Vertices are dense integer ids ``0..n-1``.  A weight configuration is a plain
tuple of nonnegative ints indexed by vertex id.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

INF = math.inf

WeightConfig = tuple  # tuple[int, ...]


class GraphError(ValueError):
    """Structural problem with a graph, tree view or vertex id."""


class ParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Build one with :meth:`from_edges`; the constructor does no validation.
    """

    n: int
    edges: frozenset
    adj: tuple = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        seen: set[tuple[int, int]] = set()
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            nbrs[u].append(v)
            nbrs[v].append(u)
        adj = tuple(tuple(sorted(x)) for x in nbrs)
        return cls(n, frozenset(seen), adj)

    # -- basic queries -------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise GraphError(f"vertex {v!r} out of range for n={self.n}")

    def add_edge(self, u: int, v: int) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges) + [(u, v)])

    def remove_edge(self, u: int, v: int) -> "Graph":
        e = (u, v) if u < v else (v, u)
        if e not in self.edges:
            raise GraphError(f"no edge {e}")
        return Graph.from_edges(self.n, self.edges - {e})

    def non_edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if (u, v) not in self.edges:
                    yield (u, v)

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabeled to ``0..len-1``; returns it with the
        list mapping new ids back to old ids."""
        old = sorted(set(vertices))
        new = {v: i for i, v in enumerate(old)}
        es = [(new[u], new[v]) for u, v in self.edges if u in new and v in new]
        return Graph.from_edges(len(old), es), old

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    # -- serialization -------------------------------------------------------

    def to_edge_list(self) -> str:
        lines = [f"{u} {v}" for u, v in self.sorted_edges()]
        # n = 1 + max id, so only an isolated top vertex needs declaring
        if self.n and not self.adj[self.n - 1]:
            lines.append(f"{self.n - 1}")
        return "".join(line + "\n" for line in lines)

    def to_dot(self, name: str = "G") -> str:
        out = [f"graph {name} {{"]
        out += [f"  {v};" for v in range(self.n)]
        out += [f"  {u} -- {v};" for u, v in self.sorted_edges()]
        out.append("}")
        return "\n".join(out) + "\n"

    def digest(self) -> str:
        """Stable hex digest of the vertex count and sorted edge list."""
        text = f"n={self.n}\n" + self.to_edge_list()
        return hashlib.sha256(text.encode()).hexdigest()


def from_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` lines.

    Blank lines and ``#`` comments are skipped.  A line holding a single id
    declares an (possibly isolated) vertex.
    """
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) > 2:
            raise ParseError(lineno, f"expected 'u v', got {line!r}")
        try:
            ids = [int(t) for t in toks]
        except ValueError:
            raise ParseError(lineno, f"malformed token in {line!r}") from None
        if any(i < 0 for i in ids):
            raise ParseError(lineno, "negative vertex id")
        top = max(top, *ids)
        if len(ids) == 1:
            continue
        u, v = ids
        if u == v:
            raise ParseError(lineno, f"self-loop at {u}")
        e = (min(u, v), max(u, v))
        if e in seen:
            raise ParseError(lineno, f"duplicate edge {e} (first on line {seen[e]})")
        seen[e] = lineno
        edges.append(e)
    return Graph.from_edges(top + 1, edges)


# -- distances ---------------------------------------------------------------


def bfs_distances(g: Graph, source: int, removed: frozenset | set = frozenset()) -> list[float]:
    dist: list[float] = [INF] * g.n
    if source in removed:
        return dist
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.adj[u]:
            if dist[v] == INF and v not in removed:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def components(g: Graph, removed: frozenset | set = frozenset()) -> list[list[int]]:
    comp_of = [-1] * g.n
    out: list[list[int]] = []
    for s in range(g.n):
        if comp_of[s] >= 0 or s in removed:
            continue
        comp_of[s] = len(out)
        members = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if comp_of[v] < 0 and v not in removed:
                    comp_of[v] = len(out)
                    members.append(v)
                    stack.append(v)
        out.append(sorted(members))
    return out


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(components(g)) == 1


def eccentricity(g: Graph, v: int) -> float:
    return max(bfs_distances(g, v))


def diameter(g: Graph) -> float:
    """Largest distance between two vertices; ``math.inf`` if disconnected."""
    if g.n == 0:
        return 0
    return max(eccentricity(g, v) for v in g.vertices())


def girth(g: Graph) -> float:
    """Length of a shortest cycle; ``math.inf`` for forests."""
    best = INF
    for s in g.vertices():
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v in g.adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif v != parent[u]:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def shortest_cycle(g: Graph) -> list[int] | None:
    """Lexicographically smallest vertex sequence among shortest cycles.

    The sequence starts at its smallest vertex and continues toward the
    smaller of that vertex's two cycle neighbours.
    """
    length = girth(g)
    if length == INF:
        return None
    best: list[int] | None = None

    def extend(path: list[int], on: set[int]) -> None:
        nonlocal best
        if len(path) == length:
            if g.has_edge(path[-1], path[0]) and path[1] < path[-1]:
                if best is None or path < best:
                    best = list(path)
            return
        for v in g.adj[path[-1]]:
            if v > path[0] and v not in on:
                path.append(v)
                on.add(v)
                extend(path, on)
                on.discard(v)
                path.pop()

    for s in g.vertices():
        extend([s], {s})
        if best is not None:
            return best
    return best


# -- rooted trees ------------------------------------------------------------


@dataclass(frozen=True)
class RootedTreeView:
    """A rooted tree on a subset of the vertices of some graph."""

    root: int
    parent: Mapping[int, int]
    depth: Mapping[int, int] = field(default=None, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.depth is None:
            object.__setattr__(self, "depth", _depths(self.root, self.parent))

    @classmethod
    def from_parents(cls, root: int, parent: Mapping[int, int]) -> "RootedTreeView":
        return cls(root, dict(parent))

    @property
    def vertices(self) -> list[int]:
        return sorted([self.root, *self.parent])

    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {v: [] for v in self.vertices}
        for v, p in sorted(self.parent.items()):
            kids[p].append(v)
        return kids

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path


def _depths(root: int, parent: Mapping[int, int]) -> dict[int, int]:
    if root in parent:
        raise GraphError("root must not have a parent")
    depth = {root: 0}
    for v in parent:
        chain = []
        x = v
        while x not in depth:
            if x in chain:
                raise GraphError(f"parent links contain a cycle through {x}")
            chain.append(x)
            if x not in parent:
                raise GraphError(f"vertex {x} does not reach the root")
            x = parent[x]
        for y in reversed(chain):
            depth[y] = depth[parent[y]] + 1
    return depth


def check_tree_view(g: Graph, view: RootedTreeView) -> None:
    g.check_vertex(view.root)
    for v, p in view.parent.items():
        g.check_vertex(v)
        if not g.has_edge(v, p):
            raise GraphError(f"tree edge ({v}, {p}) is not an edge of the graph")


def bfs_tree(g: Graph, root: int, allowed: set[int] | None = None) -> RootedTreeView:
    """BFS tree from ``root``; each vertex takes its smallest-id parent on the
    previous level."""
    dist = bfs_distances(g, root, removed=set() if allowed is None else set(g.vertices()) - allowed)
    parent = {}
    for v in g.vertices():
        if v != root and dist[v] != INF:
            parent[v] = min(u for u in g.adj[v] if dist[u] == dist[v] - 1)
    return RootedTreeView(root, parent)


def is_ascending_tree(g: Graph, view: RootedTreeView, w: Sequence[int]) -> bool:
    """Every leaf weighs at most its parent and every other non-root vertex
    weighs strictly less than its parent.

    Only the view's vertices are inspected; all of them must carry positive
    weight.
    """
    check_tree_view(g, view)
    if len(w) != g.n:
        raise GraphError("weight vector length does not match the graph")
    kids = view.children()
    for v in view.vertices:
        if w[v] <= 0:
            raise GraphError(f"tree vertex {v} has no weight")
    for v, p in view.parent.items():
        if kids[v]:
            if not w[v] < w[p]:
                return False
        elif not w[v] <= w[p]:
            return False
    return True


# -- isomorphism -------------------------------------------------------------


def find_isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """Map ``phi`` with ``phi[v]`` in ``h`` for each ``v`` in ``g``, or None.

    Plain backtracking with degree filtering; meant for templates of ten or
    so vertices.
    """
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return None
    order: list[int] = []
    seen = set()
    for s in sorted(g.vertices(), key=lambda v: -g.degree(v)):
        if s in seen:
            continue
        queue = deque([s])
        seen.add(s)
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in g.adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    phi = [-1] * g.n
    used = [False] * h.n

    def place(i: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for x in range(h.n):
            if used[x] or h.degree(x) != g.degree(u):
                continue
            if all(h.has_edge(x, phi[v]) for v in g.adj[u] if phi[v] >= 0) and all(
                not h.has_edge(x, phi[v]) for v in order[:i] if not g.has_edge(u, v)
            ):
                phi[u] = x
                used[x] = True
                if place(i + 1):
                    return True
                used[x] = False
                phi[u] = -1
        return False

    return phi if place(0) else None


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None
