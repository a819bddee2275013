"""Exact unit acquisition number and the bound quantities around it.

The configuration space is acyclic (the sum of squared weights grows by at
least 2 per move), so a depth-first search with a visited set is exact.
Two facts keep it small:

* a vertex that reaches weight 0 never receives weight again, so support
  never increases and weight never crosses an empty vertex;
* hence the number of connected components of the positive part is a lower
  bound on every support reachable from a state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .engine import Protocol, UnitMove, all_ones, replay, support
from .graph import Graph, GraphError, components, is_connected

DEFAULT_BUDGET = 50_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class SolveResult:
    """Outcome of an exact search.

    ``value`` is None when the state budget ran out; ``lower`` and ``upper``
    then bracket the true number and ``witness`` reaches ``upper``.
    """

    value: int | None
    witness: Protocol
    states_explored: int
    elapsed: float
    lower: int = 1
    upper: int = 0

    @property
    def status(self) -> str:
        return "exact" if self.value is not None else "inconclusive"

    def to_json(self, g: Graph) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "states_explored": self.states_explored,
            "elapsed": round(self.elapsed, 6),
            "witness": self.witness.to_json(g),
        }


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise GraphError("graph must be connected")


def _positive_components(adj, w) -> int:
    n = len(w)
    seen = [False] * n
    count = 0
    for s in range(n):
        if w[s] == 0 or seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v] and w[v]:
                    seen[v] = True
                    stack.append(v)
    return count


def _moves(adj, w) -> list[tuple[int, int]]:
    # moves that empty their source first: they are the only ones that lower support
    emptying = []
    other = []
    for u, wu in enumerate(w):
        if wu == 0:
            continue
        for v in adj[u]:
            if w[v] >= wu:
                (emptying if wu == 1 else other).append((u, v))
    return emptying + other


def unit_acquisition_number(
    g: Graph, budget: int = DEFAULT_BUDGET, lower_bound: int = 1
) -> SolveResult:
    """Minimum support reachable from the all-ones configuration.

    ``lower_bound`` lets callers stop the search as soon as a protocol
    reaching a known lower bound is found.
    """
    _require_connected(g)
    t0 = time.perf_counter()
    adj = g.adj
    start = all_ones(g.n)
    best = g.n
    best_path: list[tuple[int, int]] = []
    visited = {start}
    explored = 1
    # frames: (state, components, pending moves, next index)
    path: list[tuple[int, int]] = []
    stack = [(start, 1, _moves(adj, start), 0)]
    target = max(1, lower_bound)
    exhausted = False
    while stack and best > target:
        state, comps, moves, i = stack[-1]
        if i == len(moves):
            stack.pop()
            if path:
                path.pop()
            continue
        stack[-1] = (state, comps, moves, i + 1)
        u, v = moves[i]
        child = list(state)
        child[u] -= 1
        child[v] += 1
        child = tuple(child)
        if child in visited:
            continue
        visited.add(child)
        explored += 1
        if explored > budget:
            exhausted = True
            break
        c = comps
        if child[u] == 0:
            c = _positive_components(adj, child)
            if c >= best:
                continue
            s = sum(1 for x in child if x)
            if s < best:
                best = s
                best_path = path + [(u, v)]
                if best <= target:
                    break
        path.append((u, v))
        stack.append((child, c, _moves(adj, child), 0))
    witness = Protocol([UnitMove(*m) for m in best_path])
    elapsed = time.perf_counter() - t0
    if exhausted:
        return SolveResult(None, witness, explored, elapsed, lower=target, upper=best)
    return SolveResult(best, witness, explored, elapsed, lower=best, upper=best)


@dataclass
class MaxWeightResult:
    per_vertex: list[int]
    states_explored: int

    @property
    def global_max(self) -> int:
        return max(self.per_vertex)


def max_acquirable_weight(g: Graph, budget: int = DEFAULT_BUDGET) -> MaxWeightResult:
    """Largest weight each vertex can hold in any reachable configuration."""
    _require_connected(g)
    adj = g.adj
    start = all_ones(g.n)
    best = list(start)
    visited = {start}
    stack = [start]
    while stack:
        state = stack.pop()
        for u, v in _moves(adj, state):
            child = list(state)
            child[u] -= 1
            child[v] += 1
            child = tuple(child)
            if child in visited:
                continue
            visited.add(child)
            if len(visited) > budget:
                raise BudgetExceeded(f"more than {budget} states")
            if child[v] > best[v]:
                best[v] = child[v]
            stack.append(child)
    return MaxWeightResult(best, len(visited))


# -- maximal matchings -------------------------------------------------------


def min_maximal_matching(g: Graph) -> tuple[int, list[tuple[int, int]]]:
    """Smallest maximal matching, by branch and bound.

    The first undominated edge (both ends free) must be dominated by some
    matching edge at one of its ends; branch over those edges.
    """
    if g.m == 0:
        raise GraphError("graph has no edges")
    edges = g.sorted_edges()
    best: list[tuple[int, int]] = _greedy_maximal_matching(edges)
    matched = [False] * g.n
    chosen: list[tuple[int, int]] = []

    def lower_bound() -> int:
        # edges of a matching among free-free edges need distinct dominators,
        # and one matching edge dominates at most two of them
        used = set()
        k = 0
        for a, b in edges:
            if not matched[a] and not matched[b] and a not in used and b not in used:
                used.update((a, b))
                k += 1
        return (k + 1) // 2

    def search() -> None:
        nonlocal best
        if len(chosen) + lower_bound() >= len(best):
            return
        first = next(((a, b) for a, b in edges if not matched[a] and not matched[b]), None)
        if first is None:
            best = list(chosen)
            return
        a, b = first
        cands = sorted(
            {(min(x, y), max(x, y)) for x in (a, b) for y in g.adj[x] if not matched[y]}
        )
        for x, y in cands:
            matched[x] = matched[y] = True
            chosen.append((x, y))
            search()
            chosen.pop()
            matched[x] = matched[y] = False

    search()
    return len(best), sorted(best)


def _greedy_maximal_matching(edges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    used: set[int] = set()
    out = []
    for a, b in edges:
        if a not in used and b not in used:
            used.update((a, b))
            out.append((a, b))
    return out


def is_maximal_matching(g: Graph, matching: Iterable[tuple[int, int]]) -> bool:
    covered: set[int] = set()
    for a, b in matching:
        if not g.has_edge(a, b) or a in covered or b in covered:
            return False
        covered.update((a, b))
    return all(a in covered or b in covered for a, b in g.edges)


# -- cliques -----------------------------------------------------------------


def max_clique(n: int, adj: list[set[int]] | tuple, candidates: Iterable[int] | None = None) -> list[int]:
    """Maximum clique by branch and bound with a greedy-colouring bound.

    Among maximum cliques the lexicographically first found in increasing
    vertex order is returned.
    """
    nbr = [set(a) for a in adj]
    best: list[int] = []

    def colour_bound(cands: list[int]) -> int:
        colours: list[set[int]] = []
        for v in cands:
            for cls in colours:
                if not (nbr[v] & cls):
                    cls.add(v)
                    break
            else:
                colours.append({v})
        return len(colours)

    def expand(clique: list[int], cands: list[int]) -> None:
        nonlocal best
        if not cands:
            if len(clique) > len(best):
                best = list(clique)
            return
        if len(clique) + colour_bound(cands) <= len(best):
            return
        for i, v in enumerate(cands):
            if len(clique) + len(cands) - i <= len(best):
                return
            clique.append(v)
            expand(clique, [u for u in cands[i + 1:] if u in nbr[v]])
            clique.pop()

    start = sorted(range(n) if candidates is None else candidates)
    expand([], start)
    return best


# -- cut certificates --------------------------------------------------------


@dataclass(frozen=True)
class CutCertificate:
    """Witness that the chips of ``u`` and ``v`` can never meet."""

    u: int
    v: int
    cut: tuple[int, ...]

    def to_json(self) -> dict:
        return {"u": self.u, "v": self.v, "cut": list(self.cut)}


def verify_certificate(g: Graph, c: CutCertificate) -> bool:
    """Check separation, minimality, degree 2 in the cut, and that neither
    endpoint touches the cut."""
    cut = set(c.cut)
    if not cut or c.u == c.v or c.u in cut or c.v in cut:
        return False
    for x in (c.u, c.v, *cut):
        if not (isinstance(x, int) and 0 <= x < g.n):
            return False
    if any(g.degree(s) != 2 for s in cut):
        return False
    if any(s in g.adj[c.u] or s in g.adj[c.v] for s in cut):
        return False
    comps = components(g, removed=cut)
    cu = next(comp for comp in comps if c.u in comp)
    if c.v in cu:
        return False
    cv = next(comp for comp in comps if c.v in comp)
    # minimal u,v-separator: every cut vertex reaches both sides
    cu_set, cv_set = set(cu), set(cv)
    return all(
        any(x in cu_set for x in g.adj[s]) and any(x in cv_set for x in g.adj[s]) for s in cut
    )


@dataclass
class CutBound:
    value: int
    vertices: list[int]
    certificates: list[CutCertificate] = field(default_factory=list)


def certified_pairs(g: Graph, exhaustive: bool = False) -> dict[tuple[int, int], CutCertificate]:
    """One certificate per vertex pair that has one.

    Cuts are drawn from the degree-2 vertices: singletons and pairs by
    default, every subset when ``exhaustive``.
    """
    deg2 = [v for v in g.vertices() if g.degree(v) == 2]
    sizes = range(1, len(deg2) + 1) if exhaustive else range(1, min(2, len(deg2)) + 1)
    found: dict[tuple[int, int], CutCertificate] = {}
    for size in sizes:
        for cut in combinations(deg2, size):
            cut_set = set(cut)
            touching = set(cut)
            for s in cut:
                touching.update(g.adj[s])
            comps = components(g, removed=cut_set)
            full = [
                comp
                for comp in comps
                if all(any(x in comp for x in g.adj[s]) for s in cut)
            ]
            for c1, c2 in combinations(full, 2):
                for u in c1:
                    if u in touching:
                        continue
                    for v in c2:
                        if v in touching:
                            continue
                        key = (min(u, v), max(u, v))
                        if key not in found:
                            found[key] = CutCertificate(key[0], key[1], tuple(cut))
    return found


def cut_lower_bound(g: Graph, exhaustive: bool = False) -> CutBound:
    """Largest vertex set whose chips pairwise can never meet."""
    _require_connected(g)
    pairs = certified_pairs(g, exhaustive)
    if not pairs:
        return CutBound(1, [0] if g.n else [], [])
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    clique = max_clique(g.n, adj, [v for v in g.vertices() if adj[v]])
    certs = [pairs[(a, b)] for a, b in combinations(sorted(clique), 2)]
    return CutBound(len(clique), sorted(clique), certs)


def witness_replays(g: Graph, result: SolveResult) -> bool:
    final = replay(g, result.witness)
    return support(final) == result.upper


def unit_acquisition_by_components(g: Graph, budget: int = DEFAULT_BUDGET) -> int:
    """Sum of a_u over the components of a possibly disconnected graph.

    Chips never cross between components, so the minimum splits.
    """
    total = 0
    for comp in components(g):
        h, _ = g.induced(comp)
        res = unit_acquisition_number(h, budget)
        if res.value is None:
            raise BudgetExceeded(f"component {comp} exceeded {budget} states")
        total += res.value
    return total
