"""Caterpillars: recognition, the pyramid condition for a_u = 1, protocol
synthesis from a minimum-cost leaf-to-cell assignment, and the greedy
left-to-right algorithm for a_u of any caterpillar.

Spine positions are ``0..k+1``; positions ``1..k`` are internal.  Pyramid
cells over the internal vertices are ``(i, h)`` with ``1 <= h <= mu_i`` and
``mu_i = min(i, k + 1 - i)``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .engine import (
    Protocol,
    UnitMove,
    all_ones,
    collect_forest,
    collect_small_tree,
    replay,
)
from .graph import Graph, GraphError, components, diameter


class NotCaterpillar(GraphError):
    def __init__(self, reason: str, witness):
        super().__init__(f"not a caterpillar: {reason} (witness {witness})")
        self.reason = reason
        self.witness = witness


class OrderingError(RuntimeError):
    """The segment diagram of an assignment admits no legal fill order."""


@dataclass(frozen=True)
class CaterpillarView:
    spine: tuple[int, ...]
    leaves: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.spine) - 2

    @property
    def leaf_counts(self) -> list[int]:
        return [len(x) for x in self.leaves]

    @property
    def internal(self) -> tuple[int, ...]:
        return self.spine[1:-1]

    @property
    def n(self) -> int:
        return len(self.spine) + sum(len(x) for x in self.leaves)

    def reversed(self) -> "CaterpillarView":
        return CaterpillarView(self.spine[::-1], self.leaves[::-1])

    def vertices(self) -> list[int]:
        out = list(self.spine)
        for ls in self.leaves:
            out.extend(ls)
        return sorted(out)


def recognize(g: Graph) -> CaterpillarView:
    """Spine and leaf lists of a caterpillar.

    The spine is read in the direction whose leaf-count sequence is
    lexicographically smaller; palindromic sequences start at the smaller
    end id.  Raises :class:`NotCaterpillar` with a witness otherwise.
    """
    if g.n == 0:
        raise NotCaterpillar("empty graph", None)
    comps = components(g)
    if len(comps) > 1:
        raise NotCaterpillar("disconnected", comps[1][0])
    if g.m != g.n - 1:
        raise NotCaterpillar("contains a cycle", _cycle_edge(g))
    if g.n <= 2:
        return CaterpillarView((0,), (tuple(range(1, g.n)),))
    inner = [v for v in g.vertices() if g.degree(v) >= 2]
    inner_set = set(inner)
    for v in inner:
        if sum(1 for x in g.adj[v] if x in inner_set) > 2:
            raise NotCaterpillar("non-leaf vertex branches off the spine", v)
    ends = [v for v in inner if sum(1 for x in g.adj[v] if x in inner_set) <= 1]
    start = min(ends)
    spine = [start]
    prev = -1
    while True:
        nxt = [x for x in g.adj[spine[-1]] if x in inner_set and x != prev]
        if not nxt:
            break
        prev = spine[-1]
        spine.append(nxt[0])
    leaves = tuple(tuple(x for x in g.adj[v] if x not in inner_set) for v in spine)
    counts = [len(x) for x in leaves]
    if counts[::-1] < counts or (counts[::-1] == counts and spine[-1] < spine[0]):
        spine = spine[::-1]
        leaves = leaves[::-1]
    return CaterpillarView(tuple(spine), leaves)


def is_caterpillar(g: Graph) -> bool:
    try:
        recognize(g)
    except NotCaterpillar:
        return False
    return True


def _cycle_edge(g: Graph) -> tuple[int, int]:
    parent = {0: -1}
    stack = [0]
    tree = set()
    while stack:
        u = stack.pop()
        for v in g.adj[u]:
            if v not in parent:
                parent[v] = u
                tree.add((min(u, v), max(u, v)))
                stack.append(v)
    return min(e for e in g.edges if e not in tree)


# -- the pyramid condition ---------------------------------------------------


def ell(s: int) -> int:
    """Number of cells in a pyramid over ``s`` consecutive spine vertices."""
    if s < 1:
        raise ValueError("segment length must be positive")
    return ((s + 2) // 2) * ((s + 1) // 2)


def mu(i: int, s: int) -> int:
    return min(i, s + 1 - i)


@dataclass
class Pyramid:
    s: int
    cells: list[tuple[int, int]]


def pyramid(s: int) -> Pyramid:
    return Pyramid(s, [(i, h) for i in range(1, s + 1) for h in range(1, mu(i, s) + 1)])


@dataclass
class ConditionResult:
    ok: bool
    segment: tuple[int, int] | None = None  # internal positions, inclusive
    sums_evaluated: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _scan(counts: Sequence[int], lo: int, hi: int) -> tuple[int | None, int]:
    """Incremental check of every segment of ``counts[lo..hi]``.

    Returns the first right end at which some segment fails (or None) and
    the number of segment sums evaluated.
    """
    prefix = [0]
    evaluated = 0
    for r in range(lo, hi + 1):
        prefix.append(prefix[-1] + counts[r])
        top = len(prefix) - 1
        for length in range(1, r - lo + 2):
            evaluated += 1
            if prefix[top] - prefix[top - length] < ell(length):
                return r, evaluated
    return None, evaluated


def _shortest_violation(counts: Sequence[int], lo: int, hi: int) -> tuple[int, int] | None:
    for length in range(1, hi - lo + 2):
        need = ell(length)
        total = sum(counts[lo:lo + length])
        for start in range(lo, hi - length + 2):
            if start > lo:
                total += counts[start + length - 1] - counts[start - 1]
            if total < need:
                return start, start + length - 1
    return None


def condition_check(view: CaterpillarView) -> ConditionResult:
    """Every run of ``s`` consecutive internal spine vertices carries at
    least ``ell(s)`` leaves.  On failure the shortest violating run (leftmost
    among those) is reported as internal positions."""
    counts = view.leaf_counts
    k = view.k
    if k < 1:
        return ConditionResult(True)
    fail, evaluated = _scan(counts, 1, k)
    if fail is None:
        return ConditionResult(True, None, evaluated)
    return ConditionResult(False, _shortest_violation(counts, 1, k), evaluated)


# -- assignment --------------------------------------------------------------


def hungarian(cost: list[list[int]]) -> list[int]:
    """Minimum-cost perfect assignment for a square integer matrix.

    Returns ``col_of_row``.  Rows are inserted in order and the first column
    attaining a minimum is taken, so the output is deterministic.
    """
    n = len(cost)
    inf = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = 0
            row = cost[i0 - 1]
            ui = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    col_of_row = [0] * n
    for j in range(1, n + 1):
        if p[j]:
            col_of_row[p[j] - 1] = j - 1
    return col_of_row


@dataclass
class Assignment:
    """Leaves of internal spine vertices matched to pyramid cells.

    ``pairs`` holds ``(leaf, j, (i, h))``: the leaf hangs at spine position
    ``j`` and fills cell ``(i, h)``.  Leaves matched to padding cells are
    listed in ``spare``.
    """

    pairs: list[tuple[int, int, tuple[int, int]]]
    spare: list[int] = field(default_factory=list)

    @property
    def cost(self) -> int:
        return sum(abs(i - j) for _, j, (i, _h) in self.pairs)


def cell_cost(j: int, cell: tuple[int, int]) -> int | None:
    """Spine steps for a leaf at ``j`` to fill ``cell``; None if forbidden."""
    i, h = cell
    d = abs(i - j)
    return d if h > d else None


def build_assignment(view: CaterpillarView) -> Assignment | None:
    """Minimum-cost assignment of internal leaves to pyramid cells, padded
    with free cells; None when no finite-cost assignment exists."""
    k = view.k
    if k < 1:
        return Assignment([])
    rows = [(leaf, j) for j in range(1, k + 1) for leaf in view.leaves[j]]
    cells = pyramid(k).cells
    if len(rows) < len(cells):
        return None
    size = len(rows)
    forbidden = k * len(cells) + 1
    cost = []
    for _, j in rows:
        row = []
        for c in cells:
            d = cell_cost(j, c)
            row.append(forbidden if d is None else d)
        row.extend([0] * (size - len(cells)))
        cost.append(row)
    col_of_row = hungarian(cost)
    pairs = []
    spare = []
    for r, col in enumerate(col_of_row):
        leaf, j = rows[r]
        if col >= len(cells):
            spare.append(leaf)
            continue
        if cost[r][col] == forbidden:
            return None
        pairs.append((leaf, j, cells[col]))
    pairs.sort(key=lambda p: p[2])
    return Assignment(pairs, sorted(spare))


# -- segment diagram and fill order -------------------------------------------


def _points(j: int, cell: tuple[int, int]) -> dict[int, int]:
    i, h = cell
    d = abs(i - j)
    step = 1 if i >= j else -1
    return {j + t * step: h - d + t for t in range(d + 1)}


def _crossing_pairs(segs: list[tuple[int, tuple[int, int]]]) -> list[tuple[int, int]]:
    """Pairs of non-collinear segments crossing at a shared lattice point,
    one extending above it and the other below."""
    bad = []
    info = []
    for j, cell in segs:
        pts = _points(j, cell)
        i, h = cell
        slope = 0 if i == j else (1 if i > j else -1)
        lo, hi = h - abs(i - j), h
        info.append((pts, slope, h - slope * i, lo, hi))
    for a in range(len(segs)):
        pa, sa, ca, loa, hia = info[a]
        if sa == 0:
            continue
        for b in range(a + 1, len(segs)):
            pb, sb, cb, lob, hib = info[b]
            if sb == 0 or (sa == sb and ca == cb):
                continue
            for x, y in pa.items():
                if pb.get(x) != y:
                    continue
                if (hia > y and lob < y) or (hib > y and loa < y):
                    bad.append((a, b))
    return bad


def fill_order(assignment: Assignment) -> list[int]:
    """Order of the assignment's pairs in which every chip can travel.

    A chip riding its segment needs, at every column it touches, exactly the
    cells below its point filled.  So a pair whose cell lies below a point
    of another pair's segment goes first, and a pair whose cell is at or
    above such a point goes after.
    """
    segs = [(j, cell) for _, j, cell in assignment.pairs]
    if _crossing_pairs(segs):
        raise OrderingError("segments cross; the assignment is not minimum cost")
    pts = [_points(j, cell) for j, cell in segs]
    m = len(segs)
    succ: list[set[int]] = [set() for _ in range(m)]
    for d in range(m):
        for e in range(m):
            if d == e:
                continue
            x, y = segs[e][1]
            yd = pts[d].get(x)
            if yd is None:
                continue
            if y < yd:
                succ[e].add(d)
            else:
                succ[d].add(e)
    indeg = [0] * m
    for s in succ:
        for t in s:
            indeg[t] += 1
    heap = [(segs[e][1], e) for e in range(m) if indeg[e] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, e = heapq.heappop(heap)
        order.append(e)
        for t in succ[e]:
            indeg[t] -= 1
            if indeg[t] == 0:
                heapq.heappush(heap, (segs[t][1], t))
    if len(order) != m:
        raise OrderingError("fill order has a cycle")
    return order


def assignment_to_protocol(view: CaterpillarView, assignment: Assignment) -> Protocol:
    """Moves that fill every pyramid cell, leaving weight ``1 + mu_i`` on each
    internal spine vertex."""
    out = Protocol()
    spine = view.spine
    for e in fill_order(assignment):
        leaf, j, (i, _h) = assignment.pairs[e]
        out.add(leaf, spine[j])
        step = 1 if i >= j else -1
        for x in range(j, i, step):
            out.add(spine[x], spine[x + step])
    return out


def peaks(k: int) -> list[int]:
    """Internal positions carrying the tallest pyramid column."""
    return [(k + 1) // 2] if k % 2 else [k // 2, k // 2 + 1]


def synthesize(g: Graph, view: CaterpillarView | None = None) -> Protocol | None:
    """Protocol collecting all weight of a caterpillar on one vertex, or None
    when the pyramid condition fails."""
    view = view or recognize(g)
    if view.k < 1:
        return collect_small_tree(g, view.vertices())
    assignment = build_assignment(view)
    if assignment is None:
        return None
    proto = assignment_to_protocol(view, assignment)
    w = replay(g, proto)
    roots = [view.spine[p] for p in peaks(view.k)]
    proto.extend(collect_forest(g, w, roots))
    return proto


# -- greedy algorithm for any caterpillar ------------------------------------


@dataclass
class CaterpillarResult:
    value: int
    pieces: list[list[int]]
    spans: list[tuple[int, int]]
    protocol: Protocol
    sums_evaluated: int = 0


def _piece_internal(counts: Sequence[int], a: int, b: int) -> tuple[int, int]:
    """Internal spine positions (inclusive range, possibly empty) of the
    sub-caterpillar made of spine positions ``a..b`` and their leaves.  A
    leafless end vertex is a leaf of the piece."""
    s = a + 1 if a < b and counts[a] == 0 else a
    e = b - 1 if b > a and counts[b] == 0 else b
    return s + 1, e - 1


def greedy_pieces(counts: Sequence[int]) -> tuple[list[tuple[int, int]], int]:
    """Split spine positions into the fewest runs whose sub-caterpillars
    satisfy the pyramid condition, taking the longest feasible run from the
    left each time.  Also returns the number of segment sums evaluated."""
    L = len(counts)
    spans = []
    evaluated = 0
    a = 0
    while a < L:
        b = a
        prefix = None
        checked = None
        lo = None
        while b + 1 < L:
            nb = b + 1
            lo_n, hi_n = _piece_internal(counts, a, nb)
            if lo is None or lo_n != lo:
                lo, prefix, checked = lo_n, [0], lo_n - 1
            ok = True
            while checked < hi_n:
                r = checked + 1
                prefix.append(prefix[-1] + counts[r])
                top = len(prefix) - 1
                for length in range(1, r - lo + 2):
                    evaluated += 1
                    if prefix[top] - prefix[top - length] < ell(length):
                        ok = False
                        break
                if not ok:
                    break
                checked = r
            if not ok:
                break
            b = nb
        spans.append((a, b))
        a = b + 1
    return spans, evaluated


def a_u_caterpillar(g: Graph, view: CaterpillarView | None = None) -> CaterpillarResult:
    """Exact a_u of a caterpillar with a partition into pieces of a_u = 1 and
    a protocol reaching one vertex per piece."""
    view = view or recognize(g)
    if view.k < 1 or diameter(g) <= 3:
        verts = view.vertices()
        return CaterpillarResult(1, [verts], [(0, len(view.spine) - 1)], collect_small_tree(g, verts))
    spans, evaluated = greedy_pieces(view.leaf_counts)
    pieces = []
    proto = Protocol()
    for a, b in spans:
        verts = sorted(v for p in range(a, b + 1) for v in (view.spine[p], *view.leaves[p]))
        pieces.append(verts)
        sub, back = g.induced(verts)
        sub_proto = synthesize(sub)
        if sub_proto is None:
            raise RuntimeError(f"piece {a}..{b} fails the pyramid condition")
        proto.extend(sub_proto.relabeled(back))
    return CaterpillarResult(len(spans), pieces, spans, proto, evaluated)
