"""Verification suites: each checks a family of claims and reports pass/fail
with instance counts.  Per-instance work can fan out to a process pool;
results are merged in instance order so reports are deterministic."""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import generators as gen
from .caterpillar import a_u_caterpillar, condition_check, recognize
from .engine import (
    UnitMove,
    all_ones,
    drain_ascending,
    is_legal,
    potential,
    replay,
    support,
)
from .graph import Graph, RootedTreeView, diameter, girth, is_connected
from .solver import (
    cut_lower_bound,
    max_acquirable_weight,
    min_maximal_matching,
    unit_acquisition_by_components,
    unit_acquisition_number,
)
from .synthesis import (
    diam2_protocol,
    level2_protocol,
    matching_partition_protocol,
    radius2_partition_protocol,
)


@dataclass
class Claim:
    name: str
    passed: bool
    checked: int = 0
    failures: int = 0
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    suite: str
    claims: list[Claim] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def add(self, name: str, passed: bool, checked: int = 1, failures: int = 0, detail: str = "") -> None:
        self.claims.append(Claim(name, bool(passed), checked, failures, detail))

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "elapsed": round(self.elapsed, 3),
            "claims": [c.to_json() for c in self.claims],
        }


@dataclass
class Options:
    max_n: int | None = None
    seed: int = 0
    jobs: int = 1
    count: int | None = None
    budget: int = 50_000_000


def pmap(fn: Callable, items: Iterable, jobs: int = 1) -> list:
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (jobs * 8))))


def _tally(report: SuiteReport, name: str, outcomes: list[str | None]) -> None:
    bad = [o for o in outcomes if o]
    report.add(name, not bad, len(outcomes), len(bad), "; ".join(bad[:3]))


# -- paths and cycles ----------------------------------------------------------


def _path_cycle_case(case: tuple[str, int]) -> str | None:
    kind, n = case
    g = gen.path(n) if kind == "path" else gen.cycle(n)
    got = unit_acquisition_number(g).value
    want = math.ceil(n / 4)
    return None if got == want else f"{kind} {n}: got {got}, want {want}"


def suite_paths_cycles(opt: Options) -> SuiteReport:
    max_n = opt.max_n or 12
    rep = SuiteReport("paths-cycles")
    _tally(rep, "a_u(P_n) = ceil(n/4)", pmap(_path_cycle_case, [("path", n) for n in range(2, max_n + 1)], opt.jobs))
    _tally(rep, "a_u(C_n) = ceil(n/4)", pmap(_path_cycle_case, [("cycle", n) for n in range(3, max_n + 1)], opt.jobs))
    return rep


# -- small named graphs --------------------------------------------------------


def suite_figures(opt: Options) -> SuiteReport:
    rep = SuiteReport("figures")
    g = gen.fig1()
    rep.add("fig1 shape: 7 vertices, 7 edges, one triangle", g.n == 7 and g.m == 7 and girth(g) == 3)
    rep.add("fig1 a_u = 1", unit_acquisition_number(g).value == 1)
    deleted = [unit_acquisition_by_components(g.remove_edge(*e)) for e in g.sorted_edges()]
    rep.add("fig1 minus any edge has a_u = 2", all(v == 2 for v in deleted), len(deleted), sum(v != 2 for v in deleted))
    t = gen.fig4()
    rep.add("fig4 shape: 10 vertices, max degree 3", t.n == 10 and t.max_degree() == 3)
    rep.add("fig4 a_u = 1", unit_acquisition_number(t).value == 1)
    rep.add("fig4 meets the caterpillar condition", condition_check(recognize(t)).ok)
    return rep


# -- caterpillars against the solver -------------------------------------------


def _caterpillar_case(g: Graph) -> str | None:
    res = a_u_caterpillar(g)
    exact = unit_acquisition_number(g).value
    label = ",".join(map(str, recognize(g).leaf_counts))
    if res.value != exact:
        return f"[{label}] formula {res.value} vs solver {exact}"
    if support(replay(g, res.protocol)) != res.value:
        return f"[{label}] protocol does not reach {res.value}"
    if condition_check(recognize(g)).ok != (exact == 1):
        return f"[{label}] condition disagrees with a_u = {exact}"
    return None


def suite_caterpillar_oracle(opt: Options) -> SuiteReport:
    max_n = opt.max_n or 12
    rep = SuiteReport("caterpillar-oracle")
    _tally(rep, f"caterpillar formula matches solver for n <= {max_n}", pmap(_caterpillar_case, gen.enumerate_caterpillars(max_n), opt.jobs))
    return rep


# -- diameter 2 ----------------------------------------------------------------


def diameter2_corpus(count: int, seed: int, max_n: int = 12) -> list[Graph]:
    """Seeded diameter-2 graphs with ``5 <= n <= max_n``, C_5 and Petersen
    excluded."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(5, max_n)
        p = rng.uniform(0.25, 0.75)
        g = gen.random_graph(n, "diameter2", seed=rng.getrandbits(63), p=p)
        if diam2_protocol(g).method.startswith("special"):
            continue
        out.append(g)
    return out


def _diam2_case(g: Graph) -> str | None:
    out = diam2_protocol(g)
    if out.final_support != 1:
        return f"{out.method} reached {out.final_support} on {g.sorted_edges()}"
    if unit_acquisition_number(g).value != 1:
        return f"solver disagrees on {g.sorted_edges()}"
    return None


def suite_diameter2(opt: Options) -> SuiteReport:
    rep = SuiteReport("diameter2")
    p = gen.petersen()
    res = unit_acquisition_number(p, opt.budget)
    rep.add("Petersen a_u = 2 by exhaustive search", res.value == 2, detail=f"{res.states_explored} states")
    lv = level2_protocol(p)
    rep.add("Petersen level-2 protocol reaches 2", lv is not None and lv.final_support == 2)
    rep.add("Petersen diameter-2 protocol reaches 2", diam2_protocol(p).final_support == 2)
    rep.add("C_5 diameter-2 protocol reaches 2", diam2_protocol(gen.cycle(5)).final_support == 2)
    corpus = diameter2_corpus(opt.count or 1000, opt.seed, opt.max_n or 12)
    _tally(rep, "diameter-2 protocol reaches 1 and solver agrees", pmap(_diam2_case, corpus, opt.jobs))
    return rep


# -- bound sandwich ------------------------------------------------------------


def _bounds_case(g: Graph) -> str | None:
    exact = unit_acquisition_number(g).value
    lower = cut_lower_bound(g).value
    mm, _ = min_maximal_matching(g)
    rb = (g.n - 1) // g.min_degree()
    if not lower <= exact <= min(mm, rb):
        return f"{g.sorted_edges()}: cut {lower}, a_u {exact}, matching {mm}, (n-1)/delta {rb}"
    ups = [radius2_partition_protocol(g).final_support, matching_partition_protocol(g).final_support]
    if ups[0] > rb or ups[1] > mm:
        return f"{g.sorted_edges()}: partition protocols {ups} exceed bounds {rb}, {mm}"
    lv = level2_protocol(g)
    if lv is not None:
        ups.append(lv.final_support)
    if diameter(g) == 2:
        ups.append(diam2_protocol(g).final_support)
    if min(ups) < exact:
        return f"{g.sorted_edges()}: a protocol beat the exact value {exact}"
    return None


def suite_bounds(opt: Options) -> SuiteReport:
    max_n = opt.max_n or 8
    rep = SuiteReport("bounds")
    graphs = list(gen.enumerate_connected_graphs(max_n, min_n=2))
    _tally(rep, f"cut bound <= a_u <= min(matching, (n-1)/delta) on all connected graphs, n <= {max_n}", pmap(_bounds_case, graphs, opt.jobs))
    return rep


# -- T_d trees -----------------------------------------------------------------


def suite_td(opt: Options) -> SuiteReport:
    max_d = opt.max_n or 8
    rep = SuiteReport("td")
    fails = []
    for d in range(1, max_d + 1):
        t = gen.make_td(d)
        if support(replay(t.graph, t.protocol)) != 1:
            fails.append(f"d={d} protocol")
        if t.active_counts != gen.td_recurrence(d):
            fails.append(f"d={d} counts {t.active_counts}")
        if d >= 2 and t.active_counts[-1] != gen.td_closed_form(d):
            fails.append(f"d={d} closed form")
        if t.graph.max_degree() > 5:
            fails.append(f"d={d} degree")
    rep.add(f"T_d (branching 5) collects to one vertex, d <= {max_d}", not fails, max_d, len(fails), "; ".join(fails))
    rep.add(
        "a_d = 4a_(d-1) - 4a_(d-2) from d = 4",
        all(gen.td_recurrence(d)[-1] == 4 * gen.td_recurrence(d)[-2] - 4 * gen.td_recurrence(d)[-3] for d in range(4, max_d + 1)),
        max(0, max_d - 3),
    )
    rep.add(
        "alternative closed form (3d+5)2^(d-2) is inconsistent with a_2 = 4",
        gen.td_alt_closed_form(2) != gen.td_recurrence(2)[-1],
        detail=f"alternative form gives {gen.td_alt_closed_form(2)} at d = 2",
    )
    t4 = gen.make_td(5, 4)
    rep.add("branching 4 counts (3, 5, 6, 3)", t4.active_counts[1:] == [3, 5, 6, 3], detail=str(t4.active_counts))
    g56, p56 = gen.grow_td_leaves(t4)
    rep.add("branching 4: 47 vertices, 56 after the last leaves, still a_u = 1", t4.graph.n == 47 and g56.n == 56 and support(replay(g56, p56)) == 1)
    try:
        gen.make_td(6, 4)
        dies = False
    except gen.FamilyError:
        dies = True
    rep.add("branching 4 cannot reach depth 6", dies)
    return rep


# -- G_{m,k} -------------------------------------------------------------------


def suite_gmk(opt: Options) -> SuiteReport:
    rep = SuiteReport("gmk")
    fails = []
    checked = 0
    for m in range(1, (opt.max_n or 4) + 1):
        for k in (4, 5):
            G = gen.g_mk(m, k)
            low = cut_lower_bound(G.graph).value
            up = matching_partition_protocol(G.graph).final_support
            checked += 1
            if not low == up == m:
                fails.append(f"G_{m},{k}: cut {low}, matching protocol {up}")
    rep.add("cut bound = matching protocol = m", not fails, checked, len(fails), "; ".join(fails))
    return rep


# -- max acquirable weight -----------------------------------------------------


def _max_weight(g: Graph) -> int:
    return max_acquirable_weight(g).global_max


def suite_max_weight(opt: Options) -> SuiteReport:
    rep = SuiteReport("max-weight")
    rep.add("K_2 reaches 2", _max_weight(gen.path(2)) == 2)
    paths = [gen.path(n) for n in range(2, 11)]
    vals = pmap(_max_weight, paths, opt.jobs)
    rep.add("max over trees with max degree 2, n <= 10, is 4", max(vals) == 4, len(vals), detail=str(vals))
    rng = random.Random(opt.seed)
    trees = []
    while len(trees) < (opt.count or 200):
        t = gen.random_tree(rng.randint(4, opt.max_n or 11), rng, max_degree=3)
        if t.max_degree() == 3:
            trees.append(t)
    vals = pmap(_max_weight, trees, opt.jobs)
    rep.add("sampled trees with max degree 3 stay at or below 10", max(vals) <= 10, len(vals), sum(v > 10 for v in vals), f"max seen {max(vals)}")
    return rep


# -- randomized properties -----------------------------------------------------


def _random_connected(rng: random.Random, lo: int, hi: int) -> Graph:
    while True:
        g = gen.random_graph(rng.randint(lo, hi), "gnp", seed=rng.getrandbits(63), p=rng.uniform(0.2, 0.8))
        if is_connected(g):
            return g


def random_walk(g: Graph, rng: random.Random) -> list[UnitMove]:
    """Random legal moves from all-ones until none is left."""
    w = list(all_ones(g.n))
    moves = []
    while True:
        legal = [(u, v) for u in g.vertices() if w[u] for v in g.adj[u] if w[v] >= w[u]]
        if not legal:
            return moves
        u, v = rng.choice(legal)
        w[u] -= 1
        w[v] += 1
        moves.append(UnitMove(u, v))


def random_ascending_tree(rng: random.Random, n: int) -> tuple[Graph, RootedTreeView, list[int]]:
    """Random tree with weights assigned bottom-up so that it is ascending."""
    t = gen.random_tree(n, rng)
    parent = {v: min(u for u in t.adj[v] if u < v) for v in range(1, n)}
    kids: dict[int, list[int]] = {v: [] for v in range(n)}
    for v, p in parent.items():
        kids[p].append(v)
    w = [0] * n
    for v in reversed(range(n)):
        # children have larger ids, so they are already weighted
        need = max((w[c] + (1 if kids[c] else 0) for c in kids[v]), default=1)
        w[v] = need + rng.randint(0, 2)
    return t, RootedTreeView(0, parent), w


def _property_case(case: tuple[str, int]) -> str | None:
    kind, seed = case
    rng = random.Random(seed)
    if kind == "walk":
        g = _random_connected(rng, 2, 9)
        w = all_ones(g.n)
        moves = random_walk(g, rng)
        for m in moves:
            if not is_legal(g, w, m):
                return f"seed {seed}: illegal move in walk"
            nxt = replay(g, [m], w)
            if sum(nxt) != sum(w):
                return f"seed {seed}: weight not conserved"
            if potential(nxt) < potential(w) + 2:
                return f"seed {seed}: potential rose by less than 2"
            w = nxt
        if len(moves) > (g.n * g.n - g.n) // 2:
            return f"seed {seed}: {len(moves)} moves on {g.n} vertices"
        return None
    if kind == "mono":
        g = _random_connected(rng, 2, 7)
        non = list(g.non_edges())
        if not non:
            return None
        e = rng.choice(non)
        a, b = unit_acquisition_number(g).value, unit_acquisition_number(g.add_edge(*e)).value
        return None if b <= a else f"seed {seed}: adding {e} raised a_u from {a} to {b}"
    if kind == "drain":
        t, view, w = random_ascending_tree(rng, rng.randint(1, 12))
        final = replay(t, drain_ascending(t, view, w), w)
        return None if final[0] == sum(w) and support(final) == 1 else f"seed {seed}: drain left {final}"
    raise ValueError(kind)


PROPERTY_NAMES = {
    "walk": "random walks: legal, weight conserved, potential +2 per move, at most (n^2-n)/2 moves",
    "mono": "adding an edge never raises a_u",
    "drain": "ascending trees drain completely onto the root",
}


def suite_properties(opt: Options) -> SuiteReport:
    rep = SuiteReport("properties")
    count = opt.count or 10_000
    for kind, name in PROPERTY_NAMES.items():
        cases = [(kind, opt.seed * 1_000_003 + i) for i in range(count)]
        _tally(rep, name, pmap(_property_case, cases, opt.jobs))
    return rep


SUITES: dict[str, Callable[[Options], SuiteReport]] = {
    "paths-cycles": suite_paths_cycles,
    "caterpillar-oracle": suite_caterpillar_oracle,
    "diameter2": suite_diameter2,
    "bounds": suite_bounds,
    "td": suite_td,
    "gmk": suite_gmk,
    "figures": suite_figures,
    "max-weight": suite_max_weight,
    "properties": suite_properties,
}


def run_suite(name: str, opt: Options | None = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    t0 = time.perf_counter()
    rep = SUITES[name](opt or Options())
    rep.elapsed = time.perf_counter() - t0
    return rep
