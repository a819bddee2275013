"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 solver inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from . import generators as gen
from .caterpillar import NotCaterpillar, a_u_caterpillar, build_assignment, condition_check, recognize
from .engine import replay, support
from .graph import Graph, GraphError, ParseError, from_edge_list, is_connected
from .solver import DEFAULT_BUDGET, cut_lower_bound, min_maximal_matching, unit_acquisition_number
from .synthesis import (
    Inapplicable,
    diam2_protocol,
    level2_protocol,
    matching_partition_protocol,
    radius2_partition_protocol,
)
from .verify import SUITES, Options, run_suite

SCHEMA = "unitacq.report/1"
RANDOM_SUITES = ("diameter2", "max-weight", "properties")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "timing": {"elapsed": round(self.elapsed, 6)},
        }

    def render(self) -> str:
        lines = [f"{self.command}"]
        for key, value in self.inputs.items():
            lines.append(f"  input {key}: {_fmt(value)}")
        _render(self.results, lines, "  ")
        return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, list) and value and isinstance(value[0], list) and len(value[0]) == 2:
        return " ".join(f"{a}->{b}" for a, b in value)
    if isinstance(value, list):
        return ", ".join(_fmt(v) for v in value) if value else "(none)"
    if value is None:
        return "-"
    return str(value)


def _render(obj: dict, lines: list[str], pad: str) -> None:
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            _render(value, lines, pad + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                _render(item, lines, pad + "    ")
        else:
            lines.append(f"{pad}{key}: {_fmt(value)}")


# -- input ---------------------------------------------------------------------


def read_graph(path: str) -> Graph:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return from_edge_list(text)


def _connected(g: Graph) -> Graph:
    if not is_connected(g):
        raise UsageError("graph is not connected")
    return g


# -- commands ------------------------------------------------------------------


def cmd_solve(args) -> tuple[RunReport, int]:
    g = _connected(read_graph(args.input))
    res = unit_acquisition_number(g, args.budget)
    rep = RunReport("solve", {"n": g.n, "m": g.m, "graph_hash": g.digest(), "budget": args.budget})
    rep.results = res.to_json(g)
    bounds = {"cut_lower_bound": cut_lower_bound(g).value}
    if g.m:
        bounds["min_maximal_matching"] = min_maximal_matching(g)[0]
        bounds["radius2_bound"] = (g.n - 1) // g.min_degree()
    rep.results["bounds"] = bounds
    return rep, EXIT_OK if res.value is not None else EXIT_INCONCLUSIVE


def cmd_caterpillar(args) -> tuple[RunReport, int]:
    g = read_graph(args.input)
    view = recognize(g)
    res = a_u_caterpillar(g, view)
    cond = condition_check(view)
    rep = RunReport("caterpillar", {"n": g.n, "graph_hash": g.digest()})
    rep.results = {
        "value": res.value,
        "spine": list(view.spine),
        "leaf_counts": view.leaf_counts,
        "condition": cond.ok,
        "failing_segment": list(cond.segment) if cond.segment else None,
        "pieces": [list(p) for p in res.spans],
    }
    if cond.ok and view.k >= 1:
        a = build_assignment(view)
        rep.results["assignment"] = [[leaf, cell[0], cell[1]] for leaf, _, cell in a.pairs]
    rep.results["protocol"] = res.protocol.to_json(g)
    rep.results["replay_support"] = support(replay(g, res.protocol))
    ok = rep.results["replay_support"] == res.value
    return rep, EXIT_OK if ok else EXIT_FAIL


SYNTH = {
    "level2": level2_protocol,
    "radius2": radius2_partition_protocol,
    "matching": matching_partition_protocol,
    "diam2": diam2_protocol,
}


def cmd_synthesize(args) -> tuple[RunReport, int]:
    g = _connected(read_graph(args.input))
    if args.method == "auto":
        outs = []
        for fn in SYNTH.values():
            try:
                out = fn(g)
            except (Inapplicable, GraphError):
                continue
            if out is not None:
                outs.append(out)
        out = min(outs, key=lambda o: o.final_support)
    else:
        out = SYNTH[args.method](g)
        if out is None:
            raise Inapplicable(f"{args.method} does not apply to this graph")
    rep = RunReport("synthesize", {"n": g.n, "m": g.m, "graph_hash": g.digest(), "method": args.method})
    rep.results = out.to_json(g)
    replayed = support(replay(g, out.protocol))
    rep.results["replay"] = "ok" if replayed == out.final_support else f"mismatch: {replayed}"
    return rep, EXIT_OK


def cmd_generate(args) -> tuple[RunReport | None, int]:
    protocol = None
    if args.family == "random":
        if args.seed is None:
            raise UsageError("random graphs need an explicit --seed")
        if args.n is None:
            raise UsageError("random graphs need --n")
        g = gen.random_graph(args.n, args.model, seed=args.seed, p=args.p)
    elif args.family == "td":
        if args.d is None:
            raise UsageError("td needs --d")
        tree = gen.make_td(args.d, args.branching)
        g, protocol = tree.graph, tree.protocol
    else:
        spec = gen.FamilySpec(args.family, n=args.n, m=args.m, k=args.k, d=args.d, branching=args.branching)
        g = gen.make(spec)
    if args.family in ("hk", "gmk") and args.k is not None and args.k < 4:
        print(f"note: k = {args.k} < 4, the lower bound is not sharp", file=sys.stderr)
    text = g.to_dot() if args.format == "dot" else g.to_edge_list()
    sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")
    if args.with_protocol:
        if protocol is None:
            raise UsageError("--with-protocol is only available for td")
        if args.protocol_out:
            with open(args.protocol_out, "w", encoding="utf-8") as fh:
                fh.write(protocol.dumps(g) + "\n")
        else:
            sys.stdout.write(protocol.dumps(g) + "\n")
    return None, EXIT_OK


def cmd_verify(args) -> tuple[RunReport, int]:
    if args.suite in RANDOM_SUITES and args.seed is None:
        raise UsageError(f"suite {args.suite} is randomized; pass --seed")
    opt = Options(max_n=args.max_n, seed=args.seed or 0, jobs=args.jobs, count=args.count, budget=args.budget)
    sr = run_suite(args.suite, opt)
    rep = RunReport(
        "verify",
        {"suite": args.suite, "max_n": args.max_n, "seed": args.seed, "count": args.count},
    )
    rep.results = {"passed": sr.passed, "claims": [c.to_json() for c in sr.claims]}
    return rep, EXIT_OK if sr.passed else EXIT_FAIL


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitacq", description="Unit acquisition on graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_input(sp):
        sp.add_argument("--input", "-i", default="-", help="edge-list file, or - for stdin")
        sp.add_argument("--json", action="store_true", help="print the JSON report")

    sp = sub.add_parser("solve", help="exact a_u with witness and bounds")
    graph_input(sp)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="state limit")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("caterpillar", help="a_u of a caterpillar with its protocol")
    graph_input(sp)
    sp.set_defaults(func=cmd_caterpillar)

    sp = sub.add_parser("synthesize", help="build an upper-bound protocol")
    graph_input(sp)
    sp.add_argument("--method", choices=["auto", *SYNTH], default="auto")
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("generate", help="emit a named graph family")
    sp.add_argument("family", choices=[*gen.FAMILIES, "random"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--branching", type=int, default=5, choices=[4, 5])
    sp.add_argument("--model", choices=["gnp", "diameter2"], default="gnp")
    sp.add_argument("--p", type=float, default=0.5)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=["edgelist", "dot"], default="edgelist")
    sp.add_argument("--with-protocol", action="store_true", help="also print the T_d protocol JSON")
    sp.add_argument("--protocol-out", help="write the protocol JSON here instead of stdout")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=list(SUITES))
    sp.add_argument("--max-n", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--count", type=int, help="instances for sampled suites")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    t0 = time.perf_counter()
    try:
        rep, code = args.func(args)
    except NotCaterpillar as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ParseError, GraphError, gen.FamilyError, Inapplicable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if rep is not None:
        rep.elapsed = time.perf_counter() - t0
        print(json.dumps(rep.to_json(), indent=2) if args.json else rep.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
