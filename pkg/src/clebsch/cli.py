"""Command line entry points.

Exit status: 0 success or valid, 1 invalid certificate or claim
counterexample, 2 usage or format error, 3 stuck or budget exhausted.
Reports go to stdout as ``key: value`` lines; timings and transcripts go
to stderr so stdout stays comparable between runs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import equivalences as eq
from .graphs import (
    BudgetExhausted,
    Graph,
    GraphFormatError,
    InfeasibleError,
    cubic_completion,
    dump_edge_list,
    gen_high_girth_cubic,
    girth,
    read_graph,
    shortest_cycle,
    to_dot,
)
from .labeling import DEFAULT_COST, CostTable, dump_labeling
from .menus import DEFAULT_CAPACITY, CapacityExceeded, verify_claim
from .optimizer import TREE_DEPTH, solve

OK, INVALID, USAGE, STUCK = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    cert: str | None = None
    out: str | None = None
    d1: int = 9
    d2: int = 8
    cost: CostTable = DEFAULT_COST
    prune: bool = False
    jobs: int = 1
    seed: int = 0
    max_iters: int | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.d1 < 2 or self.d2 < 1:
            raise UsageError("need --d1 >= 2 and --d2 >= 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.max_iters is not None and self.max_iters < 0:
            raise UsageError("--max-iters must be >= 0")


def _cost(text: str) -> CostTable:
    try:
        return CostTable.parse(text, strict=False)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(lines, stream=None) -> None:
    stream = stream or sys.stdout
    for ln in lines:
        print(ln, file=stream)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --------------------------------------------------------------------------


def cmd_verify_claim(cfg: RunConfig) -> int:
    log = lambda s: print(s, file=sys.stderr)  # noqa: E731
    kw = dict(d1=cfg.d1, d2=cfg.d2, a=cfg.cost, jobs=cfg.jobs, capacity=cfg.extra["capacity"], log=log)
    dump = cfg.extra.get("dump_dir")
    if dump:
        Path(dump).mkdir(parents=True, exist_ok=True)
    try:
        rep = verify_claim(prune=cfg.prune, dump_dir=dump, **kw)
        _emit(rep.lines())
        _emit(rep.timing_lines(), sys.stderr)
        if cfg.extra.get("cross_check"):
            other = verify_claim(prune=not cfg.prune, dump_dir=None, **kw)
            agree = other.verdict == rep.verdict
            print(f"cross_check prune={'on' if other.prune else 'off'}: {'OK' if other.verdict else 'COUNTEREXAMPLE'}")
            print(f"cross_check_agrees: {'yes' if agree else 'no'}")
            if not agree:
                return INVALID
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("verdict: CAPACITY_EXCEEDED")
        return STUCK
    return OK if rep.verdict else INVALID


def _prepare(G: Graph, aux: str | None) -> tuple[Graph, str]:
    if G.max_degree() > 3:
        raise UsageError("input graph has a vertex of degree > 3")
    if G.is_cubic():
        return G, "none"
    if aux is None:
        raise UsageError("input graph is not cubic; pass an auxiliary regular graph with --aux")
    H = read_graph(aux)
    try:
        return cubic_completion(G, H), f"{H.n} copies"
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_solve(cfg: RunConfig) -> int:
    G = read_graph(cfg.graph)
    C, how = _prepare(G, cfg.extra.get("aux"))
    rep = solve(
        C, cfg.cost, max_iters=cfg.max_iters, depth=cfg.extra.get("depth", TREE_DEPTH),
        adaptive=cfg.extra.get("adaptive", False), check_steps=cfg.extra.get("check_steps", False),
    )
    print(f"vertices: {G.n}")
    print(f"edges: {G.m}")
    print(f"completion: {how}")
    print(f"iterations: {rep.iterations}")
    print(f"initial_cost: {rep.trace[0]}")
    print(f"final_cost: {rep.trace[-1]}")
    print(f"outcome: {rep.outcome}")
    if cfg.extra.get("trace"):
        Path(cfg.extra["trace"]).write_text(rep.trace_text())
    if rep.outcome == "stuck":
        u, v = C.edges[rep.stuck_edge]
        print(f"stuck_edge: {u} {v}")
        print(f"reason: {rep.reason}")
        if rep.cycle:
            print(f"short_cycle_length: {len(rep.cycle)}")
            print("short_cycle: " + " ".join(map(str, rep.cycle)))
        return STUCK
    if rep.outcome != "wonderful":
        return STUCK
    if cfg.extra.get("labeling"):
        Path(cfg.extra["labeling"]).write_text(dump_labeling(rep.labeling, rep.sides()))
    # restrict to the original graph: it is copy 0 of the completion
    sides = [frozenset(v for v in U if v < G.n) for U in rep.sides()]
    packing = eq.Packing(G, 2, tuple(sides))
    try:
        cover, _ = eq.conv_1_to_2(packing)
        hom, _ = eq.conv_2_to_3(cover)
        cc, _ = eq.conv_3_to_4(hom)
    except eq.CertificateError as exc:
        print(f"certificate_error: {exc}")
        return INVALID
    checks = {"cover": eq.verify(cover), "hom": eq.verify(hom), "cutcont": eq.verify(cc)}
    for name, res in checks.items():
        print(f"check {name}: {res.message}")
    if cfg.out:
        Path(cfg.out).write_text(eq.dump_certificate(cover) + eq.dump_certificate(hom))
    return OK if all(checks.values()) else INVALID


def _load_cert(G: Graph, form: str, path: str):
    return eq.load_certificate(G, form, Path(path).read_text())


def cmd_check(cfg: RunConfig) -> int:
    G = read_graph(cfg.graph)
    form = cfg.extra["form"]
    try:
        cert = _load_cert(G, form, cfg.cert)
    except ValueError as exc:
        if isinstance(exc, GraphFormatError):
            raise
        print(f"invalid: {exc}")
        return INVALID
    res = eq.verify(cert)
    print(f"form: {form}")
    print(f"valid: {'yes' if res else 'no'}")
    if not res:
        print(f"violation: {res.message}")
    return OK if res else INVALID


def cmd_convert(cfg: RunConfig) -> int:
    G = read_graph(cfg.graph)
    cert = _load_cert(G, cfg.extra["from_form"], cfg.cert)
    try:
        out, log = eq.convert(cert, cfg.extra["to_form"])
    except eq.CertificateError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return INVALID
    _emit(log, sys.stderr)
    _write(cfg.out, eq.dump_certificate(out))
    return OK


def cmd_gen(cfg: RunConfig) -> int:
    n, g = cfg.extra["n"], cfg.extra["girth"]
    try:
        G = gen_high_girth_cubic(n, g, seed=cfg.seed, budget=cfg.extra["budget"])
    except InfeasibleError as exc:
        raise UsageError(str(exc)) from None
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"girth_reached: {exc.girth_reached}", file=sys.stderr)
        return STUCK
    _write(cfg.out, dump_edge_list(G))
    return OK


def cmd_girth(cfg: RunConfig) -> int:
    G = read_graph(cfg.graph)
    g = girth(G)
    print("inf" if g == float("inf") else g)
    if cfg.extra.get("cycle") and g != float("inf"):
        print(" ".join(map(str, shortest_cycle(G))))
    if cfg.extra.get("dot"):
        Path(cfg.extra["dot"]).write_text(to_dot(G))
    return OK


COMMANDS = {
    "verify-claim": cmd_verify_claim,
    "solve": cmd_solve,
    "check": cmd_check,
    "convert": cmd_convert,
    "gen": cmd_gen,
    "girth": cmd_girth,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clebsch", description="Tree menus and projective-cube certificates for cubic graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-claim", help="build the worst-menu antichains and run the final test")
    v.add_argument("--d1", type=int, default=9)
    v.add_argument("--d2", type=int, default=8)
    v.add_argument("--prune", action="store_true", help="drop menus with nonnegative value at the empty set")
    v.add_argument("--cross-check-prune", action="store_true", help="also run with the opposite --prune setting")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--dump-dir")
    v.add_argument("--cost", type=_cost, default=DEFAULT_COST, help="a(0),..,a(4)")
    v.add_argument("--capacity", type=int, default=DEFAULT_CAPACITY)

    s = sub.add_parser("solve", help="find a wonderful labeling and the PQ4 certificates")
    s.add_argument("graph")
    s.add_argument("--aux", help="regular auxiliary graph for padding a subcubic input")
    s.add_argument("--out", help="certificate file (five vertex sets and the map to PQ4)")
    s.add_argument("--trace", help="per-step cost trace")
    s.add_argument("--labeling", help="final labeling with witness sets")
    s.add_argument("--max-iters", type=int)
    s.add_argument("--depth", type=int, default=TREE_DEPTH)
    s.add_argument("--adaptive", action="store_true", help="retry shallower trees when the graph has short cycles")
    s.add_argument("--check-steps", action="store_true")
    s.add_argument("--cost", type=_cost, default=DEFAULT_COST)

    c = sub.add_parser("check", help="verify a certificate")
    c.add_argument("form", choices=eq.FORMS)
    c.add_argument("graph")
    c.add_argument("cert")

    cv = sub.add_parser("convert", help="convert a certificate to another form")
    cv.add_argument("--from", dest="from_form", choices=eq.FORMS, required=True)
    cv.add_argument("--to", dest="to_form", choices=eq.FORMS, required=True)
    cv.add_argument("graph")
    cv.add_argument("cert")
    cv.add_argument("--out")

    g = sub.add_parser("gen", help="random cubic graph of given girth")
    g.add_argument("n", type=int)
    g.add_argument("--girth", type=int, default=17)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--budget", type=int, default=10**7)
    g.add_argument("--out")

    gi = sub.add_parser("girth", help="print the girth")
    gi.add_argument("graph")
    gi.add_argument("--cycle", action="store_true", help="also print a shortest cycle")
    gi.add_argument("--dot", help="write the graph in DOT format")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ns.command)
    for name in ("graph", "cert", "out", "d1", "d2", "cost", "prune", "jobs", "seed", "max_iters"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    known = set(vars(cfg)) | {"command"}
    cfg.extra = {k: v for k, v in vars(ns).items() if k not in known}
    cfg.extra["capacity"] = getattr(ns, "capacity", DEFAULT_CAPACITY)
    cfg.extra["cross_check"] = getattr(ns, "cross_check_prune", False)
    return cfg


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
