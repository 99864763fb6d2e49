"""Command line entry point: solve, reduce, lift, gen, bench."""
from __future__ import annotations

import argparse
import logging
import random
import sys
import time
from pathlib import Path

from . import formats
from .feasibility import verify_edge_connectivity
from .greedy import DEFAULT_ALPHA_CAP, InfeasibleInstance, relative_greedy
from .localsearch import NotAllTerminals, local_search
from .model import SrapInstance
from .oracle import DEFAULT_BUDGET, Infeasible, OracleBudget, OracleBudgetExceeded, exact_srap, ring_edge_list
from .reduction import (PreconditionError, ReductionError, SagInstance, ScapInstance, lift_solution,
                        reduce_sag, reduce_scap)
from .steiner import DEFAULT_GAMMA_CAP

log = logging.getLogger("srap")

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


def _read(path):
    return sys.stdin.read() if path in (None, "-") else Path(path).read_text()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _budget(args):
    return OracleBudget(max_links=args.oracle_budget) if args.oracle_budget else DEFAULT_BUDGET


def _verify(source, links) -> bool:
    """Independent max-flow check on the instance as given."""
    pairs = [l.pair for l in links]
    if isinstance(source, SrapInstance):
        return verify_edge_connectivity(ring_edge_list(source.n) + pairs, source.terminals, 3)
    scap = source.as_scap() if isinstance(source, SagInstance) else source
    return verify_edge_connectivity(list(scap.edges) + pairs, sorted(scap.terminals), scap.k + 1)


def run_algorithm(srap: SrapInstance, args):
    """Returns (links, params, iteration lines)."""
    budget = _budget(args)
    eps = args.epsilon if args.epsilon is not None else (1.0 if args.algo == "local" else 2.0)
    if args.algo == "exact":
        _, links = exact_srap(srap, budget)
        return sorted(links), {"oracle_budget": budget.max_links}, []
    common = dict(gamma_cap=args.gamma_cap, alpha=args.alpha, alpha_cap=args.alpha_cap, budget=budget)
    if args.algo == "greedy":
        res = relative_greedy(srap, eps, **common)
        lines = []
        for i, it in enumerate(res.iterations, 1):
            ratio = "-" if it.ratio is None else str(it.ratio)
            lines.append(f"{i} {it.kind} ratio={ratio} cost={it.cost} dropped_cost={it.dropped_cost} "
                         f"dropped={_arcs(it.dropped)}")
        params = dict(res.params, f0_cost=res.f0_cost, start=res.start_kind, start_cost=res.start_cost)
        return res.links, params, lines
    res = local_search(srap, eps, **common)
    lines = [f"{i} cost={mv.cost} phi2={mv.phi_before}->{mv.phi_after} dropped={_arcs(mv.dropped)}"
             for i, mv in enumerate(res.moves, 1)]
    params = dict(res.params, start=res.start_kind, start_cost=res.start_cost, stopped=res.stopped)
    return res.links, params, lines


def _arcs(arcs):
    return ",".join(f"{u}>{v}" for u, v in arcs) or "-"


def cmd_solve(args) -> int:
    source = formats.parse_instance(_read(args.input))
    t0 = time.perf_counter()
    reduction = None
    if isinstance(source, ScapInstance):
        reduction = reduce_scap(source)
    elif isinstance(source, SagInstance):
        reduction = reduce_sag(source)
    srap = reduction.instance if reduction else source
    links, params, lines = run_algorithm(srap, args)
    if reduction:
        links = lift_solution(links, reduction.lift)
    wall = time.perf_counter() - t0
    verified = _verify(source, links)
    report = [f"algorithm {args.algo}", f"instance_digest {formats.digest(source)}"]
    for key, val in params.items():
        report.append(f"{key} {val}")
    if "gamma_theory" in params:
        report.append(f"gamma_truncated {str(params['gamma'] < params['gamma_theory']).lower()}")
    report += [f"cost {sum(l.cost for l in links)}", f"verified {str(verified).lower()}",
               f"wall_time {wall:.3f}"]
    report += [f"link {l.u} {l.v}" for l in links]
    report.append("# iterations")
    report += lines
    _write(args.report, "\n".join(report) + "\n")
    if args.output:
        _write(args.output, formats.serialize_solution(links))
    return EXIT_OK if verified else EXIT_ERROR


def cmd_reduce(args) -> int:
    source = formats.parse_instance(_read(args.input))
    if isinstance(source, ScapInstance):
        red = reduce_scap(source)
    elif isinstance(source, SagInstance):
        red = reduce_sag(source)
    else:
        raise ValueError("reduce expects a scap or sag file")
    _write(args.output, formats.serialize_srap(red.instance))
    lift_path = args.lift_out or (None if args.output in (None, "-") else args.output + ".lift")
    if lift_path:
        Path(lift_path).write_text(formats.serialize_lift(red.lift))
    return EXIT_OK


def cmd_lift(args) -> int:
    lift = formats.parse_lift(Path(args.lift).read_text())
    sol = formats.parse_solution(_read(args.input))
    source = formats.parse_instance(Path(args.original).read_text()) if args.original else None
    links = lift_solution(sol.pairs, lift, source)
    _write(args.output, formats.serialize_solution(links))
    return EXIT_OK


def cmd_gen(args) -> int:
    from .generate import random_sag, random_scap, random_srap

    rng = random.Random(args.seed)
    if args.type == "srap":
        inst = random_srap(rng, args.n, args.m, args.links, all_terminals=args.all_terminals)
    elif args.type == "scap":
        inst = random_scap(rng, args.n, args.links)
    else:
        inst = random_sag(rng, args.n, args.m, args.k, args.links)
    _write(args.output, formats.serialize_instance(inst))
    return EXIT_OK


def cmd_bench(args) -> int:
    files = sorted(p for p in Path(args.directory).iterdir()
                   if p.suffix in (".srap", ".scap", ".sag") and p.is_file())
    algos = [a for a in args.algos.split(",") if a]
    rows = ["file algo cost opt ratio verified seconds"]
    ratios = {a: [] for a in algos}
    for path in files:
        source = formats.parse_instance(path.read_text())
        red = None
        if isinstance(source, ScapInstance):
            red = reduce_scap(source)
        elif isinstance(source, SagInstance):
            red = reduce_sag(source)
        srap = red.instance if red else source
        try:
            opt = exact_srap(srap, _budget(args))[0]
        except OracleBudgetExceeded:
            opt = None
        for algo in algos:
            if algo == "local" and not srap.all_terminals:
                rows.append(f"{path.name} {algo} - - - skipped -")
                continue
            args.algo = algo
            t0 = time.perf_counter()
            links, _, _ = run_algorithm(srap, args)
            dt = time.perf_counter() - t0
            if red:
                links = lift_solution(links, red.lift)
            cost = sum(l.cost for l in links)
            ratio = "-"
            if opt is not None:
                r = cost / opt if opt else 1.0
                ratios[algo].append(r)
                ratio = f"{r:.4f}"
            ok = str(_verify(source, links)).lower()
            rows.append(f"{path.name} {algo} {cost} {'-' if opt is None else opt} {ratio} {ok} {dt:.3f}")
    summary = []
    for algo in algos:
        rs = ratios[algo]
        if rs:
            summary.append(f"summary {algo} count={len(rs)} max_ratio={max(rs):.4f} "
                           f"mean_ratio={sum(rs) / len(rs):.4f}")
        else:
            summary.append(f"summary {algo} count=0")
    _write(args.output, "\n".join(rows + summary) + "\n")
    return EXIT_OK


def _solver_flags(p):
    p.add_argument("--algo", choices=("greedy", "local", "exact"), default="greedy")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--gamma-cap", type=int, default=DEFAULT_GAMMA_CAP)
    p.add_argument("--alpha", type=int, default=None, help="override the thinness bound")
    p.add_argument("--alpha-cap", type=int, default=DEFAULT_ALPHA_CAP)
    p.add_argument("--oracle-budget", type=int, default=None, help="max links for the exact oracle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srap", description="Ring and cactus connectivity augmentation.")
    parser.add_argument("--log", help="write debug log to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an srap, scap or sag instance")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("-o", "--output", help="solution file")
    p.add_argument("--report", default="-", help="report destination (default stdout)")
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry; solvers are deterministic")
    _solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="reduce a scap or sag instance to srap")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--lift-out", help="lift data path (default: <output>.lift)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lift", help="map an srap solution back to the original instance")
    p.add_argument("-i", "--input", default="-", help="solution of the reduced instance")
    p.add_argument("--lift", required=True, help="lift data written by reduce")
    p.add_argument("--original", help="original scap or sag file, enables verification")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("gen", help="generate a random feasible instance")
    p.add_argument("--type", choices=("srap", "scap", "sag"), default="srap")
    p.add_argument("--n", type=int, default=8, help="ring size, scap vertex count, or sag h_vertices")
    p.add_argument("--m", type=int, default=2, help="outside vertices (srap) or extra vertices (sag)")
    p.add_argument("--k", type=int, default=2, help="sag connectivity")
    p.add_argument("--links", type=int, default=12)
    p.add_argument("--all-terminals", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run solvers over a directory of instances")
    p.add_argument("directory")
    p.add_argument("--algos", default="greedy,local")
    p.add_argument("-o", "--output", default="-")
    _solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = None
    if args.log:
        handler = logging.FileHandler(args.log)
        handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
        log.addHandler(handler)
        log.setLevel(logging.DEBUG)
    try:
        return args.func(args)
    except (InfeasibleInstance, Infeasible, PreconditionError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (formats.FormatError, ReductionError, NotAllTerminals, OracleBudgetExceeded,
            ValueError, OSError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        if handler:
            log.removeHandler(handler)
            handler.close()


if __name__ == "__main__":
    sys.exit(main())
