"""Command-line entry point: ``kfactor <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import branching, circuits, constructions, experiments, oracle
from .graph_core import BicoloredGraph, array_to_set, read_edge_list, write_edge_list
from .planted import ModelParams, plant
from .pruning import core_planted_fraction, iterative_prune


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _instance(args) -> BicoloredGraph:
    if args.input:
        return read_edge_list(args.input)
    if args.n is None:
        raise SystemExit("either --input or --n/--k/--lambda is required")
    g, _ = plant(ModelParams(args.n, args.k, args.lam, args.seed))
    return g


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="edge-list file (header 'n<TAB>k', rows 'u<TAB>v<TAB>R|B')")
    p.add_argument("--n", type=int, help="sample a planted instance with this many vertices")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)


def cmd_sweep(args) -> int:
    cfg = json.loads(open(args.config).read())
    if args.workers is not None:
        cfg["workers"] = args.workers
    config = experiments.SweepConfig.from_dict(cfg)
    res = experiments.run_sweep(config)
    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    paths = experiments.emit_outputs(res.table, args.out, formats)
    summary = {"outputs": [str(p) for p in paths], "trials": len(res.records), "failures": res.failures}
    if res.failures:
        summary["errors"] = [
            {"grid_index": r.grid_index, "trial": r.trial, "error": r.error} for r in res.records if not r.ok
        ]
    _dump(summary)
    return 0 if res.all_ok else 1


def cmd_prune(args) -> int:
    g = read_edge_list(args.input)
    k = args.k if args.k is not None else g.k
    out = iterative_prune(g, k)
    summary = out.counts()
    red = g.red
    if len(red) and k == g.k:
        summary["core_fraction"] = float(core_planted_fraction(out, red))
    if args.core:
        write_edge_list(out.core, args.core)
        summary["core_file"] = args.core
    _dump(summary)
    return 0


def cmd_rho(args) -> int:
    sol = branching.extinction_probability(args.lam, args.k, tol=args.tol)
    _dump({"rho": sol.rho, "core_fraction": (1.0 - sol.rho) ** 2, "iterations": sol.iterations})
    return 0


def cmd_oracle(args) -> int:
    g = read_edge_list(args.input)
    catalog = oracle.enumerate_k_factors(g, g.k)
    result = {"catalog_size": len(catalog)}
    h_star = array_to_set(g.red)
    if len(catalog) and h_star in catalog:
        hist = oracle.overlap_histogram(catalog, h_star)
        result["distance_histogram"] = {str(t): c for t, c in hist.by_distance.items()}
    _dump(result)
    return 0


def _cycle_json(g: BicoloredGraph, c: circuits.AlternatingCircuit) -> dict:
    try:
        constructions.validate_cycle(g, c)
        ok = True
    except circuits.ContractViolation:
        ok = False
    return {"vertices": list(c.vertices), "colors": "".join(c.colors), "valid": ok}


def cmd_construct(args) -> int:
    g = _instance(args)
    rng = np.random.default_rng(args.seed)
    if args.mode == "five-edge":
        res = constructions.construct_cycles(g, args.ell, args.d, args.gamma, rng, max_cycles=args.max_cycles)
        payload = {
            "mode": args.mode,
            "trees_kept": len(res.build.trees),
            "trees_admitted": len(res.aux.admitted),
            "padded": res.reserved.padded,
            "truncated": res.truncated,
            "cycles": [_cycle_json(g, c) for c in res.cycles],
        }
    else:
        red = g.red
        if args.edge:
            e = tuple(args.edge)
        elif len(red):
            e = tuple(int(x) for x in red[rng.integers(len(red))])
        else:
            raise SystemExit("the instance has no planted edge")
        ell = args.ell if args.ell else None
        out = constructions.three_edge_closure(g, e, ell, args.gamma, rng)
        payload = {
            "mode": args.mode,
            "edge": list(e),
            "status": out.status,
            "cycles": [_cycle_json(g, out.cycle)] if out.cycle else [],
        }
    _dump(payload)
    return 0


def cmd_circuits(args) -> int:
    h = read_edge_list(args.h)
    h_star = read_edge_list(args.h_star)
    items = circuits.difference_items(array_to_set(h.edges), array_to_set(h_star.edges))
    _dump([list(c.vertices) for c in circuits.decompose(items)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kfactor", description="Planted k-factor recovery experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None, help=f"default: ${experiments.WORKERS_ENV} or 1")
    p.add_argument("--format", default="csv", help="comma-separated subset of csv,json,svg")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("prune", help="iterative pruning of an edge-list file")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=None, help="defaults to the k in the file header")
    p.add_argument("--core", help="write the residual core to this edge-list file")
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("rho", help="extinction probability of the alternating branching process")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("oracle", help="exact k-factor enumeration for small graphs")
    osub = p.add_subparsers(dest="action", required=True)
    q = osub.add_parser("enumerate")
    q.add_argument("input")
    q.set_defaults(func=cmd_oracle)

    p = sub.add_parser("construct", help="constructive alternating cycles")
    p.add_argument("--mode", choices=("five-edge", "three-edge"), required=True)
    _add_instance_args(p)
    p.add_argument("--ell", type=int, default=0, help="tree size parameter (three-edge default: sqrt(n log n))")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--gamma", type=float, default=0.05)
    p.add_argument("--edge", type=int, nargs=2, help="planted edge for the three-edge mode")
    p.add_argument("--max-cycles", type=int, default=constructions.DEFAULT_MAX_CYCLES)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("circuits", help="alternating circuit algebra")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("decompose")
    q.add_argument("h")
    q.add_argument("h_star")
    q.set_defaults(func=cmd_circuits)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "construct" and args.mode == "five-edge" and args.ell < 1:
        args.ell = 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
