"""Command-line entry point: generate, cover, verify and stats subcommands."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io
from .graphs import verify_cover
from .hamilton import DEFAULT_BUDGET, DEFAULT_RETRIES
from .models import sample_bipartite, sample_digraph, sample_permutation
from .montecarlo import monte_carlo, write_csv
from .pipeline import ADAPTIVE, STRICT, CoverFailure, RunConfig, StrictAbort, cover_digraph, run_inputs
from .rng import substream

EXIT_OK = 0
EXIT_STRICT_ABORT = 2
EXIT_INVALID = 3


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True))


def _generate(args) -> int:
    rng = substream(args.seed, "generate", args.model)
    if args.model == "digraph":
        G = sample_digraph(args.n, args.p, rng)
        text = io.format_edge_list("digraph", G.n, G.edges)
        size = len(G)
    elif args.model == "bipartite":
        B = sample_bipartite(args.n, args.p, rng)
        text = io.format_edge_list("bipartite", B.n, B.edges)
        size = len(B.edges)
    else:
        pi = sample_permutation(args.n, rng)
        text = f"permutation {args.n}\n" + " ".join(str(v + 1) for v in pi.image) + "\n"
        size = args.n
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.out:
        _emit({"command": "generate", "model": args.model, "n": args.n, "size": size, "out": args.out})
    return EXIT_OK


def _cover(args) -> int:
    digraph = io.read_digraph(args.input) if args.input else None
    config = RunConfig(
        n=args.n if digraph is None else digraph.n,
        p=args.p,
        seed=args.seed,
        mode=args.mode,
        solver_budget=args.budget,
        retry_cap=args.retries,
        digraph=digraph,
    )
    try:
        cert, report = cover_digraph(config)
    except StrictAbort as exc:
        _emit({"command": "cover", "status": "strict-abort", "stage": exc.stage, "message": str(exc)})
        return EXIT_STRICT_ABORT
    except CoverFailure as exc:
        _emit({"command": "cover", "status": "invalid", "message": str(exc)})
        return EXIT_INVALID
    if args.out:
        io.write_certificate(args.out, cert, report.manifest(config))
        io.write_graph(Path(args.out) / "graph", run_inputs(config)[2])
    _emit({"command": "cover", "status": "ok", **report.summary()})
    return EXIT_OK


def _verify(args) -> int:
    D = io.read_digraph(args.graph)
    cert = io.read_certificate(args.cert)
    res = verify_cover(D, cert)
    _emit({
        "command": "verify",
        "valid": res.valid,
        "cycles": len(cert.cycles),
        "uncovered": len(res.uncovered),
        "invalid_cycles": len(res.invalid_cycles),
        "witness_errors": len(res.witness_errors),
    })
    return EXIT_OK if res.valid else EXIT_INVALID


def _stats(args) -> int:
    task = args.task
    params: dict = {"samples": args.samples}
    if task == "inv-c":
        if args.n is not None:
            params["grid"] = (args.n,)
        if args.r is not None:
            params["r"] = args.r
    elif task == "model-eq":
        params["n"] = args.n if args.n is not None else 25
        params["p"] = args.p
    else:
        params["n"] = args.n if args.n is not None else (30 if task == "two-pow-c" else 20)
    rows = monte_carlo(task, seed=args.seed, **params)
    if args.out:
        write_csv(args.out, rows)
    for row in rows:
        _emit({k: v for k, v in row.items() if k != "frequencies"})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamcover", description="Cover random digraphs by Hamilton cycles.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a random digraph, bipartite graph or permutation")
    g.add_argument("--model", choices=("digraph", "bipartite", "perm"), default="digraph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output file (stdout when omitted)")
    g.set_defaults(func=_generate)

    c = sub.add_parser("cover", help="cover a digraph by Hamilton cycles and write a certificate")
    c.add_argument("--n", type=int, default=100)
    c.add_argument("--p", type=float, default=0.3)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--mode", choices=(STRICT, ADAPTIVE), default=ADAPTIVE)
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search-node budget per solver call")
    c.add_argument("--retries", type=int, default=DEFAULT_RETRIES)
    c.add_argument("--input", help="edge-list file holding the digraph to cover")
    c.add_argument("--out", help="certificate directory")
    c.set_defaults(func=_cover)

    v = sub.add_parser("verify", help="check a certificate against a digraph")
    v.add_argument("--graph", required=True)
    v.add_argument("--cert", required=True)
    v.set_defaults(func=_verify)

    s = sub.add_parser("stats", help="Monte Carlo statistics")
    s.add_argument("--task", choices=("two-pow-c", "cycle-law", "inv-c", "model-eq"), required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--p", type=float, default=0.4)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="CSV output file")
    s.set_defaults(func=_stats)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (io.FormatError, ValueError, FileNotFoundError) as exc:
        print(f"hamcover: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
