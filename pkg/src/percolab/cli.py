"""Command line front end.

Subcommands: generate, spectrum, percolate, sweep, verify, theory,
compare.  Sweep options mirror the flat key=value config file keys; a
flag given on the command line wins over the file.
"""

from __future__ import annotations

import argparse
import json
import sys

from .census import take_census
from .generators import GenSpec, generate
from .graph_core import read_graph, write_graph
from .harness import (
    CHECKER_IDS,
    compare,
    config_from_mapping,
    load_config_file,
    run_sweep,
)
from .percolation import CoinStream, run_dfs, sample_vertices
from .spectral import certify, compute_spectrum
from .theory import predict
from .verify import (
    check_corollary_2_3,
    check_giant_expansion,
    check_lemma_2_4,
    check_mixing,
    check_stream_properties,
)

_BOOL = argparse.BooleanOptionalAction


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _print_table(rows, columns) -> None:
    widths = [max(len(str(c)), max((len(_cell(r, c)) for r in rows), default=0)) for c in columns]
    print("  ".join(str(c).ljust(w) for c, w in zip(columns, widths)))
    for r in rows:
        print("  ".join(_cell(r, c).ljust(w) for c, w in zip(columns, widths)))


def _cell(row, col) -> str:
    v = row.get(col)
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "ok" if v else "FAIL"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


# ----------------------------------------------------------------------
def _add_gen_flags(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--family", choices=("random_regular", "hypercube", "blowup", "clique_union"),
                   required=required)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--graph-seed", type=int, dest="graph_seed")
    p.add_argument("--blowup-factor", type=int, dest="blowup_factor")
    p.add_argument("--base-family", dest="base_family")
    p.add_argument("--base-n", type=int, dest="base_n")
    p.add_argument("--base-d", type=int, dest="base_d")
    p.add_argument("--base-seed", type=int, dest="base_seed")


def _gen_from_args(args) -> GenSpec:
    if args.family == "blowup":
        base = GenSpec(
            family=args.base_family or "random_regular",
            n=args.base_n or 0,
            d=args.base_d or 0,
            seed=args.base_seed or 0,
        )
        return GenSpec(family="blowup", n=args.n or 0, d=args.d or 0,
                       seed=args.graph_seed or 0,
                       blowup_factor=args.blowup_factor, base=base)
    return GenSpec(family=args.family, n=args.n or 0, d=args.d or 0,
                   seed=args.graph_seed or 0)


def _cmd_generate(args) -> int:
    g = generate(_gen_from_args(args))
    write_graph(g, args.out)
    print(f"wrote {args.out}: n={g.n} d={g.d}")
    return 0


def _cmd_spectrum(args) -> int:
    g = read_graph(args.graph)
    if args.alpha is not None:
        admissible, report = certify(g, args.alpha, tol=args.tol)
        obj = report.to_dict()
        obj["alpha"] = args.alpha
        obj["admissible"] = admissible
    else:
        obj = compute_spectrum(g, tol=args.tol, method=args.method).to_dict()
    _print_json(obj)
    return 0


def _cmd_percolate(args) -> int:
    g = read_graph(args.graph)
    stream = CoinStream(g.n, args.p, args.seed)
    trace = run_dfs(g, stream)
    from .percolation import PercolationSample

    sample = PercolationSample.from_membership(args.p, args.seed, trace.accepted_mask())
    census = take_census(g, sample, args.k_max)
    _print_json({"dfs": trace.summary(), "census": census.to_summary()})
    return 0


def _cmd_theory(args) -> int:
    pred = predict(args.n, args.d, args.epsilon, args.alpha, args.k_max)
    d = pred.to_dict()
    admissible = d.pop("admissible")
    tk = d.pop("T_k_pred")
    rows = [{"field": k, "value": v} for k, v in d.items()]
    rows += [{"field": f"T{i + 1}_pred", "value": v} for i, v in enumerate(tk)]
    rows += [{"field": f"window[{k}]", "value": v} for k, v in admissible.items()]
    _print_table(rows, ("field", "value"))
    return 0


_SWEEP_KEYS = ("family", "n", "d", "graph_seed", "blowup_factor", "base_family",
               "base_n", "base_d", "base_seed", "epsilon", "alpha", "regime",
               "trials", "seed", "out", "k_max", "checkers", "workers",
               "regen_graph", "spectrum", "spectrum_tol", "pairs", "subsets",
               "samples", "beta_test")


def _cmd_sweep(args) -> int:
    mapping = load_config_file(args.config) if args.config else {}
    for key in _SWEEP_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            mapping[key] = val
    for spec in args.tol or ():
        if "=" not in spec:
            raise SystemExit(f"--tol expects METRIC=VALUE, got {spec!r}")
        metric, value = spec.split("=", 1)
        mapping[f"tol_{metric.strip()}"] = float(value)
    cfg = config_from_mapping(mapping)
    summary = run_sweep(cfg, resume=args.resume)
    _print_table(summary["rows"],
                 ("metric", "claim", "measured", "predicted", "claim_bound", "tolerance", "pass"))
    print(f"records: {cfg.out}  trials: {summary['trials']}  pass: {summary['pass']}")
    return 0 if summary["pass"] else 1


def _cmd_verify(args) -> int:
    g = read_graph(args.graph)
    checkers = [c.strip() for c in args.checker.split(",") if c.strip()]
    unknown = [c for c in checkers if c not in CHECKER_IDS]
    if unknown:
        raise SystemExit(f"unknown checker ids {unknown}; known: {list(CHECKER_IDS)}")
    if args.p is not None:
        p = args.p
    else:
        sign = -1.0 if args.regime == "sub" else 1.0
        p = (1.0 + sign * args.epsilon) / g.d
    spect = None
    if any(c in ("mixing", "corollary_2_3") for c in checkers):
        spect = compute_spectrum(g, tol=args.spectrum_tol)
    sample = sample_vertices(g.n, p, args.seed)
    reports = []
    for cid in checkers:
        if cid == "stream":
            stream = CoinStream(g.n, p, args.seed)
            reports.append(check_stream_properties(stream, args.epsilon, g.d, args.regime))
        elif cid == "mixing":
            reports.append(check_mixing(g, spect, args.pairs, args.seed))
        elif cid == "corollary_2_3":
            from .graph_core import VertexSet
            from .rng import TAG_SUBSETS, make_generator

            rng = make_generator(args.seed, TAG_SUBSETS, 23)
            half = rng.choice(g.n, size=(g.n + 1) // 2, replace=False)
            reports.append(check_corollary_2_3(g, spect, VertexSet.from_indices(g.n, half), args.alpha))
        elif cid == "lemma_2_4":
            reports.append(check_lemma_2_4(g, sample, args.alpha, args.subsets, args.seed, spect))
        elif cid == "giant_expansion":
            census = take_census(g, sample, args.k_max)
            reports.append(check_giant_expansion(
                g, sample, census, args.alpha, args.samples, args.beta_test, args.seed))
    for r in reports:
        _print_json(r.to_dict())
    return 0 if all(r.passed for r in reports) else 1


def _cmd_compare(args) -> int:
    pred = None
    if args.n is not None:
        pred = predict(args.n, args.d, args.epsilon, args.alpha, args.k_max)
    report = compare(args.records, pred)
    _print_table(report["rows"],
                 ("metric", "claim", "measured", "predicted", "claim_bound", "tolerance", "pass"))
    print(f"trials: {report['trials']}  regime: {report['regime']}  pass: {report['pass']}")
    return 0 if report["pass"] else 1


# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="percolab",
                                 description="site-percolation laboratory for regular graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a graph and write it to a file")
    _add_gen_flags(p, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("spectrum", help="extreme adjacency eigenvalues of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--method", choices=("auto", "dense", "iterative"), default="auto")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--alpha", type=float, help="also report the spectral admissibility verdict")
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("percolate", help="one seeded exploration + component census")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k-max", type=int, default=4, dest="k_max")
    p.set_defaults(fn=_cmd_percolate)

    p = sub.add_parser("theory", help="closed-form predictions as a table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--k-max", type=int, default=4, dest="k_max")
    p.set_defaults(fn=_cmd_theory)

    p = sub.add_parser("sweep", help="run trials, write JSON-lines records + CSV")
    p.add_argument("--config", help="flat key=value file; flags below override it")
    _add_gen_flags(p)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--regime", choices=("sub", "super"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--checkers", help="comma-separated checker ids")
    p.add_argument("--workers", type=int)
    p.add_argument("--regen-graph", action=_BOOL, default=None, dest="regen_graph")
    p.add_argument("--spectrum", action=_BOOL, default=None)
    p.add_argument("--spectrum-tol", type=float, dest="spectrum_tol")
    p.add_argument("--pairs", type=int)
    p.add_argument("--subsets", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--beta-test", type=float, dest="beta_test")
    p.add_argument("--tol", action="append", metavar="METRIC=VALUE")
    p.add_argument("--resume", action="store_true")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("verify", help="run structural checkers on a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--checker", required=True, help="comma-separated checker ids")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--regime", choices=("sub", "super"), default="super")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--subsets", type=int, default=1000)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--beta-test", type=float, default=0.01, dest="beta_test")
    p.add_argument("--k-max", type=int, default=4, dest="k_max")
    p.add_argument("--spectrum-tol", type=float, default=1e-8, dest="spectrum_tol")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("compare", help="theory-vs-measurement table from a record file")
    p.add_argument("--records", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--k-max", type=int, default=4, dest="k_max")
    p.set_defaults(fn=_cmd_compare)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
