"""Command-line front end: ``rigicount <subcommand> ...``.

Exit codes: 0 success, 1 usage or input error, 2 inconclusive certificate
(or a graph outside what the enumerator handles), 3 refuted certificate,
4 numeric/genericity failure after retries.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .certify import EXIT_CODES, certify_count, spherical_count
from .experiment import ExperimentConfig, run_experiment
from .graph import k_core, read_graph
from .ordering import BudgetError, ConstructionOrdering, construct_ordering, is_d_neighbourly
from .props import check_adjacency, check_sparsity, core_report
from .psd import (
    PartialPSDMatrix,
    enumerate_completions,
    normalize_to_sphere,
    partial_core,
    predicted_completions,
    sample_partial_psd,
)
from .randgraph import graph_at, min_degree_threshold, sample_edge_ordering, sample_gnp
from .realisations import (
    GenericityError,
    LengthAssignment,
    TowerError,
    count_real_and_complex,
    edge_lengths,
    enumerate_realisations,
    sample_framework,
)
from .rigidity import rigidity_report

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_REFUTED, EXIT_NUMERIC = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_seed() -> int:
    raw = os.environ.get("RIGICOUNT_SEED", "")
    try:
        return int(raw) if raw.strip() else 0
    except ValueError:
        raise UsageError(f"RIGICOUNT_SEED must be an integer, got {raw!r}")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


# ------------------------------------------------------------------ commands

def cmd_random(a) -> int:
    if sum(x is not None for x in (a.M, a.p)) > 1:
        raise UsageError("give at most one of --M and --p")
    if a.n < 2:
        raise UsageError("--n must be at least 2")
    records = []
    for i in range(a.samples):
        seed = a.seed + i
        if a.p is not None:
            g, M = sample_gnp(a.n, a.p, seed), None
        else:
            sigma = sample_edge_ordering(a.n, seed)
            if a.ordering:
                sys.stdout.write(sigma.to_text())
                continue
            M = a.M if a.M is not None else min_degree_threshold(sigma, a.d)
            g = graph_at(sigma, M)
        records.append((seed, g))
    if a.ordering:
        return EXIT_OK
    if a.samples == 1 and not a.json:
        sys.stdout.write(records[0][1].to_text())
    else:
        for seed, g in records:
            print(json.dumps({"seed": seed, "n": g.n, "M": g.m, "edges": g.sorted_edges()}))
    return EXIT_OK


def cmd_core(a) -> int:
    g = read_graph(a.graph)
    tr = k_core(g, a.k)
    _emit({"k": a.k, "core": sorted(tr.survivors), "size": len(tr.survivors),
           "removed": [list(x) for x in tr.removed]})
    return EXIT_OK


def cmd_order(a) -> int:
    g = read_graph(a.graph)
    res = construct_ordering(g, a.d)
    out = res.to_dict()
    if a.exact_neighbourly:
        nb = is_d_neighbourly(g, a.d, "exact")
        out["neighbourly"] = {"verdict": nb.verdict,
                              "witness": sorted(nb.witness) if nb.witness is not None else None}
    _emit(out)
    return EXIT_OK if isinstance(res, ConstructionOrdering) else EXIT_INCONCLUSIVE


def cmd_rigidity(a) -> int:
    g = read_graph(a.graph)
    rep = rigidity_report(g, a.d, a.seed, a.trials)
    out = rep.to_dict()
    if not a.global_:
        out.pop("global", None)
        out.pop("stress_rank", None)
    _emit(out)
    return EXIT_OK


def cmd_certify(a) -> int:
    g = read_graph(a.graph)
    cert = (spherical_count if a.spherical else certify_count)(g, a.d, a.seed)
    _emit(cert.to_dict())
    return EXIT_CODES[cert.status]


def cmd_enumerate(a) -> int:
    g = read_graph(a.graph)
    try:
        if a.search:
            hist: dict[int, int] = {}
            cplx = set()
            for i in range(a.search):
                r, c = count_real_and_complex(g, a.d, a.seed + i)
                hist[r] = hist.get(r, 0) + 1
                cplx.add(c)
            _emit({"seeds": a.search, "max_real_observed": max(hist),
                   "real_histogram": {str(k): v for k, v in sorted(hist.items())},
                   "complex_counts": sorted(cplx),
                   "note": "maximum observed over sampled lengths; not claimed to equal r_d(G)"})
            return EXIT_OK
        if a.lengths:
            lengths = LengthAssignment.from_text(_read_text(a.lengths))
            missing = [e for e in g.sorted_edges() if e not in lengths]
            if missing:
                raise UsageError(f"lengths file misses edge {missing[0]}")
            sols = enumerate_realisations(g, a.d, lengths, None, a.field, a.seed)
        else:
            f = sample_framework(g, a.d, "real", a.seed)
            sols = enumerate_realisations(g, a.d, edge_lengths(f), f.coords, a.field, a.seed)
    except TowerError as exc:
        _emit({"status": "unsupported", "reason": str(exc)})
        return EXIT_INCONCLUSIVE
    except GenericityError as exc:
        _emit({"status": "numeric-failure", "reason": str(exc)})
        return EXIT_NUMERIC
    _emit(sols.to_dict())
    return EXIT_OK


def _matrix(a) -> PartialPSDMatrix:
    if not a.matrix:
        raise UsageError("--matrix FILE is required")
    return PartialPSDMatrix.from_text(_read_text(a.matrix))


def cmd_psd(a) -> int:
    if a.action == "sample":
        if None in (a.n, a.d, a.M):
            raise UsageError("psd sample needs --n, --d and --M")
        sys.stdout.write(sample_partial_psd(a.n, a.d, a.M, a.seed).to_text())
        return EXIT_OK
    A = _matrix(a)
    d = A.d if a.d is None else a.d
    if a.action == "core":
        k = a.k if a.k is not None else d + 1
        rows = sorted(partial_core(A, k))
        _emit({"k": k, "rows": rows, "size": len(rows)})
    elif a.action == "normalize":
        g, lengths = normalize_to_sphere(A)
        sys.stdout.write(lengths.to_text())
    elif a.action == "predict":
        p = predicted_completions(A, d)
        _emit({"d": d, "predicted": "inf" if p == math.inf else p})
    elif a.action == "complete":
        res = enumerate_completions(A, d, a.seed, a.field)
        p = predicted_completions(A, d)

        def enc(x):
            return [x.real, x.imag] if isinstance(x, complex) else float(x)
        _emit({"status": res.status, "reason": res.reason, "count": len(res),
               "predicted": "inf" if p == math.inf else p,
               "completions": [[[enc(complex(x) if a.field == "complex" else x) for x in row] for row in B]
                               for B in res.completions]})
        return EXIT_OK if res.status == "ok" else EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_props(a) -> int:
    g = read_graph(a.graph)
    if a.check == "adjacency":
        rep = check_adjacency(g, "exact" if a.exact else "sampled", a.samples, a.seed)
    elif a.check == "sparsity":
        rep = check_sparsity(g, "exact" if a.exact else "heuristic", a.samples, a.seed)
    else:
        if a.k is None:
            raise UsageError("--check core needs --k")
        rep = core_report(g, a.k, a.eps)
    _emit(rep.to_dict())
    return EXIT_OK


def cmd_experiment(a) -> int:
    kw: dict = {}
    if a.config:
        cfg = ExperimentConfig.from_text(_read_text(a.config))
        kw = {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}
    for key, val in (("n", a.n), ("d", a.d), ("samples", a.samples), ("seed", a.seed_override),
                     ("m_rule", a.m_rule), ("output", a.out), ("workers", a.workers)):
        if val is not None:
            kw[key] = val
    if a.timing:
        kw["timing"] = True
    kw.setdefault("seed", a.seed)
    cfg = ExperimentConfig.from_mapping(kw)
    text = run_experiment(cfg)
    if not cfg.output:
        sys.stdout.write(text)
    return EXIT_OK


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    seed = default_seed()
    p = _Parser(prog="rigicount", description="Realisation-count certificates for rigid graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--graph", required=True, help="graph file: 'n m' then 'u v' lines")
        return sp

    sp = sub.add_parser("random", help="sample G(n,M), G(n,p) or an edge ordering")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--M", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--d", type=int, default=1, help="hitting time M_d used when --M/--p are absent")
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--ordering", action="store_true", help="emit the edge ordering instead of a graph")
    sp.add_argument("--json", action="store_true", help="JSON lines even for a single sample")
    sp.set_defaults(func=cmd_random)

    sp = graph_cmd("core", "k-core by lowest-label-first peeling")
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_core)

    sp = graph_cmd("order", "two-pass construction ordering")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--exact-neighbourly", action="store_true")
    sp.set_defaults(func=cmd_order)

    sp = graph_cmd("rigidity", "randomised generic (global) rigidity test")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--global", dest="global_", action="store_true")
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--trials", type=int, default=3)
    sp.set_defaults(func=cmd_rigidity)

    sp = graph_cmd("certify", "certificate for c_d = r_d = 2^(n-t)")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--spherical", action="store_true", help="spherical count via the cone")
    sp.set_defaults(func=cmd_certify)

    sp = graph_cmd("enumerate", "enumerate realisations of a 0-extension tower")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--field", choices=("real", "complex"), default="complex")
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--lengths", help="file of 'u v squared_length' lines")
    sp.add_argument("--search", type=int, default=0, metavar="K",
                    help="sample K length assignments and report the real-count histogram")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("psd", help="partial PSD matrices and their rank-d completions")
    sp.add_argument("action", choices=("sample", "core", "normalize", "predict", "complete"))
    sp.add_argument("--matrix")
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--M", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--field", choices=("real", "complex"), default="complex")
    sp.add_argument("--seed", type=int, default=seed)
    sp.set_defaults(func=cmd_psd)

    sp = graph_cmd("props", "finite-n property checkers")
    sp.add_argument("--check", choices=("adjacency", "sparsity", "core"), required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=seed)
    sp.set_defaults(func=cmd_props)

    sp = sub.add_parser("experiment", help="seeded Monte Carlo certification sweep")
    sp.add_argument("--config", help="key=value file; flags override it")
    sp.add_argument("--n", help="comma-separated vertex counts")
    sp.add_argument("--d", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", dest="seed_override", type=int)
    sp.add_argument("--m-rule", help="hitting | hitting+K | fixed:M")
    sp.add_argument("--out", help="CSV path (stdout when absent)")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--timing", action="store_true", help="fill the wall_time column (breaks byte-reproducibility)")
    sp.set_defaults(func=cmd_experiment, seed=seed)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except GenericityError as exc:
        print(f"rigicount: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, BudgetError, ValueError, OSError) as exc:
        print(f"rigicount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
