"""Command-line frontend: generate, calibrate, bounds, scan, evaluate, power."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import metrics as metrics_mod
from . import signals as signals_mod
from .bounds import bound_table
from .calibration import (AlphaGrid, CalibrationTable, calibrate_randomization,
                          uncalibrated_table)
from .detect import detect, read_result, significance_test, write_result
from .graph import Graph, erdos_renyi, load_edge_list, random_walk_subgraph, serialize_edge_list
from .parallel import resolve_workers

# Seed streams derived from the master seed; strides keep replica ranges disjoint.
SEED_STRIDE = 10 ** 9
STREAMS = {"graph": 0, "signal": 1, "truth": 2, "calibration": 3,
           "significance": 4}


def derive_seed(master: int, stream: str) -> int:
    return master + STREAMS[stream] * SEED_STRIDE


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (all streams derive from it)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--force", action="store_true", help="allow overwriting existing outputs")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: CALSCAN_THREADS env or all cores)")


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="edge-list file (SNAP format)")
    src.add_argument("--er", help="Erdos-Renyi generator spec N,P (e.g. 1000,0.01)")


def _add_grid(p: argparse.ArgumentParser) -> None:
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--alpha-grid", help="comma-separated significance levels")
    grid.add_argument("--alpha-max", type=float,
                      help="truncate the default 18-level grid at this alpha")


def build_parser() -> _Parser:
    parser = _Parser(prog="calscan",
                     description="calibrated nonparametric graph scan statistics")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[], help="write graph, p-values, and truth files")
    _add_graph_source(g)
    g.add_argument("--signal", default=None,
                   help="gaussian:MU or piecewise:Q[:ALPHA_SIG]; omit for null-only data")
    g.add_argument("--true-size", type=int, default=None,
                   help="true subgraph size (default: 1%% of nodes, at least 1)")
    _add_common(g)

    c = sub.add_parser("calibrate", help="estimate the calibration table by randomization")
    _add_graph_source(c)
    _add_grid(c)
    c.add_argument("--k-replicas", type=int, default=200)
    c.add_argument("--coretree", nargs="?", const=1, type=int, default=None,
                   metavar="D", help="compress via core-tree decomposition (peel depth D)")
    c.add_argument("--curves", action="store_true", help="also write the curve CSV")
    c.add_argument("--plot", action="store_true",
                   help="render curve figures next to the CSV output")
    _add_common(c)

    b = sub.add_parser("bounds", help="closed-form lower-bound calibration table")
    _add_graph_source(b)
    _add_grid(b)
    b.add_argument("--er-params", default=None,
                   help="N,P used by the percolation bound (default: empirical density)")
    b.add_argument("--compare-table", default=None,
                   help="randomization table to plot against")
    b.add_argument("--curves", action="store_true", help="also write the curve CSV")
    b.add_argument("--plot", action="store_true")
    _add_common(b)

    s = sub.add_parser("scan", help="detect the highest-scoring subgraph")
    s.add_argument("--graph", required=True)
    s.add_argument("--pvalues", required=True)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--table", help="calibration table file")
    src.add_argument("--randomize", action="store_true",
                     help="calibrate by randomization before scanning")
    src.add_argument("--bounds", action="store_true",
                     help="calibrate with closed-form lower bounds")
    src.add_argument("--no-calibration", action="store_true",
                     help="score against the raw alpha (uncalibrated scan)")
    _add_grid(s)
    s.add_argument("--k-replicas", type=int, default=200,
                   help="replicas for --randomize")
    s.add_argument("--statistic", choices=("cbj", "chc", "cks"), default="cbj")
    s.add_argument("--coretree", nargs="?", const=1, type=int, default=None, metavar="D")
    s.add_argument("--significance", type=int, default=0, metavar="R",
                   help="test significance against R null replicas")
    _add_common(s)

    e = sub.add_parser("evaluate", help="precision/recall/F-score of result files")
    e.add_argument("--truth", required=True, help="truth file (one node label per line)")
    e.add_argument("--graph", required=True)
    e.add_argument("results", nargs="+", help="result documents from scan")
    e.add_argument("--plot", action="store_true")
    _add_common(e)

    w = sub.add_parser("power", help="detection power from score files")
    w.add_argument("--alt-scores", required=True, help="file with one score per line")
    w.add_argument("--null-scores", required=True)
    w.add_argument("--level", type=float, default=0.05)
    _add_common(w)
    return parser


# --- helpers -------------------------------------------------------------------

def _outfile(args, name: str) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    if path.exists() and not args.force:
        raise DataError(f"{path} exists; pass --force to overwrite")
    return path


def _load_graph(args) -> Graph:
    if getattr(args, "graph", None):
        with open(args.graph) as fh:
            return load_edge_list(fh)
    try:
        n_str, p_str = args.er.split(",")
        n, p = int(n_str), float(p_str)
    except ValueError:
        raise UsageError(f"bad --er spec {args.er!r}; expected N,P") from None
    return erdos_renyi(n, p, derive_seed(args.seed, "graph"))


def _grid(args) -> AlphaGrid:
    if getattr(args, "alpha_grid", None):
        try:
            return AlphaGrid(tuple(float(x) for x in args.alpha_grid.split(",")))
        except ValueError as exc:
            raise UsageError(f"bad --alpha-grid: {exc}") from None
    return AlphaGrid.default(getattr(args, "alpha_max", None))


def _parse_signal(spec: str, true_subgraph) -> signals_mod.SignalSpec:
    parts = spec.split(":")
    try:
        if parts[0] == "gaussian" and len(parts) == 2:
            return signals_mod.SignalSpec(kind="gaussian", mu=float(parts[1]),
                                          true_subgraph=true_subgraph)
        if parts[0] == "piecewise" and len(parts) in (2, 3):
            alpha_sig = float(parts[2]) if len(parts) == 3 else 0.01
            return signals_mod.SignalSpec(kind="piecewise", q=float(parts[1]),
                                          alpha_sig=alpha_sig,
                                          true_subgraph=true_subgraph)
    except ValueError as exc:
        raise UsageError(f"bad --signal {spec!r}: {exc}") from None
    raise UsageError(f"bad --signal {spec!r}; expected gaussian:MU or piecewise:Q[:A]")


def _write_curves_csv(path: Path, table: CalibrationTable, source: str) -> None:
    with path.open("w") as fh:
        fh.write("N,alpha,alpha_prime,source\n")
        for j, a in enumerate(table.grid):
            col = table.values[:, j]
            for i in range(table.n_max):
                fh.write(f"{i + 1},{a:.17g},{col[i]:.17g},{source}\n")


# --- commands ------------------------------------------------------------------

def cmd_generate(args) -> int:
    g = _load_graph(args)
    graph_path = _outfile(args, "graph.txt")
    pv_path = _outfile(args, "pvalues.txt")
    if args.signal:
        size = args.true_size or max(1, round(0.01 * g.node_count))
        truth = random_walk_subgraph(g, size, derive_seed(args.seed, "truth"))
        spec = _parse_signal(args.signal, truth)
        p = signals_mod.inject(derive_seed(args.seed, "signal"), spec, g)
        truth_path = _outfile(args, "truth.txt")
        with truth_path.open("w") as fh:
            fh.write("# true subgraph node labels\n")
            for v in sorted(truth):
                fh.write(g.labels[int(v)] + "\n")
    else:
        p = signals_mod.null_pvalues(g.node_count, derive_seed(args.seed, "signal"))
    with graph_path.open("w") as fh:
        fh.write(serialize_edge_list(g))
    with pv_path.open("w") as fh:
        signals_mod.save_pvalues(fh, g, p)
    return 0


def cmd_calibrate(args) -> int:
    g = _load_graph(args)
    grid = _grid(args)
    table = calibrate_randomization(
        g, grid, args.k_replicas, derive_seed(args.seed, "calibration"),
        workers=resolve_workers(args.threads),
        use_coretree=args.coretree is not None,
        coretree_d=args.coretree or 1)
    table_path = _outfile(args, "table.csv")
    table.save(table_path)
    if args.curves or args.plot:
        _write_curves_csv(_outfile(args, "curves.csv"), table, "randomization")
    if args.plot:
        from . import plots
        plots.plot_alpha_prime_curves(table, _outfile(args, "alpha_prime.png"))
    return 0


def cmd_bounds(args) -> int:
    g = _load_graph(args)
    grid = _grid(args)
    er_params = None
    if args.er_params:
        try:
            n_str, p_str = args.er_params.split(",")
            er_params = (int(n_str), float(p_str))
        except ValueError:
            raise UsageError(f"bad --er-params {args.er_params!r}") from None
    table = bound_table(g, grid, er_params=er_params)
    table.save(_outfile(args, "table.csv"))
    if args.curves or args.plot:
        _write_curves_csv(_outfile(args, "curves.csv"), table, "lower_bound")
    if args.plot:
        from . import plots
        if args.compare_table:
            other = CalibrationTable.load(args.compare_table, expected_graph=g)
            shared = [a for a in grid if a in other.grid.values][:3]
            plots.plot_bound_comparison(other, table,
                                        _outfile(args, "bounds_vs_randomization.png"),
                                        shared)
        else:
            plots.plot_alpha_prime_curves(table, _outfile(args, "alpha_prime.png"))
    return 0


def cmd_scan(args) -> int:
    with open(args.graph) as fh:
        g = load_edge_list(fh)
    with open(args.pvalues) as fh:
        p = signals_mod.load_pvalues(fh, g)
    grid = _grid(args)
    workers = resolve_workers(args.threads)
    if args.table:
        table = CalibrationTable.load(args.table, expected_graph=g)
    elif args.randomize:
        table = calibrate_randomization(g, grid, args.k_replicas,
                                        derive_seed(args.seed, "calibration"),
                                        workers=workers,
                                        use_coretree=args.coretree is not None,
                                        coretree_d=args.coretree or 1)
    elif args.bounds:
        table = bound_table(g, grid)
    else:
        table = uncalibrated_table(g, grid)
    res = detect(g, p, table, grid, statistic=args.statistic,
                            use_coretree=args.coretree is not None,
                            coretree_d=args.coretree or 1)
    res.seeds["master"] = args.seed
    if args.significance > 0:
        res = significance_test(
            res, g, table, grid, args.statistic, args.significance,
            derive_seed(args.seed, "significance"), workers=workers,
            use_coretree=args.coretree is not None, coretree_d=args.coretree or 1)
    with _outfile(args, "result.txt").open("w") as fh:
        write_result(fh, res, g)
    return 0


def _read_truth(path: str, g: Graph):
    labels = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                labels.append(line)
    try:
        return frozenset(g.id_of(lab) for lab in labels)
    except KeyError as exc:
        raise DataError(f"truth file references unknown node {exc}") from None


def cmd_evaluate(args) -> int:
    with open(args.graph) as fh:
        g = load_edge_list(fh)
    truth = _read_truth(args.truth, g)
    rows = []
    for i, rpath in enumerate(args.results):
        with open(rpath) as fh:
            res = read_result(fh, g)
        precision, recall, f = metrics_mod.prf(truth, res.subgraph)
        rows.append((i, precision, recall, f))
    with _outfile(args, "evaluate.csv").open("w") as fh:
        fh.write("run,precision,recall,fscore\n")
        for run, precision, recall, f in rows:
            fh.write(f"{run},{precision:.17g},{recall:.17g},{f:.17g}\n")
        mp = float(np.mean([r[1] for r in rows]))
        mr = float(np.mean([r[2] for r in rows]))
        mf = float(np.mean([r[3] for r in rows]))
        fh.write(f"mean,{mp:.17g},{mr:.17g},{mf:.17g}\n")
    if args.plot:
        from . import plots
        plots.plot_metric_runs(rows, _outfile(args, "metrics.png"))
    return 0


def _read_scores(path: str) -> np.ndarray:
    vals = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                vals.append(float(line))
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad score {line!r}") from None
    if not vals:
        raise DataError(f"{path}: no scores found")
    return np.asarray(vals)


def cmd_power(args) -> int:
    alts = _read_scores(args.alt_scores)
    nulls = _read_scores(args.null_scores)
    power = metrics_mod.detection_power(alts, nulls, level=args.level)
    with _outfile(args, "power.csv").open("w") as fh:
        fh.write("level,power,n_alt,n_null\n")
        fh.write(f"{args.level:.17g},{power:.17g},{len(alts)},{len(nulls)}\n")
    return 0


COMMANDS = {"generate": cmd_generate, "calibrate": cmd_calibrate,
            "bounds": cmd_bounds, "scan": cmd_scan,
            "evaluate": cmd_evaluate, "power": cmd_power}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
