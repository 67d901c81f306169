"""Command-line front end.

Subcommands: affinity (compute/export affinity matrices), detect (run one
community detection algorithm), sweep (grid experiments with CSV and
markdown reports), eval (score a partition against labels).

Exit codes: 0 success, 1 validation or parsing problem, 2 I/O problem,
3 domain error (operation undefined for the input).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import affinity as aff
from . import community, experiments, metrics
from .datasets import DATASET_NAMES, load_named_dataset
from .errors import DomainError, IngestionError, ParseError, ValidationError
from .graph import WeightedGraph, dump_edgelist, load_edgelist, load_gml
from .partition import Partition

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_DOMAIN = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad flags; remap to validation (1)."""

    def error(self, message):
        raise _UsageError(message)


def _load_graph_arg(value: str, binarize: bool = False) -> WeightedGraph:
    """Interpret an --in argument: a registered dataset name or a path
    (.gml parsed as GML, anything else as an edge list)."""
    if value in DATASET_NAMES:
        graph, _ = load_named_dataset(value)
    else:
        path = Path(value)
        with open(path, "rb") as fh:
            if path.suffix.lower() == ".gml":
                graph, _ = load_gml(fh)
            else:
                graph = load_edgelist(fh)
    return graph.binarized() if binarize else graph


def _load_partition_csv(path: str) -> dict[str, int]:
    mapping: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#") or line == "node_label,community_id":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'node_label,community_id'")
            try:
                mapping[parts[0]] = int(parts[1])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: {parts[1]!r} is not an integer") from None
    if not mapping:
        raise ParseError(f"{path}: no partition rows found")
    return mapping


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# -- subcommand implementations -------------------------------------------


def cmd_affinity(args) -> int:
    g = _load_graph_arg(args.input, args.binarize)
    spec = aff.parse_affinity_spec(args.fn)
    matrix = aff.build_affinity(g, spec)
    if args.format == "edgelist":
        if not matrix.is_symmetric():
            matrix = aff.symmetrize(matrix, args.sym)
        _write_text(args.out, dump_edgelist(aff.affinity_to_graph(matrix, args.threshold)))
    else:
        _write_text(args.out, matrix.to_csv())
    return EXIT_OK


def cmd_detect(args) -> int:
    g = _load_graph_arg(args.input, args.binarize)
    if args.algo == "louvain":
        part = community.louvain(
            g,
            community.LouvainConfig(
                min_modularity_gain=args.min_gain,
                node_order_seed=args.seed,
                max_passes=args.max_passes,
            ),
        )
        dendro = None
    elif args.algo == "girvan_newman":
        dendro = community.girvan_newman(g, weighted=not args.unweighted_betweenness)
        part = dendro.best()
    else:
        dendro = community.greedy_dendrogram(g)
        part = dendro.best()
    if args.dendrogram:
        if dendro is None:
            raise ValidationError("--dendrogram only applies to girvan_newman and greedy")
        _write_text(args.dendrogram, dendro.to_csv())
    _write_text(args.out, part.to_csv(g.node_labels))
    q = metrics.modularity(g, part)
    print(f"k={part.k} modularity={q:.6f}")
    return EXIT_OK


def _sweep_config_from_args(args) -> experiments.SweepConfig:
    algos = (
        experiments.ALGORITHM_NAMES
        if args.algos == "all"
        else tuple(a.strip() for a in args.algos.split(",") if a.strip())
    )
    pair = tuple(p.strip() for p in args.pair.split(",") if p.strip())
    if len(pair) != 2:
        raise ValidationError(f"--pair needs two function names, got {args.pair!r}")
    return experiments.SweepConfig(
        datasets=tuple(d.strip() for d in args.datasets.split(",") if d.strip()),
        algorithms=algos,
        pair=pair,  # type: ignore[arg-type]
        step=args.step,
        symmetrization=args.sym,
        threshold=args.threshold,
        metric_graph=args.metric_graph,
        seed=args.seed,
        binarize=args.binarize,
        measure_runtime=args.timings,
    )


def cmd_sweep(args) -> int:
    cfg = _sweep_config_from_args(args)
    records = experiments.run_sweep(cfg, jobs=args.jobs)
    baseline: list[experiments.SweepRecord] = []
    if args.baseline:
        for name in cfg.datasets:
            bundle = experiments.builtin_dataset(name)
            if cfg.binarize:
                bundle = experiments.DatasetBundle(
                    bundle.name, bundle.graph.binarized(), bundle.labels
                )
            baseline.extend(
                experiments.run_baseline(
                    bundle, cfg.algorithms, cfg.seed, cfg.measure_runtime
                )
            )
        baseline.sort(key=experiments._record_sort_key)
    _write_text(args.out, experiments.write_report(records, baseline, "csv"))
    if args.markdown:
        best = experiments.best_records(records, criterion=args.criterion)
        _write_text(args.markdown, experiments.write_report(best, baseline, "markdown"))
    return EXIT_OK


def cmd_eval(args) -> int:
    found = _load_partition_csv(args.partition)
    if args.dataset:
        graph, labels = load_named_dataset(args.dataset)
        truth = {graph.node_labels[i]: labels[i] for i in range(graph.n)}
    else:
        truth = _load_partition_csv(args.labels)
        graph = _load_graph_arg(args.graph) if args.graph else None
    if set(found) != set(truth):
        only_f = sorted(set(found) - set(truth))[:5]
        only_t = sorted(set(truth) - set(found))[:5]
        raise ValidationError(
            f"node sets differ between partition and labels "
            f"(e.g. only in partition: {only_f}, only in labels: {only_t})"
        )
    order = sorted(found)
    p1 = Partition([found[k] for k in order])
    p2 = Partition([truth[k] for k in order])
    print(f"nmi={metrics.nmi(p1, p2):.6f}")
    if graph is not None:
        if set(order) != set(graph.node_labels):
            raise ValidationError("partition node set does not match the graph")
        membership = [found[lab] for lab in graph.node_labels]
        print(f"modularity={metrics.modularity(graph, Partition(membership)):.6f}")
    return EXIT_OK


# -- parser wiring ---------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="affinet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--binarize", action="store_true",
                       help="force every ingested edge weight to 1")

    p_aff = sub.add_parser("affinity", help="compute an affinity matrix or network")
    p_aff.add_argument("--in", dest="input", required=True,
                       help="graph file or dataset name " + str(DATASET_NAMES))
    p_aff.add_argument("--fn", default="bf",
                       help="bf | bcf | mach | combine(f1,f2,alpha=A,beta=B[,sym=S])")
    p_aff.add_argument("--sym", default="mean", choices=("mean", "max", "min"),
                       help="symmetrization used for edge-list output")
    p_aff.add_argument("--format", dest="format", default="matrix",
                       choices=("matrix", "edgelist"))
    p_aff.add_argument("--threshold", type=float, default=0.0,
                       help="drop affinity values <= this when exporting an edge list")
    p_aff.add_argument("--out", default="-", help="output path ('-' for stdout)")
    add_common(p_aff)
    p_aff.set_defaults(func=cmd_affinity)

    p_det = sub.add_parser("detect", help="run a community detection algorithm")
    p_det.add_argument("--in", dest="input", required=True)
    p_det.add_argument("--algo", required=True,
                       choices=("louvain", "girvan_newman", "greedy"))
    p_det.add_argument("--out", default="partition.csv",
                       help="partition CSV path ('-' for stdout)")
    p_det.add_argument("--dendrogram", default=None,
                       help="also export the dendrogram CSV (divisive/agglomerative only)")
    p_det.add_argument("--seed", type=int, default=42)
    p_det.add_argument("--min-gain", dest="min_gain", type=float, default=1e-7)
    p_det.add_argument("--max-passes", dest="max_passes", type=int, default=100)
    p_det.add_argument("--unweighted-betweenness", action="store_true",
                       help="girvan_newman: shortest paths by hop count, not 1/weight")
    add_common(p_det)
    p_det.set_defaults(func=cmd_detect)

    p_sw = sub.add_parser("sweep", help="grid sweep over affinity combinations")
    p_sw.add_argument("--config", default=None,
                      help="flat key=value file; explicit flags override it")
    p_sw.add_argument("--datasets", default="zachary")
    p_sw.add_argument("--algos", default="all")
    p_sw.add_argument("--pair", default="bf,bcf")
    p_sw.add_argument("--step", type=float, default=0.05)
    p_sw.add_argument("--sym", default="mean", choices=("mean", "max", "min"))
    p_sw.add_argument("--threshold", type=float, default=0.0)
    p_sw.add_argument("--metric-graph", dest="metric_graph", default="affinity",
                      choices=("affinity", "adjacency"))
    p_sw.add_argument("--seed", type=int, default=42)
    p_sw.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_sw.add_argument("--baseline", action="store_true",
                      help="include per-algorithm adjacency baseline rows")
    p_sw.add_argument("--timings", action="store_true",
                      help="record wall-clock runtimes (breaks byte-identical reruns)")
    p_sw.add_argument("--out", default="-", help="CSV output path ('-' for stdout)")
    p_sw.add_argument("--markdown", default=None, help="best-results summary path")
    p_sw.add_argument("--criterion", default="modularity", choices=("modularity", "nmi"),
                      help="ranking used for the markdown summary")
    add_common(p_sw)
    p_sw.set_defaults(func=cmd_sweep)

    p_ev = sub.add_parser("eval", help="score a partition against ground truth")
    p_ev.add_argument("--partition", required=True, help="partition CSV")
    group = p_ev.add_mutually_exclusive_group(required=True)
    group.add_argument("--labels", help="ground-truth partition CSV")
    group.add_argument("--dataset", help="registered dataset name")
    p_ev.add_argument("--graph", default=None,
                      help="graph file for modularity (implied by --dataset)")
    p_ev.set_defaults(func=cmd_eval)

    return parser


def _apply_config_file(argv: list[str], parser: _Parser) -> list[str]:
    """Pull --config out of a sweep invocation and fold the file's
    key=value pairs in as defaults (explicit flags still win)."""
    if "sweep" not in argv or "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise _UsageError("--config needs a path")
    path = argv[idx + 1]
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError:
        raise
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        overrides[key.strip().replace("-", "_")] = value.strip()
    sweep = next(
        a for a in parser._subparsers._group_actions[0].choices.values()  # type: ignore[union-attr]
        if a.prog.endswith("sweep")
    )
    valid = {a.dest: a for a in sweep._actions}
    defaults = {}
    for key, value in overrides.items():
        if key not in valid:
            raise ValidationError(f"{path}: unknown config key {key!r}")
        action = valid[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif action.type is int:
            defaults[key] = int(value)
        elif action.type is float:
            defaults[key] = float(value)
        else:
            defaults[key] = value
    sweep.set_defaults(**defaults)
    return [a for i, a in enumerate(argv) if i not in (idx, idx + 1)]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(argv, parser)
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(f"affinet: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ParseError, ValidationError) as e:
        print(f"affinet: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except IngestionError as e:
        print(f"affinet: error: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"affinet: error: {e}", file=sys.stderr)
        return EXIT_IO
    except DomainError as e:
        print(f"affinet: error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
