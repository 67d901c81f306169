"""Parameter-sweep harness: baselines on raw adjacency, (alpha, beta)
grid sweeps over affinity combinations, best-result summaries, and CSV /
markdown reports.

Sweeps are deterministic: given the same config (including the seed) the
emitted CSV is byte-identical regardless of worker count, because records
are sorted before writing and runtimes are only measured when explicitly
requested.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import affinity as aff
from . import community, metrics
from .datasets import DATASET_NAMES, load_named_dataset
from .errors import ValidationError
from .graph import NodeLabels, WeightedGraph
from .partition import Partition

ALGORITHM_NAMES = ("girvan_newman", "greedy", "louvain")

CSV_HEADER = (
    "dataset,algorithm,provenance,alpha,beta,k_found,"
    "modularity_affinity,modularity_adjacency,nmi,runtime_ms"
)


@dataclass(frozen=True)
class DatasetBundle:
    """A benchmark graph with its ground-truth community labels."""

    name: str
    graph: WeightedGraph
    labels: NodeLabels

    def __post_init__(self):
        if set(self.labels) != set(range(self.graph.n)):
            raise ValidationError("ground-truth labels must cover every node exactly once")

    @property
    def expected_k(self) -> int:
        return len(set(self.labels.values()))

    def label_partition(self) -> Partition:
        return Partition([self.labels[v] for v in range(self.graph.n)])


def builtin_dataset(name: str) -> DatasetBundle:
    graph, labels = load_named_dataset(name)
    return DatasetBundle(name, graph, labels)


@dataclass(frozen=True)
class SweepConfig:
    """Everything that determines a sweep's output.

    The grid enumerates multiples of `step` inside the admissible region
    0 < alpha + beta <= 1. `metric_graph` picks which modularity column
    summaries rank by; the CSV always records both.
    """

    datasets: tuple[str, ...] = ("zachary",)
    algorithms: tuple[str, ...] = ALGORITHM_NAMES
    pair: tuple[str, str] = ("bf", "bcf")
    step: float = 0.05
    symmetrization: str = "mean"
    threshold: float = 0.0
    metric_graph: str = "affinity"
    seed: int = 42
    binarize: bool = False
    measure_runtime: bool = False

    def __post_init__(self):
        if not self.datasets:
            raise ValidationError("at least one dataset is required")
        for d in self.datasets:
            if d not in DATASET_NAMES:
                raise ValidationError(
                    f"unknown dataset {d!r}; valid names are: {', '.join(DATASET_NAMES)}"
                )
        if not self.algorithms:
            raise ValidationError("at least one algorithm is required")
        for a in self.algorithms:
            if a not in ALGORITHM_NAMES:
                raise ValidationError(
                    f"unknown algorithm {a!r}; valid names are: {', '.join(ALGORITHM_NAMES)}"
                )
        if not 0.0 < self.step <= 1.0:
            raise ValidationError(f"grid step must be in (0, 1], got {self.step}")
        for f in self.pair:
            if f not in ("bf", "bcf", "mach"):
                raise ValidationError(f"unknown affinity function {f!r}")
        if self.symmetrization not in ("mean", "max", "min"):
            raise ValidationError(f"unknown symmetrization {self.symmetrization!r}")
        if self.metric_graph not in ("affinity", "adjacency"):
            raise ValidationError(f"metric_graph must be 'affinity' or 'adjacency'")


@dataclass(frozen=True)
class SweepRecord:
    """Outcome of one algorithm run at one grid point (or baseline)."""

    dataset: str
    algorithm: str
    provenance: str
    alpha: float | None
    beta: float | None
    k_found: int
    modularity_affinity: float
    modularity_adjacency: float
    nmi: float
    runtime_ms: float = 0.0

    def csv_row(self) -> str:
        def f(x):
            return "" if x is None else f"{x:.6f}"

        return (
            f"{self.dataset},{self.algorithm},{self.provenance},"
            f"{f(self.alpha)},{f(self.beta)},{self.k_found},"
            f"{self.modularity_affinity:.6f},{self.modularity_adjacency:.6f},"
            f"{self.nmi:.6f},{self.runtime_ms:.6f}"
        )


def admissible_grid(step: float) -> list[tuple[float, float]]:
    """All (alpha, beta) multiples of step with 0 < alpha + beta <= 1."""
    if not 0.0 < step <= 1.0:
        raise ValidationError(f"grid step must be in (0, 1], got {step}")
    kmax = int(np.floor(1.0 / step + 1e-9))
    points = []
    for i in range(kmax + 1):
        for j in range(kmax + 1):
            if 1 <= i + j <= kmax:
                points.append((i * step, j * step))
    return points


def _run_algorithm(name: str, g: WeightedGraph, seed: int) -> Partition:
    if name == "louvain":
        return community.louvain(g, community.LouvainConfig(node_order_seed=seed))
    if name == "girvan_newman":
        return community.girvan_newman(g).best()
    if name == "greedy":
        return community.greedy_modularity(g)
    raise ValidationError(f"unknown algorithm {name!r}")


def run_baseline(
    d: DatasetBundle,
    algorithms: tuple[str, ...] = ALGORITHM_NAMES,
    seed: int = 42,
    measure_runtime: bool = False,
) -> list[SweepRecord]:
    """One record per algorithm on the raw adjacency graph."""
    truth = d.label_partition()
    records = []
    for algo in sorted(algorithms):
        t0 = time.perf_counter()
        part = _run_algorithm(algo, d.graph, seed)
        dt = (time.perf_counter() - t0) * 1000.0 if measure_runtime else 0.0
        q = metrics.modularity(d.graph, part)
        records.append(
            SweepRecord(
                dataset=d.name,
                algorithm=algo,
                provenance="adjacency",
                alpha=None,
                beta=None,
                k_found=part.k,
                modularity_affinity=q,
                modularity_adjacency=q,
                nmi=metrics.nmi(part, truth),
                runtime_ms=dt,
            )
        )
    return records


# Per-worker state for sweep parallelism; populated by the pool
# initializer so each grid-point task only carries small indices.
_WORKER_CTX: dict = {}


def _init_worker(ctx: dict) -> None:
    _WORKER_CTX.update(ctx)


def _prepare_context(cfg: SweepConfig) -> dict:
    datasets = {}
    for name in cfg.datasets:
        bundle = builtin_dataset(name)
        graph = bundle.graph.binarized() if cfg.binarize else bundle.graph
        f1 = aff.build_affinity(graph, cfg.pair[0])
        f2 = aff.build_affinity(graph, cfg.pair[1])
        datasets[name] = {
            "graph": graph,
            "truth": bundle.label_partition(),
            "f1": f1,
            "f2": f2,
        }
    return {"cfg": cfg, "datasets": datasets}


def _sweep_point(task: tuple[str, float, float]) -> list[SweepRecord]:
    name, alpha, beta = task
    cfg: SweepConfig = _WORKER_CTX["cfg"]
    ds = _WORKER_CTX["datasets"][name]
    combined = aff.combine(ds["f1"], ds["f2"], aff.CombinationParams(alpha, beta))
    sym = aff.symmetrize(combined, cfg.symmetrization)
    g_aff = aff.affinity_to_graph(sym, cfg.threshold)
    records = []
    for algo in sorted(cfg.algorithms):
        t0 = time.perf_counter()
        part = _run_algorithm(algo, g_aff, cfg.seed)
        dt = (time.perf_counter() - t0) * 1000.0 if cfg.measure_runtime else 0.0
        records.append(
            SweepRecord(
                dataset=name,
                algorithm=algo,
                provenance=sym.provenance,
                alpha=alpha,
                beta=beta,
                k_found=part.k,
                modularity_affinity=metrics.modularity(g_aff, part),
                modularity_adjacency=metrics.modularity(ds["graph"], part),
                nmi=metrics.nmi(part, ds["truth"]),
                runtime_ms=dt,
            )
        )
    return records


def _record_sort_key(r: SweepRecord):
    return (
        r.dataset,
        r.algorithm,
        r.alpha if r.alpha is not None else -1.0,
        r.beta if r.beta is not None else -1.0,
    )


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[SweepRecord]:
    """Run every algorithm at every admissible grid point of every dataset.

    Output order (and content) is independent of `jobs`.
    """
    grid = admissible_grid(cfg.step)
    ctx = _prepare_context(cfg)
    tasks = [(name, a, b) for name in cfg.datasets for a, b in grid]
    records: list[SweepRecord] = []
    if jobs <= 1:
        _init_worker(ctx)
        try:
            for task in tasks:
                records.extend(_sweep_point(task))
        finally:
            _WORKER_CTX.clear()
    else:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(ctx,)
        ) as pool:
            for recs in pool.map(_sweep_point, tasks, chunksize=4):
                records.extend(recs)
    records.sort(key=_record_sort_key)
    return records


def best_records(
    records: list[SweepRecord], criterion: str = "modularity"
) -> list[SweepRecord]:
    """Best record per (dataset, algorithm) group.

    criterion 'modularity' ranks by modularity_affinity, 'nmi' by nmi;
    ties prefer the smaller alpha + beta, then the smaller alpha.
    """
    if criterion not in ("modularity", "nmi"):
        raise ValidationError("criterion must be 'modularity' or 'nmi'")
    if not records:
        raise ValidationError("best_records needs at least one record")

    def value(r: SweepRecord) -> float:
        return r.modularity_affinity if criterion == "modularity" else r.nmi

    def tie_key(r: SweepRecord):
        a = r.alpha if r.alpha is not None else 0.0
        b = r.beta if r.beta is not None else 0.0
        return (a + b, a)

    best: dict[tuple[str, str], SweepRecord] = {}
    for r in records:
        key = (r.dataset, r.algorithm)
        cur = best.get(key)
        if (
            cur is None
            or value(r) > value(cur)
            or (value(r) == value(cur) and tie_key(r) < tie_key(cur))
        ):
            best[key] = r
    return [best[k] for k in sorted(best)]


def write_report(
    records: list[SweepRecord],
    baseline: list[SweepRecord] = (),
    format: str = "csv",
) -> str:
    """Render records as the flat CSV schema or as markdown tables
    mirroring the benchmark layout (Dataset, Algorithm, NMI, Mod.)."""
    if format == "csv":
        rows = [CSV_HEADER]
        rows += [r.csv_row() for r in baseline]
        rows += [r.csv_row() for r in records]
        return "\n".join(rows) + "\n"
    if format == "markdown":
        out = []

        def table(rs: list[SweepRecord], title: str):
            out.append(f"## {title}")
            out.append("")
            out.append("| Dataset | Algorithm | NMI | Mod. |")
            out.append("|---|---|---|---|")
            for r in rs:
                out.append(
                    f"| {r.dataset} | {r.algorithm} | {r.nmi:.2f} "
                    f"| {r.modularity_affinity:.2f} |"
                )
            out.append("")

        if baseline:
            table(sorted(baseline, key=_record_sort_key), "Adjacency baseline")
        if records:
            table(sorted(records, key=_record_sort_key), "Affinity networks")
        return "\n".join(out)
    raise ValidationError(f"unknown report format {format!r}")
