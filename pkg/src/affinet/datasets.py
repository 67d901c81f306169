"""Benchmark dataset registry.

The karate-club network is public domain and embedded below together
with its two-faction split. The dolphin and polbooks networks are loaded
from their canonical GML distributions: drop ``dolphins.gml`` /
``polbooks.gml`` either into this package's ``data/`` directory or into
a directory named by the AFFINET_DATA_DIR environment variable (which
overrides the default search path). polbooks carries its three label
classes as per-node ``value`` attributes; for dolphins, which ships
without labels, a sidecar ``dolphins.labels`` file in partition-CSV
format ("node_label,community_id") supplies the two-group division.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import IngestionError, ParseError, ValidationError
from .graph import NodeLabels, WeightedGraph, load_gml

DATASET_NAMES = ("zachary", "dolphin", "polbooks")

_EXPECTED = {"zachary": (34, 2), "dolphin": (62, 2), "polbooks": (105, 3)}
_GML_FILES = {"dolphin": "dolphins.gml", "polbooks": "polbooks.gml"}
_DOWNLOAD_HINT = (
    "obtain it from M. E. J. Newman's network data page "
    "(https://websites.umich.edu/~mejn/netdata/) and place the .gml file in "
    "AFFINET_DATA_DIR or the package data/ directory"
)

# Zachary karate club: 78 unit-weight edges, 1-indexed actors.
ZACHARY_EDGES = (
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (1, 8), (1, 9), (1, 11),
    (1, 12), (1, 13), (1, 14), (1, 18), (1, 20), (1, 22), (1, 32),
    (2, 3), (2, 4), (2, 8), (2, 14), (2, 18), (2, 20), (2, 22), (2, 31),
    (3, 4), (3, 8), (3, 9), (3, 10), (3, 14), (3, 28), (3, 29), (3, 33),
    (4, 8), (4, 13), (4, 14),
    (5, 7), (5, 11),
    (6, 7), (6, 11), (6, 17),
    (7, 17),
    (9, 31), (9, 33), (9, 34),
    (10, 34),
    (14, 34),
    (15, 33), (15, 34),
    (16, 33), (16, 34),
    (19, 33), (19, 34),
    (20, 34),
    (21, 33), (21, 34),
    (23, 33), (23, 34),
    (24, 26), (24, 28), (24, 30), (24, 33), (24, 34),
    (25, 26), (25, 28), (25, 32),
    (26, 32),
    (27, 30), (27, 34),
    (28, 34),
    (29, 32), (29, 34),
    (30, 33), (30, 34),
    (31, 33), (31, 34),
    (32, 33), (32, 34),
    (33, 34),
)

# Actors who sided with the instructor after the split; the rest went
# with the club officer.
ZACHARY_INSTRUCTOR_FACTION = frozenset(
    {1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 17, 18, 20, 22}
)


def zachary() -> tuple[WeightedGraph, NodeLabels]:
    labels = [str(i) for i in range(1, 35)]
    edges = [(u - 1, v - 1, 1.0) for u, v in ZACHARY_EDGES]
    graph = WeightedGraph(labels, edges)
    truth = {
        i: (0 if (i + 1) in ZACHARY_INSTRUCTOR_FACTION else 1) for i in range(34)
    }
    return graph, truth


def data_search_dirs() -> list[Path]:
    env = os.environ.get("AFFINET_DATA_DIR")
    if env:
        return [Path(p) for p in env.split(os.pathsep) if p]
    return [Path(__file__).parent / "data"]


def find_data_file(filename: str) -> Path | None:
    for d in data_search_dirs():
        candidate = d / filename
        if candidate.is_file():
            return candidate
    return None


def _load_sidecar_labels(gml_path: Path, graph: WeightedGraph) -> NodeLabels | None:
    sidecar = gml_path.with_suffix(".labels")
    if not sidecar.is_file():
        return None
    labels: NodeLabels = {}
    text = sidecar.read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line == "node_label,community_id":
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"{sidecar}:{lineno}: expected 'node_label,community_id'")
        try:
            labels[graph.index_of(parts[0])] = int(parts[1])
        except KeyError:
            raise ValidationError(
                f"{sidecar}:{lineno}: node {parts[0]!r} is not in the graph"
            ) from None
    return labels or None


def load_named_dataset(name: str) -> tuple[WeightedGraph, NodeLabels]:
    """Graph plus ground-truth labels for one of the registered datasets."""
    if name not in DATASET_NAMES:
        raise ValidationError(
            f"unknown dataset {name!r}; valid names are: {', '.join(DATASET_NAMES)}"
        )
    if name == "zachary":
        return zachary()

    filename = _GML_FILES[name]
    path = find_data_file(filename)
    if path is None:
        searched = ", ".join(str(d) for d in data_search_dirs())
        raise IngestionError(
            f"dataset {name!r} needs {filename} (searched: {searched}); {_DOWNLOAD_HINT}"
        )
    with open(path, "rb") as fh:
        graph, truth = load_gml(fh)
    if truth is None:
        truth = _load_sidecar_labels(path, graph)
    if truth is None:
        raise IngestionError(
            f"{path} carries no per-node 'value' attributes and no sidecar "
            f"{path.with_suffix('.labels').name} file; ground-truth labels are required"
        )

    n_exp, k_exp = _EXPECTED[name]
    if graph.n != n_exp:
        raise IngestionError(
            f"{path}: expected {n_exp} nodes for dataset {name!r}, found {graph.n}"
        )
    if len(truth) != graph.n:
        raise IngestionError(f"{path}: ground-truth labels do not cover every node")
    if len(set(truth.values())) != k_exp:
        raise IngestionError(
            f"{path}: expected {k_exp} label classes for dataset {name!r}, "
            f"found {len(set(truth.values()))}"
        )
    return graph, truth
