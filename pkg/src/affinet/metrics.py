"""Partition quality metrics: weighted modularity as the internal index,
normalized mutual information against ground truth as the external one.

Entropies are in nats; NMI is normalization-invariant so the log base
never shows up in results.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import WeightedGraph
from .partition import Partition


@dataclass(frozen=True)
class ContingencyTable:
    """Joint community-membership counts between two partitions."""

    counts: np.ndarray  # (k1, k2) ints
    n: int

    @classmethod
    def from_partitions(cls, p1: Partition, p2: Partition) -> "ContingencyTable":
        if p1.n != p2.n:
            raise DomainError(
                f"partitions cover different node sets ({p1.n} vs {p2.n} nodes)"
            )
        counts = np.zeros((p1.k, p2.k), dtype=np.int64)
        np.add.at(counts, (p1.membership, p2.membership), 1)
        return cls(counts, p1.n)

    @property
    def row_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _entropy_from_counts(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def entropy(p: Partition) -> float:
    """Shannon entropy of the community-size distribution, in nats."""
    if p.n == 0:
        raise DomainError("entropy of an empty partition is undefined")
    return _entropy_from_counts(p.sizes(), p.n)


def mutual_information(p1: Partition, p2: Partition) -> float:
    """Mutual information between two partitions of the same node set."""
    table = ContingencyTable.from_partitions(p1, p2)
    n = table.n
    nz = table.counts > 0
    joint = table.counts[nz] / n
    outer = np.outer(table.row_marginals, table.col_marginals)[nz] / (n * n)
    value = float((joint * np.log(joint / outer)).sum())
    return max(value, 0.0)  # clip float dust; I >= 0 always


def nmi(p1: Partition, p2: Partition) -> float:
    """2 I(X;Y) / (H(X) + H(Y)); 1 iff identical up to relabeling."""
    h1, h2 = entropy(p1), entropy(p2)
    if h1 + h2 == 0.0:
        warnings.warn("NMI of two single-community partitions is undefined; returning 0")
        return 0.0
    return 2.0 * mutual_information(p1, p2) / (h1 + h2)


def modularity(g: WeightedGraph, p: Partition) -> float:
    """Weighted modularity: sum over communities of e_ii - a_i^2.

    e_ii is the fraction of edge-end weight with both ends in community i
    and a_i the fraction of edge ends attached to it.
    """
    if p.n != g.n:
        raise DomainError(f"partition covers {p.n} nodes but graph has {g.n}")
    two_m = 2.0 * g.total_weight()
    if two_m == 0.0:
        raise DomainError("modularity is undefined for an edgeless graph")
    intra = np.zeros(p.k)
    member = p.membership
    for u, v, w in g.edges():
        if member[u] == member[v]:
            intra[member[u]] += w
    strengths = np.zeros(p.k)
    for v in range(g.n):
        strengths[member[v]] += g.strength(v)
    e_ii = 2.0 * intra / two_m
    a_i = strengths / two_m
    return float((e_ii - a_i * a_i).sum())
