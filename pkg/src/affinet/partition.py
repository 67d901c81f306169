"""Community assignments and the nested partition sequences the divisive
and agglomerative algorithms produce."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ValidationError


class Partition:
    """Assignment of every node to exactly one community.

    Community ids are dense integers 0..k-1, renumbered in order of first
    appearance so that equal groupings compare equal regardless of the
    labels they were built from.
    """

    __slots__ = ("membership", "k")

    def __init__(self, membership: Sequence[int]):
        raw = np.asarray(membership)
        if raw.ndim != 1 or raw.size == 0:
            raise ValidationError("membership must be a non-empty 1-d sequence")
        dense: dict = {}
        out = np.empty(raw.size, dtype=np.int64)
        for i, c in enumerate(raw.tolist()):
            if c not in dense:
                dense[c] = len(dense)
            out[i] = dense[c]
        out.flags.writeable = False
        self.membership = out
        self.k = len(dense)

    @classmethod
    def from_communities(cls, communities: Iterable[Iterable[int]], n: int) -> "Partition":
        membership = np.full(n, -1, dtype=np.int64)
        for cid, group in enumerate(communities):
            for v in group:
                if membership[v] != -1:
                    raise ValidationError(f"node {v} assigned to more than one community")
                membership[v] = cid
        if (membership == -1).any():
            missing = np.flatnonzero(membership == -1).tolist()
            raise ValidationError(f"nodes {missing} not assigned to any community")
        return cls(membership)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @property
    def n(self) -> int:
        return int(self.membership.size)

    def communities(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.k)]
        for v, c in enumerate(self.membership.tolist()):
            groups[c].append(v)
        return groups

    def sizes(self) -> np.ndarray:
        return np.bincount(self.membership, minlength=self.k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n == other.n and bool((self.membership == other.membership).all())

    def __hash__(self):
        return hash(self.membership.tobytes())

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, k={self.k})"

    def to_csv(self, node_labels: Sequence[str]) -> str:
        """Two-column export, nodes in ascending dense index order."""
        if len(node_labels) != self.n:
            raise ValidationError("node_labels length does not match partition size")
        lines = ["node_label,community_id"]
        lines += [f"{node_labels[v]},{self.membership[v]}" for v in range(self.n)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Dendrogram:
    """Ordered (partition, modularity) snapshots from one detection run.

    Divisive runs go coarse to fine, agglomerative runs fine to coarse;
    consecutive snapshots differ by exactly one split or one merge.
    """

    snapshots: tuple[tuple[Partition, float], ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def best(self) -> Partition:
        return best_partition(self)

    def to_csv(self) -> str:
        lines = ["snapshot_index,k,modularity"]
        lines += [
            f"{i},{p.k},{q:.6f}" for i, (p, q) in enumerate(self.snapshots)
        ]
        return "\n".join(lines) + "\n"


def best_partition(d: Dendrogram) -> Partition:
    """Snapshot with maximum modularity; ties prefer fewer communities,
    then the earliest snapshot."""
    if len(d) == 0:
        raise DomainError("empty dendrogram has no best partition")
    best_idx = 0
    best_q, best_k = d.snapshots[0][1], d.snapshots[0][0].k
    for i, (p, q) in enumerate(d.snapshots):
        if q > best_q or (q == best_q and p.k < best_k):
            best_idx, best_q, best_k = i, q, p.k
    return d.snapshots[best_idx][0]
