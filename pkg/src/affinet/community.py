"""Modularity-based community detection: local moving with aggregation
(louvain), divisive edge removal by betweenness (girvan_newman), and
agglomerative merging by modularity gain (greedy_modularity).

All three consume an undirected weighted graph as-is; to detect on an
affinity network, convert it with affinity_to_graph first and pass the
result here. Disconnected inputs are legal everywhere.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass

import numpy as np

from . import metrics
from .betweenness import (
    betweenness_arrays,
    build_csr,
    components_arrays,
    edge_lengths,
    _reachable_from,
)
from .errors import DomainError, ValidationError
from .graph import WeightedGraph
from .partition import Dendrogram, Partition, best_partition

__all__ = [
    "LouvainConfig",
    "louvain",
    "girvan_newman",
    "greedy_modularity",
    "greedy_dendrogram",
    "best_partition",
]


@dataclass(frozen=True)
class LouvainConfig:
    """Loop control for the local-moving phase.

    A node move is accepted only if it improves modularity by at least
    min_modularity_gain; a level ends after max_passes sweeps at the
    latest. node_order_seed fixes the shuffled scan order, making runs
    bit-reproducible.
    """

    min_modularity_gain: float = 1e-7
    node_order_seed: int = 42
    max_passes: int = 100

    def __post_init__(self):
        if not self.min_modularity_gain > 0:
            raise ValidationError("min_modularity_gain must be positive")
        if self.max_passes < 1:
            raise ValidationError("max_passes must be at least 1")


def _flat_membership(groups: list[list[int]], n: int) -> np.ndarray:
    membership = np.empty(n, dtype=np.int64)
    for c, nodes in enumerate(groups):
        for v in nodes:
            membership[v] = c
    return membership


def louvain(
    g: WeightedGraph,
    cfg: LouvainConfig | None = None,
    *,
    return_history: bool = False,
):
    """Two-phase modularity optimization.

    Phase one sweeps nodes in seeded shuffled order, moving each to the
    neighboring community with the largest positive modularity gain;
    phase two collapses communities into super-nodes and repeats. Returns
    the final partition (and, optionally, modularity recorded after each
    sweep, measured on the original graph).
    """
    if g.m == 0:
        raise DomainError("community detection needs at least one edge")
    cfg = cfg or LouvainConfig()
    rng = random.Random(cfg.node_order_seed)
    m_w = g.total_weight()

    adj: list[dict[int, float]] = [dict(g.neighbors(u)) for u in range(g.n)]
    loops = [0.0] * g.n
    groups: list[list[int]] = [[v] for v in range(g.n)]
    history: list[float] = []

    while True:
        nloc = len(adj)
        strength = [sum(adj[u].values()) + 2.0 * loops[u] for u in range(nloc)]
        com = list(range(nloc))
        tot = strength.copy()
        level_moved = False

        for _ in range(cfg.max_passes):
            moved = False
            order = list(range(nloc))
            rng.shuffle(order)
            for u in order:
                cu = com[u]
                k_uc: dict[int, float] = {}
                for v, w in adj[u].items():
                    k_uc[com[v]] = k_uc.get(com[v], 0.0) + w
                tot[cu] -= strength[u]
                base = k_uc.get(cu, 0.0) - strength[u] * tot[cu] / (2.0 * m_w)
                best_c, best_score = cu, base
                for c in sorted(k_uc):
                    if c == cu:
                        continue
                    score = k_uc[c] - strength[u] * tot[c] / (2.0 * m_w)
                    if score > best_score:
                        best_score, best_c = score, c
                if best_c != cu and (best_score - base) / m_w >= cfg.min_modularity_gain:
                    com[u] = best_c
                    tot[best_c] += strength[u]
                    moved = True
                else:
                    tot[cu] += strength[u]

            flat = np.empty(g.n, dtype=np.int64)
            for u in range(nloc):
                for v in groups[u]:
                    flat[v] = com[u]
            history.append(metrics.modularity(g, Partition(flat)))
            if moved:
                level_moved = True
            else:
                break

        if not level_moved:
            break
        mapping = {c: i for i, c in enumerate(sorted(set(com)))}
        ncom = len(mapping)
        if ncom == nloc:
            break
        new_adj: list[dict[int, float]] = [dict() for _ in range(ncom)]
        new_loops = [0.0] * ncom
        for u in range(nloc):
            cu = mapping[com[u]]
            new_loops[cu] += loops[u]
            for v, w in adj[u].items():
                cv = mapping[com[v]]
                if cu == cv:
                    if u < v:
                        new_loops[cu] += w
                else:
                    new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
        new_groups: list[list[int]] = [[] for _ in range(ncom)]
        for u in range(nloc):
            new_groups[mapping[com[u]]].extend(groups[u])
        adj, loops, groups = new_adj, new_loops, new_groups

    final_groups: list[list[int]] = [[] for _ in range(len(set(com)))]
    mapping = {c: i for i, c in enumerate(sorted(set(com)))}
    for u in range(len(adj)):
        final_groups[mapping[com[u]]].extend(groups[u])
    part = Partition(_flat_membership(final_groups, g.n))
    if return_history:
        return part, history
    return part


# -- divisive algorithm ----------------------------------------------------


def girvan_newman(
    g: WeightedGraph,
    weighted: bool = True,
    *,
    return_removals: bool = False,
):
    """Remove edges one at a time by highest betweenness, recomputing
    betweenness after every removal.

    Returns a dendrogram holding the initial component partition and one
    snapshot per split, down to all-singletons; snapshot modularity is
    measured on the input graph. Betweenness ties are broken toward the
    lexicographically smallest edge.
    """
    if g.m == 0:
        raise DomainError("community detection needs at least one edge")
    edges = g.edges()  # sorted (u, v); argmax on ties picks the smallest
    m = len(edges)
    eu = np.array([e[0] for e in edges], dtype=np.int64)
    ev = np.array([e[1] for e in edges], dtype=np.int64)
    ew = np.array([e[2] for e in edges])
    lengths = edge_lengths(ew, weighted)

    alive = np.ones(m, dtype=bool)
    comp = components_arrays(g.n, eu, ev)
    bet = np.zeros(m)
    dirty = set(range(int(comp.max()) + 1))
    next_comp = int(comp.max()) + 1

    def snapshot(snaps):
        p = Partition(comp.copy())
        snaps.append((p, metrics.modularity(g, p)))

    snapshots: list[tuple[Partition, float]] = []
    snapshot(snapshots)
    removals: list[tuple[int, int]] = []

    while alive.any():
        for c in sorted(dirty):
            members = np.flatnonzero(comp == c)
            sel = np.flatnonzero(alive & (comp[eu] == c))
            if len(sel) == 0:
                continue
            loc = np.full(g.n, -1, dtype=np.int64)
            loc[members] = np.arange(len(members))
            sub = betweenness_arrays(
                len(members), loc[eu[sel]], loc[ev[sel]], lengths[sel]
            )
            bet[sel] = sub
        dirty.clear()

        masked = np.where(alive, bet, -np.inf)
        idx = int(np.argmax(masked))
        alive[idx] = False
        removals.append((int(eu[idx]), int(ev[idx])))

        u, v = int(eu[idx]), int(ev[idx])
        cu = int(comp[u])
        live = np.flatnonzero(alive)
        indptr, nbrs, _ = build_csr(g.n, eu[live], ev[live], live)
        seen = _reachable_from(indptr, nbrs, np.int64(g.n), np.int64(u))
        if not seen[v]:
            side_v = (comp == cu) & ~seen
            comp[side_v] = next_comp
            dirty.update((cu, next_comp))
            next_comp += 1
            snapshot(snapshots)
        else:
            dirty.add(cu)

    dendro = Dendrogram(tuple(snapshots))
    if return_removals:
        return dendro, removals
    return dendro


# -- agglomerative algorithm -------------------------------------------------


def greedy_dendrogram(g: WeightedGraph) -> Dendrogram:
    """Merge the connected community pair with the largest modularity
    change, from singletons until no connected pair remains; ties prefer
    the smallest community-id pair. Records one snapshot per merge."""
    if g.m == 0:
        raise DomainError("community detection needs at least one edge")
    n = g.n
    two_m = 2.0 * g.total_weight()
    a = np.array([g.strength(v) / two_m for v in range(n)])

    dq: list[dict[int, float]] = [dict() for _ in range(n)]
    for u, v, w in g.edges():
        val = 2.0 * (w / two_m - a[u] * a[v])
        dq[u][v] = val
        dq[v][u] = val

    version: dict[tuple[int, int], int] = {}
    heap: list[tuple[float, int, int, int]] = []

    def push(i: int, j: int, val: float):
        lo, hi = (i, j) if i < j else (j, i)
        ver = version.get((lo, hi), 0) + 1
        version[(lo, hi)] = ver
        heapq.heappush(heap, (-val, lo, hi, ver))

    for u in range(n):
        for v, val in dq[u].items():
            if u < v:
                push(u, v, val)

    member = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    q = float(-(a * a).sum())  # all singletons, no self-loops
    snapshots: list[tuple[Partition, float]] = [(Partition(member.copy()), q)]

    while heap:
        negval, i, j, ver = heapq.heappop(heap)
        if version.get((i, j)) != ver or not (active[i] and active[j]):
            continue
        val = -negval
        q += val

        neighbors = sorted((set(dq[i]) | set(dq[j])) - {i, j})
        for k in neighbors:
            in_i, in_j = k in dq[i], k in dq[j]
            if in_i and in_j:
                newval = dq[i][k] + dq[j][k]
            elif in_i:
                newval = dq[i][k] - 2.0 * a[j] * a[k]
            else:
                newval = dq[j][k] - 2.0 * a[i] * a[k]
            dq[i][k] = newval
            dq[k][i] = newval
            dq[k].pop(j, None)
            push(i, k, newval)
        a[i] += a[j]
        dq[i].pop(j, None)
        dq[j].clear()
        active[j] = False
        member[member == j] = i
        snapshots.append((Partition(member.copy()), q))

    return Dendrogram(tuple(snapshots))


def greedy_modularity(g: WeightedGraph) -> Partition:
    """Best-modularity partition along the greedy merge sequence."""
    return best_partition(greedy_dendrogram(g))
