"""Affinity functions over weighted graphs and their constrained linear
combinations.

Three generators are provided:

* best friend (``bf``): each relationship weight relative to everything
  the sender maintains, so rows of the matrix are normalized by the
  sender's strength;
* best common friend (``bcf``): the strongest connection the two actors
  share, again relative to the sender's strength;
* machiavelli (``mach``): similarity of the two actors' surroundings,
  measured by the summed centrality of their neighbors.

Values always land in [0, 1] with a zero diagonal. bf/bcf are generally
asymmetric; mach is symmetric by construction. A linear combination
alpha*F1 + beta*F2 stays a valid affinity as long as 0 < alpha+beta <= 1,
recovering the convex combination at alpha+beta = 1.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .graph import WeightedGraph

_RANGE_TOL = 1e-12
_SYM_STRATEGIES = ("mean", "max", "min")


@dataclass(frozen=True)
class AffinityMatrix:
    """Dense n x n affinity values plus a descriptor of how they were made."""

    values: np.ndarray
    provenance: str
    node_labels: tuple[str, ...]

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ValidationError(f"affinity values must be square, got shape {vals.shape}")
        if vals.shape[0] != len(self.node_labels):
            raise ValidationError("node_labels length does not match matrix size")
        if np.diagonal(vals).any():
            raise ValidationError("affinity diagonal must be zero")
        if vals.min(initial=0.0) < -_RANGE_TOL or vals.max(initial=0.0) > 1.0 + _RANGE_TOL:
            raise ValidationError("affinity values must lie in [0, 1]")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "node_labels", tuple(self.node_labels))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.values, self.values.T))

    def to_csv(self, header: bool = True) -> str:
        lines = []
        if header:
            lines.append(",".join(self.node_labels))
        for row in self.values:
            lines.append(",".join(f"{x:.12g}" for x in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CombinationParams:
    """Mixing weights for a linear combination of two affinities.

    Both weights live in [0, 1]; their sum must be positive (an all-zero
    matrix is useless) and must not exceed 1 (so combined values stay in
    [0, 1]). The sum reaching exactly 1 is the convex case.
    """

    alpha: float
    beta: float

    # float grids land a hair above 1.0 (e.g. 0.35 + 0.65); tolerate that
    _TOL = 1e-9

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (-self._TOL <= a <= 1 + self._TOL and -self._TOL <= b <= 1 + self._TOL):
            raise ValidationError(f"alpha and beta must lie in [0, 1], got ({a}, {b})")
        if a + b > 1 + self._TOL:
            raise ValidationError(
                f"constraint violated: alpha + beta must be <= 1, got {a} + {b} = {a + b}"
            )
        if a + b <= 0:
            raise ValidationError(
                f"constraint violated: alpha + beta must be > 0, got {a} + {b} = {a + b}"
            )


def _strength_rows(g: WeightedGraph) -> np.ndarray:
    c = g.adjacency_matrix()
    s = c.sum(axis=1)
    if (s == 0).any():
        isolated = [g.node_labels[i] for i in np.flatnonzero(s == 0)]
        warnings.warn(
            f"nodes {isolated} have zero strength; their affinity rows are all zero"
        )
    return s


def _divide_rows(num: np.ndarray, s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num)
    nz = s > 0
    out[nz] = num[nz] / s[nz, None]
    return out


def best_friend(g: WeightedGraph) -> AffinityMatrix:
    """Relationship weight normalized by the sender's total strength."""
    c = g.adjacency_matrix()
    f = _divide_rows(c.copy(), _strength_rows(g))
    return AffinityMatrix(f, "bf", g.node_labels)


def best_common_friend(g: WeightedGraph, block: int = 64) -> AffinityMatrix:
    """Strongest shared connection normalized by the sender's strength.

    The maximum ranges over every node; the sender and receiver themselves
    contribute nothing because the adjacency diagonal is zero.
    """
    c = g.adjacency_matrix()
    n = g.n
    shared = np.empty((n, n))
    for start in range(0, n, block):  # block rows to bound the n^3 temporary
        stop = min(start + block, n)
        shared[start:stop] = np.minimum(c[start:stop, None, :], c[None, :, :]).max(axis=2)
    f = _divide_rows(shared, _strength_rows(g))
    np.fill_diagonal(f, 0.0)
    return AffinityMatrix(f, "bcf", g.node_labels)


def machiavelli(g: WeightedGraph, degree_measure: str = "degree") -> AffinityMatrix:
    """Similarity of the two actors' surroundings via summed neighbor centrality.

    degree_measure selects what each neighbor contributes: its edge count
    ("degree", the default) or its strength ("strength").
    """
    if degree_measure not in ("degree", "strength"):
        raise ValidationError(f"unknown degree_measure {degree_measure!r}")
    c = g.adjacency_matrix()
    if degree_measure == "degree":
        d = (c > 0).sum(axis=1).astype(np.float64)
    else:
        d = c.sum(axis=1)
    surround = (c > 0) @ d  # I_a = sum of D(z) over neighbors z of a
    ix, iy = surround[:, None], surround[None, :]
    denom = np.maximum(ix, iy)
    with np.errstate(invalid="ignore", divide="ignore"):
        f = 1.0 - np.abs(ix - iy) / denom
    f[denom == 0] = 1.0  # two empty surroundings are identical
    np.fill_diagonal(f, 0.0)
    return AffinityMatrix(f, "mach", g.node_labels)


def combine(f1: AffinityMatrix, f2: AffinityMatrix, p: CombinationParams) -> AffinityMatrix:
    """Entrywise alpha*f1 + beta*f2 under the combination constraints."""
    if f1.n != f2.n:
        raise ValidationError(f"affinity sizes differ: {f1.n} vs {f2.n}")
    if f1.node_labels != f2.node_labels:
        raise ValidationError("affinity matrices come from different node sets")
    vals = p.alpha * f1.values + p.beta * f2.values
    prov = (
        f"combine({f1.provenance},{f2.provenance},"
        f"alpha={p.alpha:g},beta={p.beta:g})"
    )
    return AffinityMatrix(vals, prov, f1.node_labels)


def _with_sym(provenance: str, strategy: str) -> str:
    if provenance.startswith("combine(") and provenance.endswith(")"):
        inner = re.sub(r",sym=(mean|max|min)$", "", provenance[8:-1])
        return f"combine({inner},sym={strategy})"
    return provenance


def symmetrize(f: AffinityMatrix, strategy: str = "mean") -> AffinityMatrix:
    """Reconcile f(x,y) and f(y,x) into one undirected value per pair."""
    if strategy not in _SYM_STRATEGIES:
        raise ValidationError(f"unknown symmetrization strategy {strategy!r}")
    a, b = f.values, f.values.T
    if strategy == "mean":
        vals = (a + b) / 2.0
    elif strategy == "max":
        vals = np.maximum(a, b)
    else:
        vals = np.minimum(a, b)
    return AffinityMatrix(vals, _with_sym(f.provenance, strategy), f.node_labels)


def affinity_to_graph(f: AffinityMatrix, threshold: float = 0.0) -> WeightedGraph:
    """Materialize a symmetric affinity matrix as an undirected graph.

    Keeps every pair with value strictly above the threshold; symmetrize
    first if the matrix may be asymmetric.
    """
    if threshold < 0:
        raise ValidationError(f"threshold must be >= 0, got {threshold}")
    if not f.is_symmetric():
        raise ValidationError("affinity matrix is asymmetric; symmetrize it first")
    iu, ju = np.triu_indices(f.n, k=1)
    keep = f.values[iu, ju] > threshold
    edges = [
        (int(u), int(v), float(w))
        for u, v, w in zip(iu[keep], ju[keep], f.values[iu, ju][keep])
    ]
    return WeightedGraph(f.node_labels, edges)


# -- the provenance / function-spec grammar -------------------------------

_BASE_FUNCTIONS = {
    "bf": best_friend,
    "bcf": best_common_friend,
    "mach": machiavelli,
}

_COMBINE_RE = re.compile(
    r"^combine\((bf|bcf|mach),(bf|bcf|mach),"
    r"alpha=([0-9.eE+-]+),beta=([0-9.eE+-]+)(?:,sym=(mean|max|min))?\)$"
)


@dataclass(frozen=True)
class AffinitySpec:
    """Parsed form of an affinity descriptor string."""

    f1: str
    f2: str | None = None
    params: CombinationParams | None = None
    sym: str | None = None

    @property
    def is_combination(self) -> bool:
        return self.f2 is not None


def parse_affinity_spec(text: str) -> AffinitySpec:
    """Parse "bf" | "bcf" | "mach" | "combine(f1,f2,alpha=A,beta=B[,sym=S])"."""
    s = text.strip().replace(" ", "")
    if s in _BASE_FUNCTIONS:
        return AffinitySpec(s)
    m = _COMBINE_RE.match(s)
    if not m:
        raise ParseError(
            f"cannot parse affinity spec {text!r}; expected one of "
            f"{sorted(_BASE_FUNCTIONS)} or combine(f1,f2,alpha=...,beta=...[,sym=...])"
        )
    f1, f2, alpha, beta, sym = m.groups()
    try:
        params = CombinationParams(float(alpha), float(beta))
    except ValueError:
        raise ParseError(f"bad alpha/beta in affinity spec {text!r}") from None
    return AffinitySpec(f1, f2, params, sym)


def build_affinity(g: WeightedGraph, spec: AffinitySpec | str) -> AffinityMatrix:
    """Evaluate a parsed (or textual) affinity spec on a graph.

    Combination specs carrying a sym=... clause are symmetrized as asked;
    everything else is returned raw.
    """
    if isinstance(spec, str):
        spec = parse_affinity_spec(spec)
    f1 = _BASE_FUNCTIONS[spec.f1](g)
    if not spec.is_combination:
        return f1
    f2 = _BASE_FUNCTIONS[spec.f2](g)
    out = combine(f1, f2, spec.params)
    if spec.sym is not None:
        out = symmetrize(out, spec.sym)
    return out
