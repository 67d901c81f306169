"""Weighted undirected graph model plus edge-list and GML ingestion.

Nodes carry external string labels but are addressed by dense integer
indices 0..n-1 everywhere; all matrices produced elsewhere in the package
are indexed the same way.
"""

from __future__ import annotations

import io
import warnings
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, ValidationError

#: ground-truth community labels, node index -> small integer
NodeLabels = dict[int, int]


class WeightedGraph:
    """Undirected weighted graph; immutable after construction.

    Self-loops are rejected, weights must be strictly positive, and
    duplicate (u, v) entries are merged by summing their weights.
    """

    def __init__(self, labels: Sequence[str], edges: Iterable[tuple[int, int, float]]):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValidationError("node labels must be unique")
        n = len(labels)
        adj: list[dict[int, float]] = [dict() for _ in range(n)]
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u == v:
                raise ValidationError(f"self-loop on node {u} is not allowed")
            if not w > 0:
                raise ValidationError(f"edge ({u}, {v}) has non-positive weight {w}")
            adj[u][v] = adj[u].get(v, 0.0) + w
            adj[v][u] = adj[v].get(u, 0.0) + w
        self._labels = labels
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._adj = adj
        self._edges = tuple(
            (u, v, adj[u][v]) for u in range(n) for v in sorted(adj[u]) if u < v
        )
        self._matrix: np.ndarray | None = None

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self._edges)

    @property
    def node_labels(self) -> tuple[str, ...]:
        return self._labels

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    def edges(self) -> tuple[tuple[int, int, float], ...]:
        """All edges as (u, v, weight) with u < v, sorted."""
        return self._edges

    def neighbors(self, v: int) -> dict[int, float]:
        self._check_node(v)
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        return v in self._adj[u]

    def weight(self, u: int, v: int) -> float:
        self._check_node(u)
        self._check_node(v)
        return self._adj[u].get(v, 0.0)

    def _check_node(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise KeyError(f"unknown node index {v!r}")

    # -- the few centrality primitives everything else builds on ---------

    def degree(self, v: int) -> int:
        """Number of incident edges (weights ignored)."""
        self._check_node(v)
        return len(self._adj[v])

    def strength(self, v: int) -> float:
        """Sum of incident edge weights."""
        self._check_node(v)
        return float(sum(self._adj[v].values()))

    def total_weight(self) -> float:
        """Sum of all edge weights."""
        return float(sum(w for _, _, w in self._edges))

    def density(self) -> float:
        """Fraction of realized node pairs; requires n >= 2."""
        if self.n < 2:
            raise DomainError("density is undefined for graphs with fewer than 2 nodes")
        return self.m / (self.n * (self.n - 1) / 2)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense symmetric weight matrix (read-only, cached)."""
        if self._matrix is None:
            mat = np.zeros((self.n, self.n))
            for u, v, w in self._edges:
                mat[u, v] = w
                mat[v, u] = w
            mat.flags.writeable = False
            self._matrix = mat
        return self._matrix

    def binarized(self) -> "WeightedGraph":
        """Copy with every edge weight set to 1."""
        return WeightedGraph(self._labels, [(u, v, 1.0) for u, v, _ in self._edges])

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._labels == other._labels and self._edges == other._edges

    def __hash__(self):
        return hash((self._labels, self._edges))


# -- edge-list format ----------------------------------------------------


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def load_edgelist(source) -> WeightedGraph:
    """Parse whitespace-separated "u v [w]" lines; '#' starts a comment.

    Missing weights default to 1.0; duplicate pairs are merged by summing;
    self-loops are dropped with a warning.
    """
    text = _as_text(source)
    order: dict[str, int] = {}
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 'u v' or 'u v w', got {raw!r}")
        a, b = parts[0], parts[1]
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"line {lineno}: weight {parts[2]!r} is not a number") from None
        else:
            w = 1.0
        if not w > 0:
            raise ValidationError(f"line {lineno}: weight must be positive, got {w}")
        for lab in (a, b):
            if lab not in order:
                order[lab] = len(order)
        if a == b:
            warnings.warn(f"line {lineno}: dropping self-loop on {a!r}")
            continue
        edges.append((order[a], order[b], w))
    return WeightedGraph(list(order), edges)


def dump_edgelist(g: WeightedGraph) -> str:
    """Serialize in the same format load_edgelist reads, ascending index order."""
    lines = [f"{g.node_labels[u]} {g.node_labels[v]} {w!r}" for u, v, w in g.edges()]
    return "\n".join(lines) + ("\n" if lines else "")


# -- GML subset ----------------------------------------------------------


def _tokenize_gml(text: str):
    tokens: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string in GML input")
            tokens.append(text[i : j + 1])
            i = j + 1
        elif c == "#":
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '[]"':
                j += 1
            if j == i:  # '[' or ']'
                tokens.append(c)
                i += 1
            else:
                tokens.append(text[i:j])
                i = j
    return tokens


def _parse_gml_value(tok: str):
    if tok.startswith('"'):
        return tok[1:-1]
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        return tok


def _parse_gml_object(tokens: list[str], pos: int) -> tuple[dict, int]:
    """Parse key/value pairs until the matching ']'; repeated keys accumulate."""
    obj: dict[str, list] = {}
    while pos < len(tokens):
        tok = tokens[pos]
        if tok == "]":
            return obj, pos + 1
        if tok == "[":
            raise ParseError("unexpected '[' in GML input")
        key = tok
        pos += 1
        if pos >= len(tokens):
            raise ParseError(f"GML key {key!r} has no value")
        if tokens[pos] == "[":
            value, pos = _parse_gml_object(tokens, pos + 1)
        else:
            value = _parse_gml_value(tokens[pos])
            pos += 1
        obj.setdefault(key, []).append(value)
    raise ParseError("unbalanced brackets in GML input")


def load_gml(source) -> tuple[WeightedGraph, NodeLabels | None]:
    """Parse the GML subset: graph [ node [ id, label?, value? ] edge [ source, target, weight? ] ].

    Returns the graph plus ground-truth labels when every node carries a
    `value` attribute (string or integer values are mapped to dense small
    integers).
    """
    tokens = _tokenize_gml(_as_text(source))
    pos = 0
    graph_obj = None
    while pos < len(tokens):
        if tokens[pos] == "graph":
            if pos + 1 >= len(tokens) or tokens[pos + 1] != "[":
                raise ParseError("expected '[' after 'graph'")
            graph_obj, pos = _parse_gml_object(tokens, pos + 2)
            break
        pos += 1
    if graph_obj is None:
        raise ParseError("no 'graph [ ... ]' block found")

    ids: dict[int, int] = {}
    labels: list[str] = []
    values: list = []
    for node in graph_obj.get("node", []):
        if not isinstance(node, dict) or "id" not in node:
            raise ParseError("node block without an id")
        nid = node["id"][0]
        if not isinstance(nid, int):
            raise ParseError(f"node id must be an integer, got {nid!r}")
        if nid in ids:
            raise ParseError(f"duplicate node id {nid}")
        ids[nid] = len(labels)
        lab = node["label"][0] if "label" in node else str(nid)
        labels.append(str(lab))
        values.append(node["value"][0] if "value" in node else None)
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate node labels in GML input")

    edges: list[tuple[int, int, float]] = []
    loops = 0
    for edge in graph_obj.get("edge", []):
        if not isinstance(edge, dict) or "source" not in edge or "target" not in edge:
            raise ParseError("edge block without source/target")
        s, t = edge["source"][0], edge["target"][0]
        if s not in ids or t not in ids:
            raise ParseError(f"edge ({s}, {t}) references an undefined node id")
        w = float(edge["weight"][0]) if "weight" in edge else 1.0
        if not w > 0:
            raise ValidationError(f"edge ({s}, {t}) has non-positive weight {w}")
        if s == t:
            loops += 1
            continue
        edges.append((ids[s], ids[t], w))
    if loops:
        warnings.warn(f"dropped {loops} self-loop(s) from GML input")

    graph = WeightedGraph(labels, edges)

    node_labels: NodeLabels | None = None
    present = [v is not None for v in values]
    if any(present):
        if not all(present):
            raise ValidationError("some nodes carry a 'value' attribute but not all")
        classes = sorted(set(values), key=lambda v: (str(type(v).__name__), v))
        mapping = {c: i for i, c in enumerate(classes)}
        node_labels = {i: mapping[v] for i, v in enumerate(values)}
    return graph, node_labels


def dump_gml(g: WeightedGraph, labels: Mapping[int, int] | None = None) -> str:
    """Serialize graph (and optional per-node ground-truth values) as GML."""
    out = io.StringIO()
    out.write("graph [\n")
    for i, lab in enumerate(g.node_labels):
        out.write(f'  node [\n    id {i}\n    label "{lab}"\n')
        if labels is not None:
            out.write(f"    value {labels[i]}\n")
        out.write("  ]\n")
    for u, v, w in g.edges():
        out.write(f"  edge [\n    source {u}\n    target {v}\n")
        if w != 1.0:
            out.write(f"    weight {w!r}\n")
        out.write("  ]\n")
    out.write("]\n")
    return out.getvalue()
