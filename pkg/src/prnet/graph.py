"""Weighted graph core: edge-list loading, degrees, Laplacians, conductance.

Graphs are stored dense up to ``dense_threshold()`` nodes and as CSR above
it; dense-only operations refuse oversized inputs instead of thrashing.
"""

import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    AsymmetricInputError,
    DanglingNodeError,
    DanglingRepairWarning,
    DenseThresholdError,
    DuplicateEdgeError,
    EmptyOrFullSetError,
    MalformedLineError,
    NegativeWeightError,
)

TOL_SYM = 1e-12
_DEFAULT_DENSE_THRESHOLD = 4096


def dense_threshold() -> int:
    """Node cap for dense n-by-n materialization (ESSENCE_DENSE_THRESHOLD overrides)."""
    raw = os.environ.get("ESSENCE_DENSE_THRESHOLD")
    if raw is None:
        return _DEFAULT_DENSE_THRESHOLD
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"ESSENCE_DENSE_THRESHOLD must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("ESSENCE_DENSE_THRESHOLD must be positive")
    return value


def _validate_labels(labels, n):
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} nodes")
    seen = set()
    for lab in labels:
        if not lab or any(c.isspace() for c in lab) or "#" in lab:
            raise ValueError(f"invalid node label {lab!r}")
        if lab in seen:
            raise ValueError(f"duplicate node label {lab!r}")
        seen.add(lab)


class WeightedGraph:
    """Non-negative weighted graph over labeled nodes, immutable after construction.

    ``weights[i, j]`` is the affinity of node i toward node j; a symmetric
    matrix means the graph is undirected. Self-loops are allowed and count
    toward degrees.
    """

    def __init__(self, weights, labels=None):
        if sp.issparse(weights):
            w = sp.csr_matrix(weights, dtype=np.float64)
            if w.shape[0] != w.shape[1]:
                raise ValueError("weight matrix must be square")
            if not np.isfinite(w.data).all():
                raise ValueError("weights must be finite")
            if w.data.size and w.data.min() < 0:
                raise NegativeWeightError("all weights must be >= 0")
            diff = abs(w - w.T)
            asym = diff.max() if diff.nnz else 0.0
        else:
            w = np.array(weights, dtype=np.float64)
            if w.ndim != 2 or w.shape[0] != w.shape[1]:
                raise ValueError("weight matrix must be square")
            if not np.isfinite(w).all():
                raise ValueError("weights must be finite")
            if w.size and w.min() < 0:
                raise NegativeWeightError("all weights must be >= 0")
            w.setflags(write=False)
            asym = float(np.abs(w - w.T).max()) if w.size else 0.0
        n = w.shape[0]
        if n == 0:
            raise ValueError("graph must have at least one node")
        self._w = w
        self.labels = [str(i) for i in range(n)] if labels is None else [str(x) for x in labels]
        _validate_labels(self.labels, n)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.is_symmetric = bool(asym <= TOL_SYM)
        d = np.asarray(w.sum(axis=1), dtype=np.float64).ravel()
        d.setflags(write=False)
        self._degrees = d

    @property
    def n(self) -> int:
        return self._w.shape[0]

    @property
    def weights(self):
        """Backing matrix: ndarray for dense storage, CSR for sparse."""
        return self._w

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self._w)

    @property
    def degrees(self) -> np.ndarray:
        """Out-degree vector (row sums of the weight matrix)."""
        return self._degrees

    def dense(self) -> np.ndarray:
        """Dense weight matrix; refuses graphs above the dense threshold."""
        if not self.is_sparse:
            return self._w
        if self.n > dense_threshold():
            raise DenseThresholdError(
                f"graph has {self.n} nodes, dense operations capped at {dense_threshold()}"
            )
        return self._w.toarray()

    def weight(self, u: int, v: int) -> float:
        return float(self._w[u, v])

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown node label {label!r}") from None

    def row(self, u: int) -> np.ndarray:
        if self.is_sparse:
            return self._w.getrow(u).toarray().ravel()
        return self._w[u]

    def has_dangling(self) -> bool:
        return bool((self._degrees <= 0.0).any())

    def repaired(self) -> "WeightedGraph":
        """Copy with every zero-out-degree row replaced by a uniform row (1/n each).

        Returns self when nothing is dangling; warns otherwise.
        """
        dangling = np.flatnonzero(self._degrees <= 0.0)
        if dangling.size == 0:
            return self
        warnings.warn(
            f"{dangling.size} dangling node(s) repaired with uniform out-edges",
            DanglingRepairWarning,
            stacklevel=2,
        )
        if self.is_sparse:
            w = self._w.tolil(copy=True)
            for u in dangling:
                w[u, :] = 1.0 / self.n
            return WeightedGraph(w.tocsr(), self.labels)
        w = self._w.copy()
        w[dangling, :] = 1.0 / self.n
        return WeightedGraph(w, self.labels)

    def is_connected(self) -> bool:
        """Undirected connectivity on the support of max(W, W^T)."""
        support = self._w if self.is_sparse else sp.csr_matrix(self._w)
        ncomp, _ = connected_components(support, directed=True, connection="weak")
        return ncomp == 1

    def is_strongly_connected(self) -> bool:
        support = self._w if self.is_sparse else sp.csr_matrix(self._w)
        ncomp, _ = connected_components(support, directed=True, connection="strong")
        return ncomp == 1

    def __repr__(self):
        kind = "undirected" if self.is_symmetric else "directed"
        return f"WeightedGraph(n={self.n}, {kind})"


def load_graph(text: str) -> WeightedGraph:
    """Parse an edge list ("u v w" per line, '#' comments) into a repaired graph.

    Nodes are indexed by first appearance. Duplicate ordered pairs and
    negative weights are errors; dangling nodes are repaired with uniform
    out-rows (a warning is emitted).
    """
    entries: dict[tuple[str, str], float] = {}
    labels: list[str] = []
    index: dict[str, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise MalformedLineError(line_no, f"expected 'u v w', got {len(parts)} fields")
        u, v, ws = parts
        try:
            w = float(ws)
        except ValueError:
            raise MalformedLineError(line_no, f"cannot parse weight {ws!r}") from None
        if not math.isfinite(w):
            raise MalformedLineError(line_no, f"non-finite weight {ws!r}")
        if w < 0:
            raise NegativeWeightError(f"line {line_no}: negative weight {w}")
        if (u, v) in entries:
            raise DuplicateEdgeError(f"line {line_no}: duplicate edge {u} {v}")
        entries[(u, v)] = w
        for lab in (u, v):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
    n = len(labels)
    if n == 0:
        raise MalformedLineError(0, "edge list contains no edges")
    if n <= dense_threshold():
        w = np.zeros((n, n))
        for (u, v), wt in entries.items():
            w[index[u], index[v]] = wt
    else:
        rows = [index[u] for (u, _v) in entries]
        cols = [index[v] for (_u, v) in entries]
        vals = list(entries.values())
        w = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return WeightedGraph(w, labels).repaired()


def serialize_graph(g: WeightedGraph) -> str:
    """Edge-list text that round-trips through ``load_graph`` exactly.

    Weights are written with ``repr`` (shortest exact form); fully isolated
    nodes are kept alive with a zero self-loop line.
    """
    lines = []
    covered = np.zeros(g.n, dtype=bool)
    if g.is_sparse:
        coo = g.weights.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            i, j, w = int(coo.row[k]), int(coo.col[k]), float(coo.data[k])
            if w == 0.0:
                continue
            lines.append(f"{g.labels[i]} {g.labels[j]} {w!r}")
            covered[i] = covered[j] = True
    else:
        w = g.weights
        for i in range(g.n):
            for j in np.flatnonzero(w[i]):
                lines.append(f"{g.labels[i]} {g.labels[int(j)]} {w[i, j]!r}")
                covered[i] = covered[int(j)] = True
    for i in np.flatnonzero(~covered):
        lines.append(f"{g.labels[int(i)]} {g.labels[int(i)]} 0.0")
    return "\n".join(lines) + "\n"


def degrees(g: WeightedGraph) -> np.ndarray:
    """Out-degree vector d[u] = sum_v W[u, v]."""
    return g.degrees.copy()


@dataclass(frozen=True)
class LaplacianMatrix:
    """Symmetric matrix with zero row sums and non-positive off-diagonals."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Laplacian must be square")
        if np.abs(m - m.T).max(initial=0.0) > 1e-9:
            raise AsymmetricInputError("Laplacian must be symmetric")
        if np.abs(m.sum(axis=1)).max(initial=0.0) > 1e-9:
            raise ValueError("Laplacian rows must sum to 0")
        off = m - np.diag(np.diag(m))
        if off.max(initial=0.0) > 1e-12:
            raise ValueError("Laplacian off-diagonal entries must be <= 0")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def laplacian(g: WeightedGraph) -> LaplacianMatrix:
    """L = D - W for an undirected graph."""
    if not g.is_symmetric:
        raise AsymmetricInputError("laplacian requires a symmetric graph")
    w = g.dense()
    return LaplacianMatrix(np.diag(g.degrees) - w)


def normalized_laplacian(g: WeightedGraph) -> LaplacianMatrix:
    """I - D^{-1/2} W D^{-1/2}; eigenvalues lie in [0, 2]."""
    if not g.is_symmetric:
        raise AsymmetricInputError("normalized_laplacian requires a symmetric graph")
    d = g.degrees
    if (d <= 0.0).any():
        raise DanglingNodeError("normalized_laplacian requires positive degrees")
    s = np.sqrt(d)
    b = g.dense() / np.outer(s, s)
    return LaplacianMatrix(np.eye(g.n) - b)


def validate_subset(S, n: int) -> np.ndarray:
    """Indices of a non-empty proper subset of range(n), sorted and deduplicated."""
    idx = sorted({int(u) for u in S})
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"node index out of range for n={n}")
    if len(idx) == 0 or len(idx) == n:
        raise EmptyOrFullSetError("S must be a non-empty proper subset of the nodes")
    return np.array(idx, dtype=np.intp)


def cut_weight(g: WeightedGraph, S) -> float:
    """Total weight of ordered edges leaving S."""
    idx = validate_subset(S, g.n)
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    if g.is_sparse:
        sub = g.weights[idx][:, ~mask]
        return float(sub.sum())
    return float(g.weights[np.ix_(mask, ~mask)].sum())


def volume(g: WeightedGraph, S) -> float:
    """Sum of degrees over S."""
    idx = np.asarray(sorted({int(u) for u in S}), dtype=np.intp)
    return float(g.degrees[idx].sum()) if idx.size else 0.0


def conductance(g: WeightedGraph, S) -> float:
    """cut(S) / min(vol(S), vol(V minus S)) for a symmetric graph.

    Degenerate zero-volume sides count as conductance 1 so that sweeps never
    prefer them.
    """
    if not g.is_symmetric:
        raise AsymmetricInputError("conductance requires a symmetric graph")
    idx = validate_subset(S, g.n)
    cut = cut_weight(g, idx)
    vol_s = float(g.degrees[idx].sum())
    vol_rest = float(g.degrees.sum()) - vol_s
    denom = min(vol_s, vol_rest)
    if denom <= 0.0:
        return 1.0
    return cut / denom
