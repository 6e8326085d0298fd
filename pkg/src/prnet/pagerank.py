"""Personalized PageRank vectors, the dense PPR matrix, and PageRank centrality.

Two solvers are shipped: a truncated restart power series (default for
vectors, works on sparse storage) and a direct dense linear solve (default
for the matrix, and the oracle the tests cross-check against).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    DanglingNodeError,
    DenseThresholdError,
    NotADistributionError,
)
from .graph import WeightedGraph, dense_threshold
from .markov import MarkovChain, series_length


def check_alpha(alpha: float) -> float:
    if not 0.0 < float(alpha) < 1.0:
        raise AlphaOutOfRangeError(f"alpha must be in (0, 1), got {alpha}")
    return float(alpha)


def _check_distribution(s, n: int) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (n,):
        raise NotADistributionError(f"start vector must have length {n}")
    if s.min(initial=0.0) < -1e-12 or abs(s.sum() - 1.0) > 1e-9:
        raise NotADistributionError("start vector must be non-negative and sum to 1")
    return np.clip(s, 0.0, None)


def _require_repaired(g: WeightedGraph):
    if g.has_dangling():
        raise DanglingNodeError("graph has dangling nodes; repair it first")


def _restart_series_vector(g: WeightedGraph, alpha: float, s: np.ndarray) -> np.ndarray:
    # p = alpha * sum_k beta^k (M^T)^k s, truncated when beta^k < SERIES_EPS
    beta = 1.0 - alpha
    d = g.degrees
    wt = g.weights.T
    term = s.copy()
    p = alpha * term
    coef = alpha
    for _ in range(series_length(alpha) - 1):
        term = wt @ (term / d)
        term = np.asarray(term).ravel()
        coef *= beta
        p += coef * term
    return p


def personalized_pagerank(g: WeightedGraph, alpha: float, s, method: str = "series") -> np.ndarray:
    """Restart distribution's stationary vector: p = alpha s + (1-alpha) M^T p.

    ``method`` is "series" (truncated power series, sparse-friendly) or
    "solve" (dense linear solve of the fixed-point equation).
    """
    alpha = check_alpha(alpha)
    s = _check_distribution(s, g.n)
    _require_repaired(g)
    if method == "series":
        return _restart_series_vector(g, alpha, s)
    if method == "solve":
        m = g.dense() / g.degrees[:, None]
        return np.linalg.solve(np.eye(g.n) - (1.0 - alpha) * m.T, alpha * s)
    raise ValueError(f"unknown method {method!r}")


def restart_vector(n: int, node: int) -> np.ndarray:
    """Indicator distribution concentrated on one node."""
    if not 0 <= node < n:
        raise ValueError(f"node index {node} out of range for n={n}")
    s = np.zeros(n)
    s[node] = 1.0
    return s


@dataclass(frozen=True)
class PprMatrix:
    """Row-stochastic matrix whose u-th row is the restart vector seeded at u."""

    matrix: np.ndarray = field(repr=False)
    alpha: float
    graph: WeightedGraph = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.min(initial=0.0) < -1e-12:
            raise ValueError("PPR entries must be >= 0")
        if np.abs(m.sum(axis=1) - 1.0).max(initial=0.0) > 1e-10:
            raise ValueError("PPR rows must sum to 1")
        m = np.clip(m, 0.0, None)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def row(self, u: int) -> np.ndarray:
        return self.matrix[u]

    def chain(self) -> MarkovChain:
        """The PPR Markov chain (same stationary distribution as the random walk)."""
        return MarkovChain(self.matrix)


def ppr_matrix(g: WeightedGraph, alpha: float, method: str = "solve") -> PprMatrix:
    """Dense matrix of all restart vectors; refused above the dense threshold."""
    alpha = check_alpha(alpha)
    _require_repaired(g)
    if g.n > dense_threshold():
        raise DenseThresholdError(
            f"PPR matrix is dense; {g.n} nodes exceeds the cap of {dense_threshold()}"
        )
    m = g.dense() / g.degrees[:, None]
    if method == "solve":
        ppr = alpha * np.linalg.solve(np.eye(g.n) - (1.0 - alpha) * m, np.eye(g.n))
    elif method == "series":
        beta = 1.0 - alpha
        ppr = alpha * np.eye(g.n)
        for _ in range(series_length(alpha) - 1):
            ppr = alpha * np.eye(g.n) + beta * (m @ ppr)
    else:
        raise ValueError(f"unknown method {method!r}")
    return PprMatrix(ppr, alpha, g)


def pagerank_centrality(g: WeightedGraph, alpha: float, method: str = "series") -> np.ndarray:
    """Centrality vector normalized to sum to n; equals the PPR column sums."""
    alpha = check_alpha(alpha)
    _require_repaired(g)
    ones = np.ones(g.n)
    if method == "series":
        return _restart_series_vector(g, alpha, ones)
    if method == "solve":
        m = g.dense() / g.degrees[:, None]
        return np.linalg.solve(np.eye(g.n) - (1.0 - alpha) * m.T, alpha * ones)
    raise ValueError(f"unknown method {method!r}")
