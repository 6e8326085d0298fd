"""Markov-chain core: stationarity, detailed balance, canonical networks,
and the symmetrizations that turn chains into Laplacians."""

import math
import threading

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import AlphaOutOfRangeError, DanglingNodeError, ReducibleChainError
from .graph import LaplacianMatrix, WeightedGraph

SERIES_EPS = 1e-14


def series_length(alpha: float) -> int:
    """Number of power-series terms kept: smallest K with (1-alpha)^K < SERIES_EPS."""
    if alpha >= 1.0:
        return 1
    beta = 1.0 - alpha
    k = max(1, int(math.ceil(math.log(SERIES_EPS) / math.log(beta))))
    while beta**k >= SERIES_EPS:
        k += 1
    return k


class MarkovChain:
    """Row-stochastic transition matrix with a lazily solved stationary distribution.

    The stationary vector is computed once, on first access, by a direct
    linear solve; concurrent first access is guarded by a lock.
    """

    def __init__(self, matrix):
        m = np.array(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("transition matrix must be square")
        if not np.isfinite(m).all():
            raise ValueError("transition matrix must be finite")
        if m.min(initial=0.0) < -1e-12:
            raise ValueError("transition matrix entries must be >= 0")
        np.clip(m, 0.0, None, out=m)
        if np.abs(m.sum(axis=1) - 1.0).max(initial=0.0) > 1e-10:
            raise ValueError("transition matrix rows must sum to 1")
        m.setflags(write=False)
        self.matrix = m
        self._pi: np.ndarray | None = None
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def stationary(self) -> np.ndarray:
        """Probability vector pi with M^T pi = pi; raises on reducible support."""
        if self._pi is None:
            with self._lock:
                if self._pi is None:
                    self._pi = _solve_stationary(self.matrix)
        return self._pi

    def __repr__(self):
        return f"MarkovChain(n={self.n})"


def _solve_stationary(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    support = sp.csr_matrix(m > 0.0)
    ncomp, _ = connected_components(support, directed=True, connection="strong")
    if ncomp != 1:
        raise ReducibleChainError("support of the chain is not strongly connected")
    # (M^T - I) pi = 0 with sum(pi) = 1 appended; direct solve handles periodic
    # chains where power iteration would oscillate.
    a = np.vstack([m.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    np.clip(pi, 0.0, None, out=pi)
    pi /= pi.sum()
    if np.abs(m.T @ pi - pi).max() > 1e-8:
        raise ArithmeticError("stationary solve failed to converge")
    pi.setflags(write=False)
    return pi


def random_walk_chain(g: WeightedGraph) -> MarkovChain:
    """Transition matrix D^{-1} W of the unbiased random walk on g."""
    if g.has_dangling():
        raise DanglingNodeError("random walk requires positive out-degrees (repair the graph)")
    w = g.dense()
    return MarkovChain(w / g.degrees[:, None])


def stationary(m: MarkovChain) -> np.ndarray:
    return m.stationary.copy()


def is_detailed_balanced(m: MarkovChain, tol: float = 1e-9) -> bool:
    """True iff max_{u,v} |pi_u M[u,v] - pi_v M[v,u]| <= tol."""
    f = m.stationary[:, None] * m.matrix
    return bool(np.abs(f - f.T).max(initial=0.0) <= tol)


def canonical_network(m: MarkovChain, labels=None) -> WeightedGraph:
    """Directed network Pi M; row and column sums both equal the stationary vector.

    Symmetric exactly when the chain is detailed balanced.
    """
    return WeightedGraph(m.stationary[:, None] * m.matrix, labels)


def markovian_symmetrization(m: MarkovChain) -> LaplacianMatrix:
    """Pi - (Pi M + M^T Pi) / 2."""
    pi = m.stationary
    f = pi[:, None] * m.matrix
    return LaplacianMatrix(np.diag(pi) - (f + f.T) / 2.0)


def pagerank_markovian_symmetrization(
    m: MarkovChain, alpha: float
) -> tuple[LaplacianMatrix, LaplacianMatrix]:
    """The two restart-weighted symmetrizations of a chain, as Laplacians.

    The first averages the symmetrized k-step flows Pi M^k; the second runs
    the same series on the symmetrized one-step chain N = Pi^{-1}(Pi M + M^T Pi)/2.
    Both coincide for detailed-balanced chains. alpha = 1 is accepted as the
    degenerate single-term limit (the zero matrix).
    """
    if not 0.0 < alpha <= 1.0:
        raise AlphaOutOfRangeError(f"alpha must be in (0, 1], got {alpha}")
    pi = m.stationary
    n = m.n
    beta = 1.0 - alpha
    terms = series_length(alpha)

    x = np.diag(pi)  # Pi M^k, k = 0
    acc1 = np.zeros((n, n))
    coef = alpha
    for _ in range(terms):
        acc1 += coef * (x + x.T) / 2.0
        x = x @ m.matrix
        coef *= beta

    flow = (pi[:, None] * m.matrix + (pi[:, None] * m.matrix).T) / 2.0
    nstep = flow / pi[:, None]  # stochastic; same stationary vector
    y = np.diag(pi)  # Pi N^k, k = 0
    acc2 = np.zeros((n, n))
    coef = alpha
    for _ in range(terms):
        acc2 += coef * (y + y.T) / 2.0
        y = y @ nstep
        coef *= beta

    return LaplacianMatrix(np.diag(pi) - acc1), LaplacianMatrix(np.diag(pi) - acc2)
