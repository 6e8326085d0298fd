"""Spectral and restart-walk clustering: dense eigensolver, Fiedler and
Cheeger vectors, sweep cuts, local clustering from restart vectors, and the
completion-based subset measures."""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .completion import pagerank_completion
from .errors import (
    AsymmetricInputError,
    DenseThresholdError,
    DimensionMismatchError,
    DisconnectedError,
)
from .graph import (
    WeightedGraph,
    conductance,
    dense_threshold,
    laplacian,
    normalized_laplacian,
    validate_subset,
)
from .pagerank import check_alpha, personalized_pagerank, ppr_matrix, restart_vector

_CONNECTIVITY_EIGENVALUE_TOL = 1e-10


@dataclass(frozen=True)
class EigenPairs:
    """Ascending eigenvalues with an orthonormal eigenvector matrix."""

    values: np.ndarray = field(repr=False)
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.values, self.vectors):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.values)


def symmetric_eigen(a: np.ndarray) -> EigenPairs:
    """Full dense eigendecomposition of a symmetric matrix, residual-checked."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.shape[0] > dense_threshold():
        raise DenseThresholdError(
            f"dense eigensolve capped at {dense_threshold()} nodes, got {a.shape[0]}"
        )
    if np.abs(a - a.T).max(initial=0.0) > 1e-10:
        raise AsymmetricInputError("eigensolver requires a symmetric matrix")
    vals, vecs = eigh(a)
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a @ vecs - vecs * vals).max() > 1e-8 * scale:
        raise ArithmeticError("eigensolve residual too large")
    if np.abs(vecs.T @ vecs - np.eye(a.shape[0])).max() > 1e-8:
        raise ArithmeticError("eigenvectors not orthonormal")
    return EigenPairs(vals, vecs)


def _sign_normalized(v: np.ndarray) -> np.ndarray:
    # deterministic sign: largest-magnitude entry (first on ties) made positive
    idx = int(np.argmax(np.abs(v)))
    return -v if v[idx] < 0 else v.copy()


def _second_eigenpair(matrix: np.ndarray) -> tuple[float, np.ndarray]:
    pairs = symmetric_eigen(matrix)
    if pairs.n < 2:
        raise ValueError("graph must have at least two nodes")
    lam2 = float(pairs.values[1])
    if lam2 < _CONNECTIVITY_EIGENVALUE_TOL:
        raise DisconnectedError("second-smallest eigenvalue is ~0: graph is disconnected")
    return lam2, _sign_normalized(pairs.vectors[:, 1])


def fiedler_vector(g: WeightedGraph) -> np.ndarray:
    """Unit eigenvector for the second-smallest eigenvalue of L = D - W."""
    _, v = _second_eigenpair(laplacian(g).matrix)
    return v


def cheeger_vector(g: WeightedGraph) -> np.ndarray:
    """D^{-1/2} v2 for v2 the second eigenvector of the normalized Laplacian."""
    _, v = _second_eigenpair(normalized_laplacian(g).matrix)
    return v / np.sqrt(g.degrees)


@dataclass(frozen=True)
class SweepResult:
    """Descending-score node ordering with its best-conductance prefix."""

    ordering: tuple[int, ...]
    best_k: int
    best_conductance: float
    profile: tuple[float, ...] = field(repr=False)

    @property
    def best_set(self) -> tuple[int, ...]:
        return self.ordering[: self.best_k]

    def to_dict(self, labels=None) -> dict:
        order = list(self.ordering) if labels is None else [labels[i] for i in self.ordering]
        return {
            "ordering": order,
            "best_k": self.best_k,
            "best_conductance": self.best_conductance,
            "profile": list(self.profile),
        }


def sweep(g: WeightedGraph, v) -> SweepResult:
    """Best-conductance prefix of nodes ordered by descending score.

    Ties in the score are broken by ascending node index, so identical inputs
    always produce identical cuts. The conductance profile over all proper
    prefixes is computed in one incremental pass.
    """
    if not g.is_symmetric:
        raise AsymmetricInputError("sweep requires a symmetric graph")
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (g.n,):
        raise DimensionMismatchError(f"score vector must have length {g.n}")
    order = np.lexsort((np.arange(g.n), -v))
    d = g.degrees
    total = float(d.sum())
    in_s = np.zeros(g.n, dtype=bool)
    cut = 0.0
    vol = 0.0
    profile = []
    for x in order[:-1]:
        row = g.row(int(x))
        to_s = float(row[in_s].sum())
        cut += float(d[x]) - float(row[x]) - 2.0 * to_s
        vol += float(d[x])
        in_s[x] = True
        denom = min(vol, total - vol)
        profile.append(cut / denom if denom > 0.0 else 1.0)
    best = int(np.argmin(profile))
    return SweepResult(
        ordering=tuple(int(i) for i in order),
        best_k=best + 1,
        best_conductance=profile[best],
        profile=tuple(profile),
    )


def local_cluster(g: WeightedGraph, alpha: float, seed_node: int) -> SweepResult:
    """Sweep over the degree-normalized restart vector seeded at one node."""
    check_alpha(alpha)
    if not g.is_symmetric:
        raise AsymmetricInputError("local clustering requires a symmetric graph")
    if not g.is_connected():
        raise DisconnectedError("local clustering requires a connected graph")
    p = personalized_pagerank(g, alpha, restart_vector(g.n, seed_node))
    return sweep(g, p / g.degrees)


@dataclass(frozen=True)
class CheegerReport:
    lambda2: float
    conductance: float
    lower: float
    upper: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "lambda2": self.lambda2,
            "conductance": self.conductance,
            "lower": self.lower,
            "upper": self.upper,
            "pass": self.passed,
        }


def cheeger_check(g: WeightedGraph, alpha: float | None = None) -> CheegerReport:
    """Sweep the Cheeger vector and test lambda2/2 <= conductance <= sqrt(2 lambda2).

    With ``alpha`` given, the sweep vector is taken from the completion's
    normalized Laplacian instead; the two share eigenvectors, so the same
    bound is guaranteed. A 1e-9 slack absorbs eigensolver rounding at
    boundary cases.
    """
    lam2, _ = _second_eigenpair(normalized_laplacian(g).matrix)
    if alpha is None:
        vec = cheeger_vector(g)
    else:
        comp = pagerank_completion(g, alpha)
        vec = cheeger_vector(comp.graph)
    phi = sweep(g, vec).best_conductance
    lower = lam2 / 2.0
    upper = float(np.sqrt(2.0 * lam2))
    passed = (lower <= phi + 1e-9) and (phi <= upper + 1e-9)
    return CheegerReport(lam2, phi, lower, upper, passed)


def pagerank_conductance(g: WeightedGraph, alpha: float, S) -> float:
    """Conductance of S measured in the completed network."""
    comp = pagerank_completion(g, alpha)
    return conductance(comp.graph, S)


def pagerank_utility(g: WeightedGraph, alpha: float, S) -> float:
    """Total restart-walk mass retained inside S: sum_{u,v in S} PPR[u,v]."""
    idx = validate_subset(S, g.n)
    ppr = ppr_matrix(g, alpha)
    return float(ppr.matrix[np.ix_(idx, idx)].sum())


def pagerank_clusterability(g: WeightedGraph, alpha: float, S) -> float:
    """Per-node retained mass: pagerank_utility(S) / |S|."""
    idx = validate_subset(S, g.n)
    return pagerank_utility(g, alpha, idx) / len(idx)
