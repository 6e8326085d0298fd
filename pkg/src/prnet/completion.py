"""PageRank completion: the dense, degree-preserving closure of an undirected
network, plus verification of every structural guarantee it carries.

For a symmetric connected W with degree matrix D, the completion is
W_bar = D * PPR. It preserves symmetry and degrees, has all n^2 entries
positive, its random walk conforms to PageRank centrality, its normalized
Laplacian shares eigenvectors with the input's, and (1/(1-alpha)) L_bar is
spectrally within [1/(2-alpha), 1/alpha] of L on every quadratic form.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .errors import AsymmetricInputError, DisconnectedError
from .graph import WeightedGraph, laplacian, normalized_laplacian
from .pagerank import check_alpha, pagerank_centrality, ppr_matrix


@dataclass(frozen=True)
class Completion:
    """A completed network together with its restart constant and source."""

    graph: WeightedGraph
    alpha: float
    source: WeightedGraph


def pagerank_completion(g: WeightedGraph, alpha: float) -> Completion:
    """W_bar = D * PPR for a symmetric connected graph."""
    alpha = check_alpha(alpha)
    if not g.is_symmetric:
        raise AsymmetricInputError("completion is defined for symmetric graphs only")
    if not g.is_connected():
        raise DisconnectedError("completion requires a connected graph")
    ppr = ppr_matrix(g, alpha)
    wbar = g.degrees[:, None] * ppr.matrix
    return Completion(WeightedGraph(wbar, g.labels), alpha, g)


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    residual: float
    tolerance: float


@dataclass(frozen=True)
class CompletionReport:
    conditions: tuple[ConditionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def to_dict(self) -> dict:
        return {
            "conditions": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                }
                for c in self.conditions
            ],
            "passed": self.passed,
        }


def verify_completion(c: Completion) -> CompletionReport:
    """Check symmetry, complete information, degree preservation, and conformance.

    Works on any Completion object, valid or not, and reports the worst
    residual per condition.
    """
    wbar = c.graph.dense()
    w = c.source.dense()

    sym_residual = float(np.abs(wbar - wbar.T).max())
    checks = [ConditionCheck("symmetry", sym_residual <= 1e-9, sym_residual, 1e-9)]

    min_entry = float(wbar.min())
    checks.append(ConditionCheck("complete_information", min_entry > 0.0, min_entry, 0.0))

    degree_residual = float(np.abs(wbar.sum(axis=1) - w.sum(axis=1)).max())
    checks.append(
        ConditionCheck("degree_preservation", degree_residual <= 1e-9, degree_residual, 1e-9)
    )

    rows = wbar.sum(axis=1)
    mbar = wbar / rows[:, None]
    stochastic_residual = float(np.abs(mbar.sum(axis=1) - 1.0).max())
    pr = pagerank_centrality(c.source, c.alpha)
    conforming_residual = float(np.abs(mbar.T @ np.ones(c.graph.n) - pr).max())
    residual = max(stochastic_residual, conforming_residual)
    checks.append(
        ConditionCheck(
            "markovian_pagerank_conforming",
            stochastic_residual <= 1e-10 and conforming_residual <= 1e-8,
            residual,
            1e-8,
        )
    )
    return CompletionReport(tuple(checks))


def eigenvalue_ratio(lam: float, alpha: float) -> float:
    """Rayleigh ratio of (1/(1-alpha)) L_bar against L on a shared eigenvector.

    Equals (1/(1-alpha)) * (1 - alpha/(1-(1-alpha)*lam)) / (1-lam), which
    simplifies to 1/(1-(1-alpha)*lam); the simplified form also carries the
    lam -> 1 limit of 1/alpha.
    """
    return 1.0 / (1.0 - (1.0 - alpha) * lam)


@dataclass(frozen=True)
class SimilarityReport:
    """Extreme Rayleigh ratios over the shared eigenbasis, with their bounds."""

    alpha: float
    bound_lo: float
    bound_hi: float
    ratio_min: float
    ratio_max: float
    eigen_ratios: tuple[float, ...] = field(repr=False)

    def __post_init__(self):
        if self.ratio_min < self.bound_lo - 1e-8 or self.ratio_max > self.bound_hi + 1e-8:
            raise ValueError("Rayleigh ratio escaped its guaranteed interval")

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "bound_lo": self.bound_lo,
            "bound_hi": self.bound_hi,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "eigen_ratios": list(self.eigen_ratios),
        }


def spectral_similarity(c: Completion) -> SimilarityReport:
    """Per-eigenvector Rayleigh ratios of the completion against its source.

    The eigenvalue 1 of D^{-1/2} W D^{-1/2} (the trivial eigenvector) is
    excluded because both quadratic forms vanish there.
    """
    g = c.source
    if not g.is_symmetric:
        raise AsymmetricInputError("spectral similarity requires a symmetric source")
    d = g.degrees
    s = np.sqrt(d)
    b = g.dense() / np.outer(s, s)
    lam = eigh(b, eigvals_only=True)
    trivial = np.abs(1.0 - lam) <= 1e-8
    if trivial.sum() != 1:
        raise DisconnectedError("source graph must be connected")
    ratios = tuple(float(eigenvalue_ratio(x, c.alpha)) for x in lam[~trivial])
    return SimilarityReport(
        alpha=c.alpha,
        bound_lo=1.0 / (2.0 - c.alpha),
        bound_hi=1.0 / c.alpha,
        ratio_min=min(ratios),
        ratio_max=max(ratios),
        eigen_ratios=ratios,
    )


def rayleigh_ratio_samples(
    c: Completion, count: int = 100, seed: int = 0, min_denominator: float = 1e-12
) -> np.ndarray:
    """Quadratic-form ratios x^T (1/(1-alpha)) L_bar x / x^T L x on random vectors.

    An independent check of the eigenbasis characterization; vectors whose
    denominator falls below ``min_denominator`` are skipped.
    """
    l_src = laplacian(c.source).matrix
    l_bar = laplacian(c.graph).matrix
    rng = np.random.default_rng(seed)
    ratios = []
    while len(ratios) < count:
        x = rng.standard_normal(c.source.n)
        den = float(x @ l_src @ x)
        if den <= min_denominator:
            continue
        num = float(x @ l_bar @ x) / (1.0 - c.alpha)
        ratios.append(num / den)
    return np.array(ratios)


def simultaneous_diagonalization_check(c: Completion, gap: float = 1e-8) -> float:
    """Max off-diagonal residual of U^T L_bar_norm U for U diagonalizing L_norm.

    Eigenvalues of the source's normalized Laplacian closer than ``gap`` are
    treated as one eigenspace: any orthonormal basis of a shared eigenspace
    diagonalizes both matrices, so residuals inside those blocks are excluded.
    """
    if not c.source.is_symmetric:
        raise AsymmetricInputError("diagonalization check requires a symmetric source")
    vals, u = eigh(normalized_laplacian(c.source).matrix)
    r = u.T @ normalized_laplacian(c.graph).matrix @ u
    n = len(vals)
    if n == 1:
        return 0.0
    group = np.zeros(n, dtype=np.intp)
    for i in range(1, n):
        group[i] = group[i - 1] + (1 if vals[i] - vals[i - 1] > gap else 0)
    off = np.abs(r)
    np.fill_diagonal(off, 0.0)
    same_block = group[:, None] == group[None, :]
    off[same_block] = 0.0
    return float(off.max())
