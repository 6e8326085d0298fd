"""Preference, cooperative, incentive, and influence network models, and the
centrality-conforming Markov chains they induce.

Exact Shapley values enumerate all arrival orders (grouped by shared prefix
set, so the cost is 2^n rather than n!); Monte Carlo estimators draw one
counter-based substream per sample, so parallel evaluation reproduces the
sequential result bit for bit.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DuplicateEdgeError,
    EmptyOrFullSetError,
    MalformedLineError,
    NotMonotoneError,
    NotNormalizedError,
    TooLargeError,
    TooManyEdgesError,
    TooManyPlayersError,
)
from .graph import WeightedGraph
from .markov import MarkovChain
from .pagerank import check_alpha, ppr_matrix

EXACT_PLAYER_CAP = 10
EXACT_EDGE_CAP = 20
EXACT_CHAIN_NODE_CAP = 8


# ---------------------------------------------------------------------------
# ordered partitions and preference profiles


@dataclass(frozen=True)
class OrderedPartition:
    """Ranking with ties: an ordered sequence of disjoint blocks covering V."""

    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("blocks must be non-empty")
            for u in block:
                if not 0 <= u < self.n or u in seen:
                    raise ValueError("blocks must partition the node set")
                seen.add(u)
        if len(seen) != self.n:
            raise ValueError("blocks must cover every node")

    def rank(self, v: int) -> int:
        """1-based index of the block containing v."""
        for i, block in enumerate(self.blocks, start=1):
            if v in block:
                return i
        raise ValueError(f"node {v} not in partition")

    @classmethod
    def from_ranking(cls, values, tie_tol: float = 0.0) -> "OrderedPartition":
        """Descending ranking of indices by value; gaps <= tie_tol merge into one block."""
        values = np.asarray(values, dtype=np.float64)
        order = np.lexsort((np.arange(len(values)), -values))
        blocks: list[list[int]] = []
        prev = None
        for i in order:
            val = values[i]
            if prev is None or prev - val > tie_tol:
                blocks.append([int(i)])
            else:
                blocks[-1].append(int(i))
            prev = val
        return cls(tuple(tuple(b) for b in blocks), len(values))


@dataclass(frozen=True)
class PreferenceProfile:
    """One ordered partition of V per node."""

    partitions: tuple[OrderedPartition, ...]

    def __post_init__(self):
        n = len(self.partitions)
        for p in self.partitions:
            if p.n != n:
                raise DimensionMismatchError("every partition must rank all nodes")

    @property
    def n(self) -> int:
        return len(self.partitions)


@dataclass(frozen=True)
class WeightVector:
    """Non-negative, non-increasing positional weights summing to 1."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.values, dtype=np.float64)
        if w.ndim != 1 or len(w) == 0:
            raise ValueError("weight vector must be a non-empty 1-d array")
        if w.min() < 0 or (np.diff(w) > 0).any():
            raise ValueError("weights must be non-negative and non-increasing")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "values", w)

    @property
    def n(self) -> int:
        return len(self.values)


def borda_weights(n: int) -> WeightVector:
    """Positional weights [n, n-1, ..., 1] scaled by n(n+1)/2 to sum to 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    raw = np.arange(n, 0, -1, dtype=np.float64)
    return WeightVector(raw / (n * (n + 1) / 2))


def _partition_row(partition: OrderedPartition, w: WeightVector) -> np.ndarray:
    # members of a tied block share the mean of the positional weights the
    # block spans; strict rankings reduce to a permutation of w
    row = np.zeros(partition.n)
    pos = 0
    for block in partition.blocks:
        k = len(block)
        row[list(block)] = w.values[pos : pos + k].sum() / k
        pos += k
    return row


def preference_chain(profile: PreferenceProfile, w: WeightVector) -> MarkovChain:
    """Chain whose row u assigns w's positional weights by u's ranking."""
    if profile.n != w.n:
        raise DimensionMismatchError(f"profile has {profile.n} nodes, weights have {w.n}")
    rows = np.vstack([_partition_row(p, w) for p in profile.partitions])
    return MarkovChain(rows)


def preference_centrality(profile: PreferenceProfile, w: WeightVector) -> np.ndarray:
    """Collective score per node: sum over voters of the weight at that node's rank."""
    if profile.n != w.n:
        raise DimensionMismatchError(f"profile has {profile.n} nodes, weights have {w.n}")
    acc = np.zeros(profile.n)
    for p in profile.partitions:
        acc += _partition_row(p, w)
    return acc


def pagerank_preferences(
    g: WeightedGraph, alpha: float, tie_tol: float = 1e-9
) -> PreferenceProfile:
    """Each node ranks all nodes by its own restart vector, descending.

    Entries within ``tie_tol`` of their sorted neighbor merge into one tied
    block; the default keeps only deliberate ties, not float noise.
    """
    check_alpha(alpha)
    ppr = ppr_matrix(g, alpha)
    parts = tuple(
        OrderedPartition.from_ranking(ppr.matrix[u], tie_tol) for u in range(g.n)
    )
    return PreferenceProfile(parts)


# ---------------------------------------------------------------------------
# cooperative games and Shapley values


class CharacteristicFunction:
    """Deterministic coalition-value oracle with memoized evaluations."""

    def __init__(self, fn: Callable[[frozenset], float], n: int):
        self.fn = fn
        self.n = n
        self._memo: dict[int, float] = {}

    def value(self, mask: int) -> float:
        """Coalition value addressed by bitmask (bit u set iff node u joined)."""
        cached = self._memo.get(mask)
        if cached is None:
            coalition = frozenset(u for u in range(self.n) if mask >> u & 1)
            cached = float(self.fn(coalition))
            self._memo[mask] = cached
        return cached

    def __call__(self, coalition) -> float:
        mask = 0
        for u in coalition:
            u = int(u)
            if not 0 <= u < self.n:
                raise ValueError(f"player {u} out of range for n={self.n}")
            mask |= 1 << u
        return self.value(mask)


@dataclass(frozen=True)
class ShapleyEstimate:
    """Monte Carlo Shapley estimate with per-coordinate standard errors."""

    values: np.ndarray
    stderr: np.ndarray
    samples: int
    seed: int


def _as_game(tau, n: int | None) -> CharacteristicFunction:
    if isinstance(tau, CharacteristicFunction):
        return tau
    if n is None:
        raise ValueError("n is required when tau is a plain callable")
    return CharacteristicFunction(tau, n)


def shapley_exact(tau, n: int | None = None) -> np.ndarray:
    """Expected marginal contribution over all n! arrival orders, exactly.

    Permutations sharing the same prefix set are grouped, so each coalition
    is evaluated once and weighted by |T|! (n-|T|-1)! / n!. Refused above
    10 players.
    """
    game = _as_game(tau, n)
    n = game.n
    if n > EXACT_PLAYER_CAP:
        raise TooManyPlayersError(f"exact Shapley capped at {EXACT_PLAYER_CAP} players, got {n}")
    fact = [math.factorial(k) for k in range(n + 1)]
    weights = [fact[t] * fact[n - t - 1] / fact[n] for t in range(n)]
    phi = np.zeros(n)
    for mask in range(1 << n):
        base = game.value(mask)
        w = weights[mask.bit_count()]
        for p in range(n):
            if not mask >> p & 1:
                phi[p] += w * (game.value(mask | 1 << p) - base)
    return phi


def shapley_monte_carlo(tau, n: int | None, samples: int, seed: int) -> ShapleyEstimate:
    """Permutation-sampling estimate of the Shapley value.

    Sample i draws from the Philox stream keyed (seed, i), so the result is
    reproducible regardless of evaluation order. The raw mean is reported
    (no efficiency rescaling) together with its standard error.
    """
    game = _as_game(tau, n)
    n = game.n
    if samples < 1:
        raise ValueError("samples must be >= 1")
    totals = np.zeros(n)
    squares = np.zeros(n)
    for i in range(samples):
        rng = np.random.Generator(_philox(seed, i))
        perm = rng.permutation(n)
        mask = 0
        prev = game.value(0)
        for p in perm:
            mask |= 1 << p
            val = game.value(mask)
            delta = val - prev
            totals[p] += delta
            squares[p] += delta * delta
            prev = val
    mean = totals / samples
    if samples > 1:
        var = np.clip(squares - samples * mean**2, 0.0, None) / (samples - 1)
        stderr = np.sqrt(var / samples)
    else:
        stderr = np.zeros(n)
    return ShapleyEstimate(values=mean, stderr=stderr, samples=samples, seed=seed)


def _philox(seed: int, stream: int = 0) -> np.random.Philox:
    return np.random.Philox(key=np.array([seed, stream], dtype=np.uint64))


# ---------------------------------------------------------------------------
# incentive model


class IncentiveModel:
    """Per-node utility oracles u_s over coalitions of the other nodes."""

    def __init__(self, utilities: Sequence[Callable[[frozenset], float]]):
        self.utilities = list(utilities)
        self.n = len(self.utilities)
        self._memo: dict[tuple[int, int], float] = {}

    def utility(self, s: int, others_mask: int) -> float:
        """u_s of the coalition encoded by ``others_mask`` (bit s must be clear)."""
        if others_mask >> s & 1:
            raise ValueError("coalition passed to u_s must exclude s")
        key = (s, others_mask)
        cached = self._memo.get(key)
        if cached is None:
            coalition = frozenset(u for u in range(self.n) if others_mask >> u & 1)
            cached = float(self.utilities[s](coalition))
            self._memo[key] = cached
        return cached


def _validate_incentive(model: IncentiveModel):
    n = model.n
    if n > EXACT_PLAYER_CAP:
        raise TooManyPlayersError(
            f"incentive validation is exhaustive; capped at {EXACT_PLAYER_CAP} players"
        )
    for s in range(n):
        others = [u for u in range(n) if u != s]
        full = sum(1 << u for u in others)
        if model.utility(s, 0) < -1e-12:
            raise NotMonotoneError(f"u_{s}(empty) is negative")
        for sub in range(1 << len(others)):
            mask = 0
            for j, u in enumerate(others):
                if sub >> j & 1:
                    mask |= 1 << u
            base = model.utility(s, mask)
            for u in others:
                if not mask >> u & 1:
                    if model.utility(s, mask | 1 << u) < base - 1e-12:
                        raise NotMonotoneError(f"u_{s} decreases when a node joins")
        if abs(model.utility(s, full) - 1.0) > 1e-9:
            raise NotNormalizedError(f"u_{s}(all others) must equal 1")


def _coalition_mask(coalition) -> int:
    mask = 0
    for u in coalition:
        mask |= 1 << int(u)
    return mask


def incentive_chain(model: IncentiveModel) -> tuple[MarkovChain, np.ndarray]:
    """Chain whose row s is the Shapley value of s's gated utility game.

    The gated game pays u_s(T minus s) once s itself is present and 0
    otherwise; the returned centrality is the Shapley value of the social
    utility sum, which the column sums of the chain match.
    """
    _validate_incentive(model)
    n = model.n
    not_s = [((1 << n) - 1) ^ (1 << s) for s in range(n)]

    def gated(s: int):
        def tau(coalition: frozenset) -> float:
            if s not in coalition:
                return 0.0
            return model.utility(s, _coalition_mask(coalition) & not_s[s])

        return tau

    rows = [shapley_exact(CharacteristicFunction(gated(s), n)) for s in range(n)]

    def social(coalition: frozenset) -> float:
        mask = _coalition_mask(coalition)
        return sum(model.utility(s, mask & not_s[s]) for s in sorted(coalition))

    centrality = shapley_exact(CharacteristicFunction(social, n))
    return MarkovChain(np.vstack(rows)), centrality


def ppr_incentive_model(g: WeightedGraph, alpha: float) -> IncentiveModel:
    """Incentive utilities u_s(T) proportional to the restart mass s sends into T.

    The raw mass sum_{v in T} PPR[s, v] never reaches 1 on coalitions that
    exclude s, so each u_s is scaled by 1/(1 - PPR[s, s]) to satisfy the
    normalization the chain construction requires. This scaling is an
    interpretation choice, not part of the raw definition.
    """
    ppr = ppr_matrix(g, alpha)
    if g.n < 2:
        raise ValueError("incentive model needs at least two nodes")

    def make(s: int):
        scale = 1.0 - ppr.matrix[s, s]
        if scale <= 0.0:
            raise ValueError(f"node {s} keeps all restart mass; cannot normalize")
        row = ppr.matrix[s]

        def u(coalition: frozenset) -> float:
            return float(sum(row[v] for v in sorted(coalition))) / scale

        return u

    return IncentiveModel([make(s) for s in range(g.n)])


def pagerank_utility_game(g: WeightedGraph, alpha: float) -> CharacteristicFunction:
    """Cooperative game tau(S) = sum_{u,v in S} PPR[u, v] over the full powerset."""
    ppr = ppr_matrix(g, alpha)

    def tau(coalition: frozenset) -> float:
        idx = sorted(coalition)
        return float(ppr.matrix[np.ix_(idx, idx)].sum()) if idx else 0.0

    return CharacteristicFunction(tau, g.n)


def pagerank_contribution_rate(g: WeightedGraph, alpha: float, S, T) -> float:
    """Rate of restart mass flowing from S into T: sum_{u in S, v in T} PPR[u,v] / |S|."""
    ppr = ppr_matrix(g, alpha)
    s_idx = sorted({int(u) for u in S})
    t_idx = sorted({int(v) for v in T})
    if not s_idx:
        raise EmptyOrFullSetError("S must be non-empty")
    if any(u < 0 or u >= g.n for u in s_idx + t_idx):
        raise ValueError(f"node index out of range for n={g.n}")
    if not t_idx:
        return 0.0
    return float(ppr.matrix[np.ix_(s_idx, t_idx)].sum()) / len(s_idx)


# ---------------------------------------------------------------------------
# independent-cascade influence model


@dataclass(frozen=True)
class InfluenceInstance:
    """Directed graph whose edge weights are activation probabilities in [0, 1]."""

    n: int
    edges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) != self.n:
            raise DimensionMismatchError("one label per node required")
        for u, v, p in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError("edge endpoint out of range")
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")

    def out_edges(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for u, v, p in self.edges:
            adj[u].append((v, p))
        for lst in adj:
            lst.sort()
        return adj

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown node label {label!r}") from None


def load_influence(text: str) -> InfluenceInstance:
    """Parse an edge list whose weight column is an activation probability."""
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[str, str]] = set()
    labels: list[str] = []
    index: dict[str, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise MalformedLineError(line_no, f"expected 'u v p', got {len(parts)} fields")
        u, v, ps = parts
        try:
            p = float(ps)
        except ValueError:
            raise MalformedLineError(line_no, f"cannot parse probability {ps!r}") from None
        if not 0.0 <= p <= 1.0:
            raise MalformedLineError(line_no, f"probability {p} outside [0, 1]")
        if (u, v) in seen:
            raise DuplicateEdgeError(f"line {line_no}: duplicate edge {u} {v}")
        seen.add((u, v))
        for lab in (u, v):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
        edges.append((index[u], index[v], p))
    if not labels:
        raise MalformedLineError(0, "edge list contains no edges")
    return InfluenceInstance(n=len(labels), edges=tuple(edges), labels=tuple(labels))


def _validate_seed_set(S, n: int, allow_empty: bool = True) -> list[int]:
    idx = sorted({int(u) for u in S})
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"node index out of range for n={n}")
    if not idx and not allow_empty:
        raise EmptyOrFullSetError("seed set must be non-empty")
    return idx


def _cascade(inst: InfluenceInstance, seeds: list[int], rng: np.random.Generator) -> set[int]:
    # discrete time: nodes activated at step t-1 each get one chance per
    # still-inactive out-neighbor; draws happen in sorted node order
    adj = inst.out_edges()
    active = set(seeds)
    frontier = sorted(active)
    while frontier:
        newly: list[int] = []
        for u in frontier:
            for v, p in adj[u]:
                if v in active:
                    continue
                if p >= 1.0 or (p > 0.0 and rng.random() < p):
                    active.add(v)
                    newly.append(v)
        frontier = sorted(set(newly))
    return active


def ic_sample(inst: InfluenceInstance, S, seed: int) -> frozenset:
    """One cascade realization from seed set S, deterministic per rng seed."""
    seeds = _validate_seed_set(S, inst.n)
    rng = np.random.Generator(_philox(seed))
    return frozenset(_cascade(inst, seeds, rng))


def _split_edges(inst: InfluenceInstance):
    certain = [(u, v) for u, v, p in inst.edges if p >= 1.0]
    uncertain = [(u, v, p) for u, v, p in inst.edges if 0.0 < p < 1.0]
    return certain, uncertain


def _world_reachability(inst: InfluenceInstance) -> tuple[np.ndarray, np.ndarray]:
    """All live-edge worlds: boolean reachability R[w, u, v] and world probabilities.

    Worlds enumerate subsets of the edges with probability strictly between
    0 and 1; always-live and never-live edges are folded in. Cascade final
    sets are distributed exactly as reachability over these worlds.
    """
    n = inst.n
    certain, uncertain = _split_edges(inst)
    k = len(uncertain)
    worlds = 1 << k
    base = np.eye(n, dtype=bool)
    for u, v in certain:
        base[u, v] = True
    adj = np.broadcast_to(base, (worlds, n, n)).copy()
    idx = np.arange(worlds)
    probs = np.ones(worlds)
    for j, (u, v, p) in enumerate(uncertain):
        live = (idx >> j & 1).astype(bool)
        adj[live, u, v] = True
        probs *= np.where(live, p, 1.0 - p)
    reach = adj
    hops = 1
    while hops < n - 1:
        step = reach.astype(np.uint8)
        reach = reach | (step @ step > 0)
        hops *= 2
    return reach, probs


def influence_spread_exact(inst: InfluenceInstance, S) -> float:
    """Expected final activated-set size, by exact live-edge enumeration."""
    seeds = _validate_seed_set(S, inst.n)
    if len(inst.edges) > EXACT_EDGE_CAP:
        raise TooManyEdgesError(
            f"exact spread capped at {EXACT_EDGE_CAP} edges, got {len(inst.edges)}"
        )
    if not seeds:
        return 0.0
    reach, probs = _world_reachability(inst)
    reached = reach[:, seeds, :].any(axis=1)
    return float(probs @ reached.sum(axis=1))


@dataclass(frozen=True)
class SpreadEstimate:
    """Monte Carlo spread estimate with its standard error."""

    value: float
    stderr: float
    samples: int
    seed: int


def influence_spread_mc(inst: InfluenceInstance, S, samples: int, seed: int) -> SpreadEstimate:
    """Unbiased cascade-sampling estimate of the spread, one substream per sample."""
    seeds = _validate_seed_set(S, inst.n)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    total = 0.0
    total_sq = 0.0
    for i in range(samples):
        rng = np.random.Generator(_philox(seed, i))
        size = float(len(_cascade(inst, seeds, rng)))
        total += size
        total_sq += size * size
    mean = total / samples
    if samples > 1:
        var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
        stderr = math.sqrt(var / samples)
    else:
        stderr = 0.0
    return SpreadEstimate(value=mean, stderr=stderr, samples=samples, seed=seed)


def _activation_games(n: int, reach: np.ndarray, probs: np.ndarray):
    """Characteristic functions tau_v(S) = P(v ends up active | seeds S)."""
    bits = 1 << np.arange(n, dtype=np.int64)
    ancestors = (reach * bits[None, :, None]).sum(axis=1)  # mask of nodes reaching v
    full = (1 << n) - 1
    games = []
    for v in range(n):
        mass = np.zeros(1 << n)
        np.add.at(mass, ancestors[:, v], probs)
        subset_sum = mass.copy()
        for b in range(n):
            step = 1 << b
            for m in range(1 << n):
                if m & step:
                    subset_sum[m] += subset_sum[m ^ step]

        def tau(coalition: frozenset, subset_sum=subset_sum) -> float:
            # P(some seed reaches v) = 1 - P(all of v's ancestors avoid S)
            return 1.0 - float(subset_sum[full ^ _coalition_mask(coalition)])

        games.append(CharacteristicFunction(tau, n))
    return games


@dataclass(frozen=True)
class InfluenceChain:
    """Activation-game chain with its spread-game centrality."""

    chain: MarkovChain
    centrality: np.ndarray
    centrality_stderr: np.ndarray | None
    mode: str
    samples: int | None
    seed: int | None


def influence_chain(
    inst: InfluenceInstance,
    mode: str = "exact",
    samples: int | None = None,
    seed: int | None = None,
) -> InfluenceChain:
    """Chain whose row v is the Shapley value of v's activation game.

    Exact mode enumerates live-edge worlds and arrival orders (capped at 8
    nodes and 20 edges); Monte Carlo mode samples a world and an arrival
    order per substream, with the centrality estimated from an independent
    set of substreams so conformance stays a statistical check.
    """
    n = inst.n
    if mode == "exact":
        if n > EXACT_CHAIN_NODE_CAP or len(inst.edges) > EXACT_EDGE_CAP:
            raise TooLargeError(
                f"exact influence chain capped at {EXACT_CHAIN_NODE_CAP} nodes "
                f"and {EXACT_EDGE_CAP} edges"
            )
        reach, probs = _world_reachability(inst)
        games = _activation_games(n, reach, probs)
        rows = np.vstack([shapley_exact(game) for game in games])

        def spread(coalition: frozenset) -> float:
            if not coalition:
                return 0.0
            seeds = sorted(coalition)
            reached = reach[:, seeds, :].any(axis=1)
            return float(probs @ reached.sum(axis=1))

        centrality = shapley_exact(CharacteristicFunction(spread, n))
        return InfluenceChain(MarkovChain(rows), centrality, None, "exact", None, None)

    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    if samples is None or seed is None:
        raise ValueError("Monte Carlo mode requires samples and seed")
    if samples < 1:
        raise ValueError("samples must be >= 1")

    row_totals = np.zeros((n, n))
    cent_totals = np.zeros(n)
    cent_squares = np.zeros(n)
    for i in range(samples):
        rng = np.random.Generator(_philox(seed, 2 * i))
        reach = _sample_world_reach(inst, rng)
        covered = 0
        for u in rng.permutation(n):
            new = reach[u] & ~covered
            covered |= new
            while new:
                low = new & -new
                row_totals[low.bit_length() - 1, u] += 1.0
                new ^= low
        rng = np.random.Generator(_philox(seed, 2 * i + 1))
        reach = _sample_world_reach(inst, rng)
        covered = 0
        for u in rng.permutation(n):
            new = reach[u] & ~covered
            covered |= new
            gain = float(new.bit_count())
            cent_totals[u] += gain
            cent_squares[u] += gain * gain
    rows = row_totals / samples
    mean = cent_totals / samples
    if samples > 1:
        var = np.clip(cent_squares - samples * mean**2, 0.0, None) / (samples - 1)
        stderr = np.sqrt(var / samples)
    else:
        stderr = np.zeros(n)
    return InfluenceChain(MarkovChain(rows), mean, stderr, "mc", samples, seed)


def _sample_world_reach(inst: InfluenceInstance, rng: np.random.Generator) -> list[int]:
    """Per-node reachability bitmasks in one sampled live-edge world."""
    n = inst.n
    adj = [0] * n
    for u, v, p in inst.edges:
        if p >= 1.0 or (p > 0.0 and rng.random() < p):
            adj[u] |= 1 << v
    reach = [1 << u | adj[u] for u in range(n)]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            acc = reach[u]
            frontier = acc
            while frontier:
                low = frontier & -frontier
                acc |= reach[low.bit_length() - 1]
                frontier ^= low
            if acc != reach[u]:
                reach[u] = acc
                changed = True
    return reach
