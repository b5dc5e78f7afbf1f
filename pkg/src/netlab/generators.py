"""Population-network generating models.

Every generator is a pure function of its parameters and a seed.  For
the independent-edge families (Erdos-Renyi, beta, blockmodel, graphon,
covariate) the uniform variable deciding pair {i, j} is indexed by the
pair itself, not by the graph size, so generation commutes exactly with
restriction to 1..m.  Each operation draws from its own named stream,
so results never depend on call order.

The module also provides exact finite laws for the small-graph regime
(products over independent edges, mixtures over graphon cells, and
brute-force normalization for the exponential family), which serve as
oracles for the statistical tests elsewhere.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import expit

from .errors import CapacityError, RangeError, ValidationError
from .graphs import (
    Multigraph,
    Partition,
    SimpleGraph,
    canonical_pair,
    enumerate_graphs,
    pairs_in_order,
    restrict,
)

_LABEL_DIGESTS = {}


def _stream(seed: int, label: str) -> np.random.Generator:
    """Independent generator for one (operation, seed) pair."""
    if not isinstance(seed, int) or seed < 0:
        raise ValidationError(f"seed must be a non-negative integer, got {seed!r}")
    digest = _LABEL_DIGESTS.get(label)
    if digest is None:
        digest = int.from_bytes(hashlib.blake2b(label.encode(), digest_size=8).digest(), "big")
        _LABEL_DIGESTS[label] = digest
    return np.random.default_rng(np.random.SeedSequence([seed, digest]))


def child_seeds(seed: int, label: str, count: int) -> list:
    """Deterministic per-replicate seeds for Monte Carlo fan-out."""
    rng = _stream(seed, label)
    return [int(s) for s in rng.integers(0, 2**63, size=count)]


@lru_cache(maxsize=64)
def _pair_arrays(n: int):
    """Endpoint arrays (ii, jj) of the canonical pair order for 1..n."""
    jj = np.repeat(np.arange(2, n + 1), np.arange(1, n))
    ii = np.arange(len(jj)) - (jj - 1) * (jj - 2) // 2 + 1
    return ii, jj


def _graph_from_mask(n: int, mask: np.ndarray) -> SimpleGraph:
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return SimpleGraph(n)
    ii, jj = _pair_arrays(n)
    edges = frozenset(zip(ii[hits].tolist(), jj[hits].tolist()))
    return SimpleGraph(n, edges)


def _check_probability(p, name="p"):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {p}")
    return p


# ---------------------------------------------------------------------------
# Model specifications


@dataclass(frozen=True)
class ER:
    p: float

    def __post_init__(self):
        _check_probability(self.p)


@dataclass(frozen=True)
class Beta:
    beta: tuple

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        if not all(math.isfinite(b) for b in beta):
            raise ValidationError("beta entries must be finite")
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class SBM:
    p: float
    q: float
    B: Partition

    def __post_init__(self):
        _check_probability(self.p)
        _check_probability(self.q, "q")


@dataclass(frozen=True)
class Graphon:
    """Piecewise-constant symmetric graphon on a k x k grid of cells."""

    grid: tuple

    def __post_init__(self):
        grid = tuple(tuple(float(x) for x in row) for row in self.grid)
        k = len(grid)
        if k == 0 or any(len(row) != k for row in grid):
            raise ValidationError("grid must be square and non-empty")
        for a in range(k):
            for b in range(k):
                _check_probability(grid[a][b], "grid entry")
                if grid[a][b] != grid[b][a]:
                    raise ValidationError("grid must be symmetric")
        object.__setattr__(self, "grid", grid)

    @property
    def k(self) -> int:
        return len(self.grid)

    def mean(self) -> float:
        """Integral of the graphon over the unit square."""
        return float(np.mean(np.asarray(self.grid)))


ERGM_STATISTICS = ("edges", "two-stars", "triangles")


@dataclass(frozen=True)
class ERGM:
    stats: tuple
    theta: tuple
    n: int

    def __post_init__(self):
        stats = tuple(self.stats)
        theta = tuple(float(t) for t in self.theta)
        if any(s not in ERGM_STATISTICS for s in stats):
            raise ValidationError(f"statistics must be among {ERGM_STATISTICS}")
        if len(set(stats)) != len(stats):
            raise ValidationError("repeated statistic id")
        if len(stats) != len(theta):
            raise ValidationError("stats and theta lengths differ")
        object.__setattr__(self, "stats", stats)
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class PA:
    delta: float

    def __post_init__(self):
        if not float(self.delta) > -1.0:
            raise ValidationError("delta must exceed -1")


@dataclass(frozen=True)
class Superstar:
    p: float
    delta: float

    def __post_init__(self):
        if not 0.0 < float(self.p) < 1.0:
            raise ValidationError("p must lie strictly in (0, 1)")
        if not float(self.delta) > -1.0:
            raise ValidationError("delta must exceed -1")


@dataclass(frozen=True)
class EdgeExch:
    alpha: float
    theta: float
    K: int

    def __post_init__(self):
        if not 0.0 < float(self.alpha) < 1.0:
            raise ValidationError("alpha must lie strictly in (0, 1)")
        if not float(self.theta) > -float(self.alpha):
            raise ValidationError("theta must exceed -alpha")
        if int(self.K) < 100:
            raise ValidationError("truncation level K must be at least 100")


@dataclass(frozen=True)
class Covariate:
    theta: tuple
    x: tuple

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta)
        x = tuple(tuple(float(v) for v in row) for row in self.x)
        if any(len(row) != len(theta) for row in x):
            raise ValidationError("covariate rows must match the length of theta")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class RelExch:
    phi: tuple
    psi: Partition
    kernel: object

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))


# ---------------------------------------------------------------------------
# Generators


def gen_er(p: float, n: int, seed: int) -> SimpleGraph:
    """Each of the n(n-1)/2 edges present independently with probability p."""
    p = _check_probability(p)
    if n < 0:
        raise RangeError("n must be non-negative")
    u = _stream(seed, "er").random(n * (n - 1) // 2)
    return _graph_from_mask(n, u < p)


def gen_beta(beta, seed: int) -> SimpleGraph:
    """Edge {i, j} present independently with probability expit(beta_i + beta_j)."""
    spec = beta if isinstance(beta, Beta) else Beta(tuple(beta))
    b = np.asarray(spec.beta)
    n = len(b)
    ii, jj = _pair_arrays(n)
    probs = expit(b[ii - 1] + b[jj - 1])
    u = _stream(seed, "beta").random(n * (n - 1) // 2)
    return _graph_from_mask(n, u < probs)


def gen_sbm(p: float, q: float, B: Partition, seed: int) -> SimpleGraph:
    """Within-block edges with probability p, between-block with q."""
    p = _check_probability(p)
    q = _check_probability(q, "q")
    n = B.n
    ii, jj = _pair_arrays(n)
    blocks = np.asarray(B.block_of)
    probs = np.where(blocks[ii - 1] == blocks[jj - 1], p, q)
    u = _stream(seed, "sbm").random(n * (n - 1) // 2)
    return _graph_from_mask(n, u < probs)


def _grid_cells(u: np.ndarray, k: int) -> np.ndarray:
    """1-based grid cell of each uniform; u = 0 maps to cell 1, u = 1 to cell k."""
    cells = np.ceil(u * k).astype(int)
    return np.clip(cells, 1, k)


def gen_graphon(grid, n: int, seed: int) -> SimpleGraph:
    """Latent uniforms per vertex, then conditionally independent edges.

    The grid is a symmetric k x k matrix of cell probabilities; cell
    boundaries are at multiples of 1/k.
    """
    spec = grid if isinstance(grid, Graphon) else Graphon(tuple(tuple(r) for r in grid))
    if n < 0:
        raise RangeError("n must be non-negative")
    h = np.asarray(spec.grid)
    uv = _stream(seed, "graphon-vertices").random(n)
    ue = _stream(seed, "graphon-edges").random(n * (n - 1) // 2)
    cells = _grid_cells(uv, spec.k)
    ii, jj = _pair_arrays(n)
    probs = h[cells[ii - 1] - 1, cells[jj - 1] - 1]
    return _graph_from_mask(n, ue < probs)


def _count_edges(g: SimpleGraph) -> int:
    return g.edge_count


def _count_two_stars(g: SimpleGraph) -> int:
    return sum(d * (d - 1) // 2 for d in g.degrees().values())


def _count_triangles(g: SimpleGraph) -> int:
    total = 0
    for a, b, c in itertools.combinations(range(1, g.n + 1), 3):
        if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c):
            total += 1
    return total


_STAT_FUNCS = {
    "edges": _count_edges,
    "two-stars": _count_two_stars,
    "triangles": _count_triangles,
}


def graph_statistics(g: SimpleGraph, stats) -> tuple:
    """Evaluate the named sufficient statistics on one graph."""
    return tuple(_STAT_FUNCS[s](g) for s in stats)


@lru_cache(maxsize=32)
def _ergm_stat_table(n: int, stats: tuple) -> np.ndarray:
    graphs = enumerate_graphs(n)
    return np.array([graph_statistics(g, stats) for g in graphs], dtype=float)


def _ergm_probs(spec: ERGM) -> np.ndarray:
    table = _ergm_stat_table(spec.n, spec.stats)
    weights = np.exp(table @ np.asarray(spec.theta))
    return weights / weights.sum()


def gen_ergm_exact(spec: ERGM, seed: int) -> SimpleGraph:
    """Sample the exponential family by exact normalization over all graphs."""
    if spec.n > 6:
        raise CapacityError("exact normalization is limited to n <= 6")
    probs = _ergm_probs(spec)
    idx = _stream(seed, "ergm").choice(len(probs), p=probs)
    return enumerate_graphs(spec.n)[int(idx)]


def gen_pa(delta: float, n_vertices: int, seed: int) -> Multigraph:
    """Preferential attachment tree grown from a single edge {1, 2}.

    Vertex t attaches to an existing vertex v with probability
    proportional to deg(v) + delta.
    """
    PA(delta)
    delta = float(delta)
    if n_vertices < 2:
        raise RangeError("growth starts from an edge, so n_vertices must be >= 2")
    rng = _stream(seed, "pa")
    deg = np.zeros(n_vertices + 1)
    deg[1] = deg[2] = 1.0
    pairs = [(1, 2)]
    for t in range(3, n_vertices + 1):
        weights = deg[1:t] + delta
        cum = np.cumsum(weights)
        v = int(np.searchsorted(cum, rng.random() * cum[-1], side="right")) + 1
        pairs.append(canonical_pair(v, t))
        deg[v] += 1
        deg[t] = 1.0
    return Multigraph(tuple(pairs))


def gen_superstar(p: float, delta: float, n_vertices: int, seed: int) -> Multigraph:
    """Growth with a hub: vertex 1 receives each new edge with probability p.

    Otherwise the arrival attaches preferentially among the non-hub
    vertices.  The very first arrival has no non-hub candidates and
    always joins the hub.
    """
    Superstar(p, delta)
    p, delta = float(p), float(delta)
    if n_vertices < 2:
        raise RangeError("growth starts from an edge, so n_vertices must be >= 2")
    rng = _stream(seed, "superstar")
    deg = np.zeros(n_vertices + 1)
    deg[1] = deg[2] = 1.0
    pairs = [(1, 2)]
    for t in range(3, n_vertices + 1):
        if rng.random() < p:
            v = 1
        else:
            weights = deg[2:t] + delta
            cum = np.cumsum(weights)
            v = int(np.searchsorted(cum, rng.random() * cum[-1], side="right")) + 2
        pairs.append(canonical_pair(v, t))
        deg[v] += 1
        deg[t] = 1.0
    return Multigraph(tuple(pairs))


def stick_breaking_weights(alpha: float, theta: float, K: int, rng) -> np.ndarray:
    """Truncated two-parameter stick-breaking weights, renormalized to sum 1."""
    ks = np.arange(1, K + 1)
    v = rng.beta(1.0 - alpha, theta + ks * alpha)
    w = v * np.concatenate(([1.0], np.cumprod(1.0 - v[:-1])))
    return w / w.sum()


def gen_edge_exch(alpha: float, theta: float, K: int, m_edges: int, seed: int) -> Multigraph:
    """Edge-labeled multigraph with pairs drawn by vertex weight products.

    Weights follow the truncated two-parameter stick-breaking law; each
    pair is two independent weight draws, redrawn when they coincide.
    """
    EdgeExch(alpha, theta, K)
    if m_edges < 0:
        raise RangeError("m_edges must be non-negative")
    rng = _stream(seed, "edge-exch")
    w = stick_breaking_weights(float(alpha), float(theta), int(K), rng)
    pairs = np.empty((m_edges, 2), dtype=np.int64)
    filled = 0
    while filled < m_edges:
        need = m_edges - filled
        draw = rng.choice(int(K), size=(need, 2), p=w)
        ok = draw[:, 0] != draw[:, 1]
        kept = draw[ok]
        pairs[filled:filled + len(kept)] = kept
        filled += len(kept)
    pairs += 1
    pairs.sort(axis=1)
    return Multigraph(tuple(zip(pairs[:, 0].tolist(), pairs[:, 1].tolist())))


def gen_covariate(theta, x, seed: int) -> SimpleGraph:
    """Edges independent with logistic probability in the summed covariates."""
    spec = Covariate(tuple(theta), tuple(tuple(r) for r in x))
    xs = np.asarray(spec.x)
    n = len(xs)
    ii, jj = _pair_arrays(n)
    probs = expit((xs[ii - 1] + xs[jj - 1]) @ np.asarray(spec.theta))
    u = _stream(seed, "covariate").random(n * (n - 1) // 2)
    return _graph_from_mask(n, u < probs)


class LatentUniforms:
    """Lazy table of i.i.d. Uniform[0, 1] variables keyed by index.

    Every entry is a pure function of (seed, index), so values do not
    depend on the order in which they are requested.
    """

    _U0, _VERTEX, _PAIR = 11, 13, 17

    def __init__(self, seed: int):
        if not isinstance(seed, int) or seed < 0:
            raise ValidationError("seed must be a non-negative integer")
        self._seed = seed
        self._cache = {}

    def _draw(self, *key) -> float:
        value = self._cache.get(key)
        if value is None:
            ss = np.random.SeedSequence([self._seed, *key])
            value = float(np.random.default_rng(ss).random())
            self._cache[key] = value
        return value

    def u0(self) -> float:
        return self._draw(self._U0)

    def vertex(self, i: int) -> float:
        return self._draw(self._VERTEX, i)

    def pair(self, i: int, j: int) -> float:
        return self._draw(self._PAIR, *canonical_pair(i, j))


def sbm_kernel(phi, psi: Partition, i, j, u0, ui, uj, uij) -> int:
    """Blockmodel edge rule: compare the pair uniform to p or q by block."""
    p, q = phi
    return int(uij <= (p if psi.same_block(i, j) else q))


def covariate_kernel(x):
    """Edge rule thresholding the pair uniform at the logistic covariate score."""
    xs = tuple(tuple(float(v) for v in row) for row in x)

    def kernel(phi, psi, i, j, u0, ui, uj, uij):
        eta = sum(t * (a + b) for t, a, b in zip(phi, xs[i - 1], xs[j - 1]))
        return int(uij <= expit(eta))

    return kernel


def gen_rel_exch(phi, psi: Partition, kernel, n: int, seed: int) -> SimpleGraph:
    """Relatively exchangeable graph from a binary kernel of latent uniforms.

    Edge {i, j} is present exactly when the kernel returns 1 on the
    structural parameter restricted to 1..max(i, j) and the latent
    uniforms (shared, per-vertex, per-pair).
    """
    if psi.n < n:
        raise ValidationError("structural parameter must cover all generated labels")
    phi = tuple(float(v) for v in phi)
    lat = LatentUniforms(seed)
    edges = set()
    for i, j in pairs_in_order(n):
        value = kernel(phi, psi.restrict(j), i, j, lat.u0(), lat.vertex(i), lat.vertex(j), lat.pair(i, j))
        if value == 1:
            edges.add((i, j))
    return SimpleGraph(n, frozenset(edges))


def generate(spec, seed: int, n: int | None = None):
    """Dispatch a model specification to its generator.

    ``n`` is the vertex budget for families without an intrinsic size
    (and the edge budget for the edge-labeled family).
    """
    if isinstance(spec, ER):
        if n is None:
            raise ValidationError("this family needs an explicit size")
        return gen_er(spec.p, n, seed)
    if isinstance(spec, Beta):
        return gen_beta(spec, seed)
    if isinstance(spec, SBM):
        return gen_sbm(spec.p, spec.q, spec.B, seed)
    if isinstance(spec, Graphon):
        if n is None:
            raise ValidationError("this family needs an explicit size")
        return gen_graphon(spec, n, seed)
    if isinstance(spec, ERGM):
        return gen_ergm_exact(spec, seed)
    if isinstance(spec, PA):
        if n is None:
            raise ValidationError("this family needs an explicit size")
        return gen_pa(spec.delta, n, seed)
    if isinstance(spec, Superstar):
        if n is None:
            raise ValidationError("this family needs an explicit size")
        return gen_superstar(spec.p, spec.delta, n, seed)
    if isinstance(spec, EdgeExch):
        if n is None:
            raise ValidationError("this family needs an explicit edge budget")
        return gen_edge_exch(spec.alpha, spec.theta, spec.K, n, seed)
    if isinstance(spec, Covariate):
        return gen_covariate(spec.theta, spec.x, seed)
    if isinstance(spec, RelExch):
        if n is None:
            raise ValidationError("this family needs an explicit size")
        return gen_rel_exch(spec.phi, spec.psi, spec.kernel, n, seed)
    raise ValidationError(f"unknown model specification {spec!r}")


# ---------------------------------------------------------------------------
# Exact finite laws (small-graph oracles)


def edge_probabilities(spec, n: int) -> np.ndarray:
    """Per-pair edge probabilities, in canonical pair order.

    Only meaningful for the families whose edges are independent given
    the parameters.
    """
    ii, jj = _pair_arrays(n)
    if isinstance(spec, ER):
        return np.full(len(ii), spec.p)
    if isinstance(spec, Beta):
        b = np.asarray(spec.beta)
        return expit(b[ii - 1] + b[jj - 1])
    if isinstance(spec, SBM):
        blocks = np.asarray(spec.B.block_of)
        return np.where(blocks[ii - 1] == blocks[jj - 1], spec.p, spec.q)
    if isinstance(spec, Covariate):
        xs = np.asarray(spec.x)
        return expit((xs[ii - 1] + xs[jj - 1]) @ np.asarray(spec.theta))
    raise ValidationError(f"no independent-edge law for {type(spec).__name__}")


def _intrinsic_size(spec):
    if isinstance(spec, Beta):
        return len(spec.beta)
    if isinstance(spec, SBM):
        return spec.B.n
    if isinstance(spec, ERGM):
        return spec.n
    if isinstance(spec, Covariate):
        return len(spec.x)
    return None


def exact_law(spec, n: int | None = None) -> dict:
    """Exact distribution over all labeled graphs on 1..n.

    Returns a dict keyed by ``SimpleGraph`` covering the full enumeration.
    """
    intrinsic = _intrinsic_size(spec)
    if n is None:
        n = intrinsic
    if n is None:
        raise ValidationError("this family needs an explicit size")
    if intrinsic is not None and n != intrinsic:
        raise ValidationError(f"size {n} conflicts with intrinsic size {intrinsic}")
    graphs = enumerate_graphs(n)
    if isinstance(spec, ERGM):
        probs = _ergm_probs(spec)
        return {g: float(p) for g, p in zip(graphs, probs)}
    if isinstance(spec, Graphon):
        return _graphon_law(spec, n)
    probs = edge_probabilities(spec, n)
    pairs = pairs_in_order(n)
    law = {}
    for g in graphs:
        weight = 1.0
        for pos, pair in enumerate(pairs):
            weight *= probs[pos] if pair in g.edges else 1.0 - probs[pos]
        law[g] = weight
    return law


def _graphon_law(spec: Graphon, n: int) -> dict:
    k = spec.k
    if k**n > 2_000_000:
        raise CapacityError("graphon law enumeration too large")
    h = np.asarray(spec.grid)
    graphs = enumerate_graphs(n)
    pairs = pairs_in_order(n)
    law = dict.fromkeys(graphs, 0.0)
    cell_weight = (1.0 / k) ** n
    for cells in itertools.product(range(k), repeat=n):
        probs = [h[cells[i - 1], cells[j - 1]] for i, j in pairs]
        for g in graphs:
            weight = cell_weight
            for pos, pair in enumerate(pairs):
                weight *= probs[pos] if pair in g.edges else 1.0 - probs[pos]
            law[g] += weight
    return law


def law_restrict(law: dict, m: int) -> dict:
    """Push a law on graphs of 1..n forward through restriction to 1..m."""
    out = {}
    for g, p in law.items():
        h = restrict(g, m)
        out[h] = out.get(h, 0.0) + p
    return out


def law_relabel(law: dict, sigma) -> dict:
    """Push a law forward through a vertex relabeling."""
    from .graphs import relabel

    out = {}
    for g, p in law.items():
        h = relabel(g, sigma)
        out[h] = out.get(h, 0.0) + p
    return out


def total_variation(law_a: dict, law_b: dict) -> float:
    keys = set(law_a) | set(law_b)
    return 0.5 * sum(abs(law_a.get(g, 0.0) - law_b.get(g, 0.0)) for g in keys)


def unit_interval_measure(f, grid_points: int = 4096) -> float:
    """Lebesgue measure of {u in [0, 1] : f(u) == 1} for a step function f.

    Scans a grid and refines each sign change by bisection, so the
    result is exact to machine precision for indicator functions with a
    few jumps that are wider than the grid spacing.
    """
    us = np.linspace(0.0, 1.0, grid_points + 1)
    vals = [int(f(u)) for u in us]
    measure = 0.0
    for idx in range(grid_points):
        left, right = us[idx], us[idx + 1]
        lv, rv = vals[idx], vals[idx + 1]
        if lv == rv:
            measure += (right - left) * lv
            continue
        lo, hi = left, right
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if int(f(mid)) == lv:
                lo = mid
            else:
                hi = mid
        cut = 0.5 * (lo + hi)
        measure += (cut - left) * lv + (right - cut) * rv
    return measure


def pair_kernel_law(phi, psi: Partition, kernel, n: int) -> dict:
    """Exact law of the kernel-generated graph for pair-only kernels.

    Valid when the kernel depends on the latent uniforms only through
    the per-pair one; the shared and per-vertex uniforms are then fixed
    at arbitrary values and each edge probability is the measure of the
    kernel's acceptance set, found numerically.
    """
    phi = tuple(float(v) for v in phi)
    pairs = pairs_in_order(n)
    probs = []
    for i, j in pairs:
        psi_r = psi.restrict(j)
        probs.append(
            unit_interval_measure(lambda u: kernel(phi, psi_r, i, j, 0.5, 0.5, 0.5, u))
        )
    graphs = enumerate_graphs(n)
    law = {}
    for g in graphs:
        weight = 1.0
        for pos, pair in enumerate(pairs):
            weight *= probs[pos] if pair in g.edges else 1.0 - probs[pos]
        law[g] = weight
    return law
