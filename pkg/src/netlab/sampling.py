"""Sampling mechanisms relating a population network to observed data.

Each mechanism is a pure function of (population, parameters, seed) and
returns an ``Observation`` carrying the observed graph together with
its provenance: which population units were sampled, in what order, and
how observed labels map back to population identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RangeError, ResourceError, ValidationError
from .generators import _stream
from .graphs import (
    Multigraph,
    SimpleGraph,
    canonical_pair,
    enumerate_graphs,
    restrict,
)

UNIVERSAL_SCAN_CAP = 10**6


@dataclass(frozen=True)
class Observation:
    """A sampled subnetwork plus how it was obtained.

    ``provenance`` lists the population unit identities in sampling
    order (vertices for vertex-driven mechanisms, edges for edge
    sampling) and ``label_map`` sends population vertex ids to observed
    labels.
    """

    graph: object
    mechanism: str
    params: tuple = ()
    provenance: tuple = ()
    label_map: tuple = ()

    def labels(self) -> dict:
        return dict(self.label_map)


@dataclass(frozen=True)
class PathObservation:
    """Ordered vertex tuples recorded by a path-driven mechanism."""

    paths: tuple = ()


def _observed_graph(g: SimpleGraph, label_map: dict) -> SimpleGraph:
    edges = set()
    for u, v in g.edges:
        if u in label_map and v in label_map:
            edges.add(canonical_pair(label_map[u], label_map[v]))
    return SimpleGraph(len(label_map), frozenset(edges))


def canonical(g, n: int) -> Observation:
    """Restriction to the units labeled 1..n (vertices or edges)."""
    if isinstance(g, SimpleGraph):
        sub = restrict(g, n)
        ids = tuple(range(1, n + 1))
        return Observation(sub, "canonical", (("n", n),), ids, tuple((i, i) for i in ids))
    if isinstance(g, Multigraph):
        if not 1 <= n <= g.m:
            raise RangeError(f"restriction size {n} outside 1..{g.m}")
        return Observation(
            Multigraph(g.pairs[:n]), "canonical", (("n", n),), tuple(range(1, n + 1)), ()
        )
    raise ValidationError(f"cannot sample from {type(g).__name__}")


def vertex_sample(g: SimpleGraph, n: int, seed: int) -> Observation:
    """Uniform vertex sample without replacement, labels a uniform bijection."""
    if not 1 <= n <= g.n:
        raise RangeError(f"sample size {n} outside 1..{g.n}")
    rng = _stream(seed, "vertex-sample")
    ids = [int(v) + 1 for v in rng.choice(g.n, size=n, replace=False)]
    label_map = {pop: k for k, pop in enumerate(ids, start=1)}
    return Observation(
        _observed_graph(g, label_map),
        "vertex",
        (("n", n),),
        tuple(ids),
        tuple(label_map.items()),
    )


def edge_sample(g: SimpleGraph, k: int, seed: int) -> Observation:
    """k edges drawn uniformly with replacement, labels in discovery order.

    The endpoints of the first drawn edge receive labels 1 and 2 in
    uniform random order; every vertex discovered later receives the
    next unused label, again in uniform random order when a draw
    introduces two new vertices at once.
    """
    edges = sorted(g.edges)
    if not edges:
        raise ValidationError("population graph has no edges to sample")
    if k < 1:
        raise RangeError("k must be at least 1")
    rng = _stream(seed, "edge-sample")
    draws = [edges[int(t)] for t in rng.integers(0, len(edges), size=k)]
    label_map = {}
    for u, v in draws:
        new = [x for x in (u, v) if x not in label_map]
        if len(new) == 2 and rng.random() < 0.5:
            new = [new[1], new[0]]
        for x in new:
            label_map[x] = len(label_map) + 1
    observed = frozenset(
        canonical_pair(label_map[u], label_map[v]) for u, v in set(draws)
    )
    return Observation(
        SimpleGraph(len(label_map), observed),
        "edge",
        (("k", k),),
        tuple(draws),
        tuple(label_map.items()),
    )


def labeled_edge_sequence(obs: Observation) -> tuple:
    """The sampled edges of an edge-sampling run, as labeled pairs in order."""
    label_map = obs.labels()
    return tuple(frozenset((label_map[u], label_map[v])) for u, v in obs.provenance)


def snowball_full(g: SimpleGraph, quota: int, seed: int) -> Observation:
    """Full-frontier snowball: add whole neighborhoods until the quota.

    When the next frontier would overshoot, a uniform subset of it fills
    the quota exactly.  If the frontier empties early (the component is
    exhausted), sampling restarts from a uniform unsampled vertex.
    Labels follow discovery order with ties broken by population id.
    """
    if not 1 <= quota <= g.n:
        raise RangeError(f"quota {quota} outside 1..{g.n}")
    rng = _stream(seed, "snowball-full")
    nbr = g.adjacency()
    sampled = []
    in_sample = set()

    def take(vertex):
        sampled.append(vertex)
        in_sample.add(vertex)

    take(int(rng.integers(1, g.n + 1)))
    frontier = sorted(nbr[sampled[0]] - in_sample)
    while len(sampled) < quota:
        if not frontier:
            rest = sorted(set(range(1, g.n + 1)) - in_sample)
            take(rest[int(rng.integers(0, len(rest)))])
            frontier = sorted(nbr[sampled[-1]] - in_sample)
            continue
        if len(sampled) + len(frontier) <= quota:
            chosen = frontier
        else:
            need = quota - len(sampled)
            idx = rng.choice(len(frontier), size=need, replace=False)
            chosen = sorted(frontier[int(t)] for t in idx)
        for v in chosen:
            take(v)
        frontier = sorted({w for v in chosen for w in nbr[v]} - in_sample)
    label_map = {pop: k for k, pop in enumerate(sampled, start=1)}
    return Observation(
        _observed_graph(g, label_map),
        "snowball-full",
        (("quota", quota),),
        tuple(sampled),
        tuple(label_map.items()),
    )


def snowball_chain(g: SimpleGraph, n: int, seed: int) -> Observation:
    """Chain snowball: each step moves to a uniform unsampled neighbor.

    When the current vertex has no unsampled neighbor, the next vertex
    is drawn uniformly among all unsampled vertices instead.  Labels
    follow chain order and the observed graph is the induced subgraph.
    """
    if not 1 <= n <= g.n:
        raise RangeError(f"sample size {n} outside 1..{g.n}")
    rng = _stream(seed, "snowball-chain")
    nbr = g.adjacency()
    chain = [int(rng.integers(1, g.n + 1))]
    in_sample = set(chain)
    while len(chain) < n:
        options = sorted(nbr[chain[-1]] - in_sample)
        if not options:
            options = sorted(set(range(1, g.n + 1)) - in_sample)
        nxt = options[int(rng.integers(0, len(options)))]
        chain.append(nxt)
        in_sample.add(nxt)
    label_map = {pop: k for k, pop in enumerate(chain, start=1)}
    return Observation(
        _observed_graph(g, label_map),
        "snowball-chain",
        (("n", n),),
        tuple(chain),
        tuple(label_map.items()),
    )


def chain_traversed_edges(obs: Observation, population: SimpleGraph) -> tuple:
    """Labeled edges a snowball chain actually walked along.

    A step from the t-th to the (t+1)-th vertex traversed an edge
    exactly when the t-th vertex still had an unsampled neighbor, which
    is reconstructible from the population graph and the chain order.
    """
    nbr = population.adjacency()
    chain = obs.provenance
    traversed = []
    for t in range(len(chain) - 1):
        if nbr[chain[t]] - set(chain[: t + 1]):
            traversed.append(frozenset((t + 1, t + 2)))
    return tuple(traversed)


def thin(g: SimpleGraph, rho: float, seed: int) -> SimpleGraph:
    """Keep each edge independently with probability 1/rho; vertices stay."""
    rho = float(rho)
    if rho < 1.0:
        raise ValidationError(f"rho must be at least 1, got {rho}")
    edges = sorted(g.edges)
    keep = _stream(seed, "thin").random(len(edges)) < 1.0 / rho
    return SimpleGraph(g.n, frozenset(e for e, k in zip(edges, keep) if k))


def path_sample(g: SimpleGraph, k: int, seed: int) -> PathObservation:
    """Record one shortest path between each of k uniform vertex pairs.

    Paths are breadth-first shortest with the lexicographically smallest
    vertex sequence, so results are reproducible; unreachable pairs
    contribute no path.
    """
    if g.n < 2:
        raise RangeError("need at least 2 vertices to draw path endpoints")
    if k < 1:
        raise RangeError("k must be at least 1")
    rng = _stream(seed, "path-sample")
    nbr = g.adjacency()
    paths = []
    for _ in range(k):
        s, t = (int(v) + 1 for v in rng.choice(g.n, size=2, replace=False))
        path = _lex_shortest_path(nbr, s, t)
        if path is not None:
            paths.append(tuple(path))
    return PathObservation(tuple(paths))


def _lex_shortest_path(nbr, s, t):
    from collections import deque

    dist = {t: 0}
    queue = deque([t])
    while queue:
        v = queue.popleft()
        for w in nbr[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    if s not in dist:
        return None
    path = [s]
    while path[-1] != t:
        cur = path[-1]
        path.append(min(w for w in nbr[cur] if dist.get(w, -1) == dist[cur] - 1))
    return path


def paths_to_observation(pobs: PathObservation) -> Observation:
    """Union of recorded path edges, labeled in discovery order."""
    label_map = {}
    edges = set()
    for path in pobs.paths:
        for v in path:
            if v not in label_map:
                label_map[v] = len(label_map) + 1
        for a, b in zip(path, path[1:]):
            edges.add(canonical_pair(label_map[a], label_map[b]))
    return Observation(
        SimpleGraph(len(label_map), frozenset(edges)),
        "path",
        (("k", len(pobs.paths)),),
        pobs.paths,
        tuple(label_map.items()),
    )


def _subsampled_marginals(mu: dict, n: int) -> list:
    """Laws induced on 1..m for every m <= n by restricting the target law."""
    marginals = [None] * (n + 1)
    marginals[n] = dict(mu)
    for m in range(n - 1, 0, -1):
        out = dict.fromkeys(enumerate_graphs(m), 0.0)
        for g, p in marginals[m + 1].items():
            out[restrict(g, m)] += p
        marginals[m] = out
    return marginals


def universal_embed(mu, p: float, seed: int) -> SimpleGraph:
    """Draw from an explicit target law by embedding into a lazy random graph.

    A population graph with independent edges of probability p is
    materialized on demand.  Positions are chosen sequentially: at each
    stage the desired one-vertex extension is drawn from the target
    law's conditional, and the scan takes the smallest later population
    vertex realizing it.  The returned graph is distributed exactly as
    the target law.
    """
    if not 0.0 < float(p) < 1.0:
        raise ValidationError("p must lie strictly in (0, 1)")
    keys = list(mu.keys())
    if not keys:
        raise ValidationError("empty probability table")
    n = keys[0].n
    if any(g.n != n for g in keys):
        raise ValidationError("probability table mixes graph sizes")
    if n > 5:
        raise RangeError("sequential embedding is limited to n <= 5")
    probs = np.array([float(v) for v in mu.values()])
    if np.any(probs < 0):
        raise ValidationError("probability table has negative entries")
    if abs(probs.sum() - 1.0) > 1e-12:
        raise ValidationError("probability table does not sum to 1")
    target = dict.fromkeys(enumerate_graphs(n), 0.0)
    for g, v in mu.items():
        target[g] += float(v)
    marginals = _subsampled_marginals(target, n)

    rng = _stream(seed, "universal")
    pop_edges = {}

    def pop_edge(a, b):
        key = canonical_pair(a, b)
        value = pop_edges.get(key)
        if value is None:
            value = bool(rng.random() < p)
            pop_edges[key] = value
        return value

    positions = [1]
    current_edges = set()
    for m in range(1, n):
        current = SimpleGraph(m, frozenset(current_edges))
        denom = marginals[m][current]
        options = []
        weights = []
        for g in enumerate_graphs(m + 1):
            if restrict(g, m) == current and marginals[m + 1][g] > 0:
                options.append(g)
                weights.append(marginals[m + 1][g] / denom)
        weights = np.asarray(weights)
        choice = int(np.searchsorted(np.cumsum(weights), rng.random(), side="right"))
        extension = options[min(choice, len(options) - 1)]
        pattern = [extension.has_edge(i, m + 1) for i in range(1, m + 1)]
        found = None
        candidate = positions[-1]
        for _ in range(UNIVERSAL_SCAN_CAP):
            candidate += 1
            if all(pop_edge(positions[i], candidate) == pattern[i] for i in range(m)):
                found = candidate
                break
        if found is None:
            raise ResourceError("scan cap exhausted while extending the embedding")
        for i in range(m):
            if pattern[i]:
                current_edges.add((i + 1, m + 1))
        positions.append(found)
    return SimpleGraph(n, frozenset(current_edges))
