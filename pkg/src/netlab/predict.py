"""Missing-link prediction under explicit sampling mechanisms.

The probability that a population edge is present, given what a
sampling run reported, depends on the mechanism and not only on the
edge list seen.  Two routes compute it: an exact engine that enumerates
the joint space of population graphs and all mechanism randomness
(labelings, draw sequences, chain choices with fallbacks, thinning
masks), and a Monte Carlo engine that simulates runs and keeps those
matching the observation.

Observations are encoded as an ordered tuple of labeled edges.  For
vertex sampling the event is that those edges are present in the
observed graph (nothing is asserted about other pairs); for edge and
chain-snowball sampling it is the exact sequence of drawn or traversed
labeled edges; for the thinned mechanism the labels are population
labels and the event also asserts the target pair is absent from the
thinned graph.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .errors import CapacityError, ConditioningError, RangeError, ValidationError
from .generators import ER, exact_law

MECHANISMS = ("vertex", "edge", "snowball-chain", "thin")
MIN_MC_HITS = 100


def _norm_pair(pair, what: str) -> tuple:
    a, b = (int(x) for x in pair)
    if a == b or a < 1 or b < 1:
        raise ValidationError(f"{what} must be two distinct positive labels")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class PredictiveQuery:
    """A link-prediction question: population prior, mechanism, evidence."""

    n_pop: int
    prior: ER
    mechanism: str
    observed: tuple
    target: tuple
    n: int = 0
    k: int = 0
    rho: float = 3.0

    def __post_init__(self):
        if self.mechanism not in MECHANISMS:
            raise ValidationError(f"mechanism must be one of {MECHANISMS}")
        if self.n_pop < 2:
            raise RangeError("population must have at least 2 vertices")
        if not isinstance(self.prior, ER):
            raise ValidationError("the prediction engines support the homogeneous prior only")
        observed = tuple(_norm_pair(pair, "observed edge") for pair in self.observed)
        target = _norm_pair(self.target, "target")
        object.__setattr__(self, "observed", observed)
        object.__setattr__(self, "target", target)
        if target in observed:
            raise ValidationError("target pair already appears among the observed edges")
        n = self.n or self.n_pop
        k = self.k or len(observed)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "rho", float(self.rho))
        labels = {x for pair in observed for x in pair} | set(target)
        if self.mechanism == "vertex":
            if max(labels) > self.n:
                raise ValidationError("labels exceed the vertex-sample size")
        elif self.mechanism == "edge":
            if self.k != len(observed):
                raise ValidationError("draw count must equal the observed sequence length")
            discovered = {x for pair in observed for x in pair}
            if not set(target) <= discovered:
                raise ValidationError("target labels never discovered by the observed draws")
        elif self.mechanism == "snowball-chain":
            if max(labels) > self.n:
                raise ValidationError("labels exceed the chain length")
        else:
            if max(labels) > self.n_pop:
                raise ValidationError("population labels exceed the population size")
            if self.rho < 1.0:
                raise ValidationError("rho must be at least 1")
        if self.mechanism in ("vertex", "snowball-chain") and self.n > self.n_pop:
            raise RangeError("sample size exceeds the population size")


# ---------------------------------------------------------------------------
# Exact engine: per-mechanism event weights for one population graph.
# Each handler returns (P(event | G), P(event and target edge in G | G)).


def _exact_vertex(g, q):
    perms = itertools.permutations(range(1, q.n_pop + 1), q.n)
    w = 1.0 / math.perm(q.n_pop, q.n)
    p_event = p_both = 0.0
    ta, tb = q.target
    for perm in perms:
        ok = True
        for a, b in q.observed:
            if not g.has_edge(perm[a - 1], perm[b - 1]):
                ok = False
                break
        if ok:
            p_event += w
            if g.has_edge(perm[ta - 1], perm[tb - 1]):
                p_both += w
    return p_event, p_both


def _exact_edge(g, q):
    edges = sorted(g.edges)
    e = len(edges)
    if e == 0:
        return 0.0, 0.0
    totals = [0.0, 0.0]

    def descend(depth, label_of, prob):
        if depth == q.k:
            inv = {lab: pop for pop, lab in label_of.items()}
            totals[0] += prob
            if g.has_edge(inv[q.target[0]], inv[q.target[1]]):
                totals[1] += prob
            return
        for u, v in edges:
            base = prob / e
            new = [x for x in (u, v) if x not in label_of]
            orders = [new] if len(new) < 2 else [new, new[::-1]]
            for order in orders:
                labeled = dict(label_of)
                for x in order:
                    labeled[x] = len(labeled) + 1
                la, lb = labeled[u], labeled[v]
                pair = (la, lb) if la < lb else (lb, la)
                if pair == q.observed[depth]:
                    descend(depth + 1, labeled, base / len(orders))

    descend(0, {}, 1.0)
    return totals


def _exact_snowball(g, q):
    nbr = g.adjacency()
    totals = [0.0, 0.0]
    everyone = set(range(1, q.n_pop + 1))

    def descend(chain, visited, traversed, prob):
        if len(chain) == q.n:
            if tuple(traversed) == q.observed:
                totals[0] += prob
                u, v = chain[q.target[0] - 1], chain[q.target[1] - 1]
                if g.has_edge(u, v):
                    totals[1] += prob
            return
        options = sorted(nbr[chain[-1]] - visited)
        if options:
            step = (len(chain), len(chain) + 1)
            for nxt in options:
                descend(
                    chain + [nxt], visited | {nxt}, traversed + [step], prob / len(options)
                )
        else:
            rest = sorted(everyone - visited)
            for nxt in rest:
                descend(chain + [nxt], visited | {nxt}, traversed, prob / len(rest))

    for start in range(1, q.n_pop + 1):
        descend([start], {start}, [], 1.0 / q.n_pop)
    return totals


def _exact_thin(g, q):
    keep = 1.0 / q.rho
    p_event = 1.0
    for pair in q.observed:
        if pair not in g.edges:
            return 0.0, 0.0
        p_event *= keep
    target_in = q.target in g.edges
    if target_in:
        p_event *= 1.0 - keep
    return p_event, p_event if target_in else 0.0


_EXACT = {
    "vertex": _exact_vertex,
    "edge": _exact_edge,
    "snowball-chain": _exact_snowball,
    "thin": _exact_thin,
}


def predict_exact(q: PredictiveQuery) -> float:
    """Exact conditional probability of the target edge in the population.

    Enumerates every population graph weighted by the prior and every
    outcome of the mechanism's internal randomness.  A degenerate empty
    prior returns 0 directly; any other zero-probability observation is
    a conditioning error.
    """
    if q.n_pop > 4:
        raise CapacityError("exact engine enumerates populations up to 4 vertices")
    handler = _EXACT[q.mechanism]
    law = exact_law(q.prior, q.n_pop)
    numer = denom = 0.0
    for g, w in law.items():
        if w == 0.0:
            continue
        p_event, p_both = handler(g, q)
        denom += w * p_event
        numer += w * p_both
    if denom == 0.0:
        if q.prior.p == 0.0:
            return 0.0
        raise ConditioningError("the observation event has probability zero")
    return numer / denom


# ---------------------------------------------------------------------------
# Monte Carlo engine: rejection sampling over simulated runs.


@dataclass(frozen=True)
class MCEstimate:
    estimate: float | None
    se: float | None
    hits: int
    reps: int

    @property
    def abstained(self) -> bool:
        return self.estimate is None


def _sim_vertex(rng, q, present, edge_set, pop_ids):
    perm = rng.sample(pop_ids, q.n)
    for a, b in q.observed:
        u, v = perm[a - 1], perm[b - 1]
        if ((u, v) if u < v else (v, u)) not in edge_set:
            return False, False
    u, v = perm[q.target[0] - 1], perm[q.target[1] - 1]
    return True, ((u, v) if u < v else (v, u)) in edge_set


def _sim_edge(rng, q, present, edge_set, pop_ids):
    e = len(present)
    if e == 0:
        return False, False
    label_of = {}
    for expected in q.observed:
        u, v = present[rng.randrange(e)]
        new = [x for x in (u, v) if x not in label_of]
        if len(new) == 2 and rng.random() < 0.5:
            new.reverse()
        for x in new:
            label_of[x] = len(label_of) + 1
        la, lb = label_of[u], label_of[v]
        if ((la, lb) if la < lb else (lb, la)) != expected:
            return False, False
    inv = {lab: pop for pop, lab in label_of.items()}
    u, v = inv[q.target[0]], inv[q.target[1]]
    return True, ((u, v) if u < v else (v, u)) in edge_set


def _sim_snowball(rng, q, present, edge_set, pop_ids):
    nbr = {v: [] for v in pop_ids}
    for u, v in present:
        nbr[u].append(v)
        nbr[v].append(u)
    chain = [pop_ids[rng.randrange(q.n_pop)]]
    visited = {chain[0]}
    traversed = []
    for _ in range(q.n - 1):
        options = sorted(w for w in nbr[chain[-1]] if w not in visited)
        if options:
            nxt = options[rng.randrange(len(options))]
            traversed.append((len(chain), len(chain) + 1))
        else:
            rest = [v for v in pop_ids if v not in visited]
            nxt = rest[rng.randrange(len(rest))]
        chain.append(nxt)
        visited.add(nxt)
    if tuple(traversed) != q.observed:
        return False, False
    u, v = chain[q.target[0] - 1], chain[q.target[1] - 1]
    return True, ((u, v) if u < v else (v, u)) in edge_set


def _sim_thin(rng, q, present, edge_set, pop_ids):
    keep = 1.0 / q.rho
    for pair in q.observed:
        if pair not in edge_set or rng.random() >= keep:
            return False, False
    target_in = q.target in edge_set
    if target_in and rng.random() < keep:
        return False, False
    return True, target_in


_SIMULATORS = {
    "vertex": _sim_vertex,
    "edge": _sim_edge,
    "snowball-chain": _sim_snowball,
    "thin": _sim_thin,
}


def predict_mc(q: PredictiveQuery, reps: int, seed: int) -> MCEstimate:
    """Rejection-sampling estimate of the same conditional probability.

    Simulates (population, sampling run) pairs, keeps runs whose
    canonical observation encoding matches the query, and reports the
    conditional frequency of the target edge with its binomial standard
    error.  Fewer than 100 matching runs yields an abstention, not an
    estimate.
    """
    if not isinstance(seed, int) or seed < 0:
        raise ValidationError("seed must be a non-negative integer")
    if reps < 1:
        raise RangeError("reps must be positive")
    rng = random.Random(seed)
    p = q.prior.p
    pop_ids = list(range(1, q.n_pop + 1))
    pop_pairs = list(itertools.combinations(pop_ids, 2))
    simulate = _SIMULATORS[q.mechanism]
    hits = target_hits = 0
    rand = rng.random
    for _ in range(reps):
        present = [pair for pair in pop_pairs if rand() < p]
        edge_set = set(present)
        matched, target_in = simulate(rng, q, present, edge_set, pop_ids)
        if matched:
            hits += 1
            if target_in:
                target_hits += 1
    if hits < MIN_MC_HITS:
        return MCEstimate(None, None, hits, reps)
    estimate = target_hits / hits
    se = math.sqrt(estimate * (1.0 - estimate) / hits)
    return MCEstimate(estimate, se, hits, reps)
