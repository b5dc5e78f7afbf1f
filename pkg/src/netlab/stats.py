"""Network statistics and asymptotic-property diagnostics.

Sparsity and power laws are asymptotic statements, so this module
reports finite-size traces and trend or fit diagnostics rather than
boolean verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FitError, RangeError, ValidationError
from .generators import ER, ERGM, Graphon, generate
from .graphs import DegreeProfile, Multigraph, SimpleGraph


def edge_density(g: SimpleGraph) -> float:
    """Fraction of present edges, 2e / (v(v-1))."""
    if g.n < 2:
        raise RangeError("edge density is undefined below 2 vertices")
    return 2.0 * g.edge_count / (g.n * (g.n - 1))


@dataclass(frozen=True)
class SparsityTrace:
    sizes: tuple
    densities: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValidationError("sizes must be strictly increasing")
        if any(not 0.0 <= d <= 1.0 for d in self.densities):
            raise ValidationError("densities must lie in [0, 1]")


def sparsity_trace(g, sizes) -> SparsityTrace:
    """Edge densities along a growing prefix of the graph.

    For a vertex-labeled graph the prefix is the restriction to 1..s;
    for an edge-labeled multigraph it is the projection of the first s
    pairs to a simple graph.
    """
    sizes = tuple(int(s) for s in sizes)
    if isinstance(g, SimpleGraph):
        if sizes and sizes[-1] > g.n:
            raise RangeError("trace size exceeds the vertex count")
        maxj = np.sort(np.array([j for _, j in g.edges], dtype=np.int64))
        densities = []
        for s in sizes:
            if s < 2:
                raise RangeError("trace sizes must be at least 2")
            e = int(np.searchsorted(maxj, s, side="right"))
            densities.append(2.0 * e / (s * (s - 1)))
        return SparsityTrace(sizes, tuple(densities))
    if isinstance(g, Multigraph):
        if sizes and sizes[-1] > g.m:
            raise RangeError("trace size exceeds the edge count")
        arr = np.asarray(g.pairs, dtype=np.int64)
        densities = []
        for s in sizes:
            seg = arr[:s]
            v = len(np.unique(seg))
            if v < 2:
                raise RangeError("projected prefix has fewer than 2 vertices")
            e = len(np.unique(seg, axis=0))
            densities.append(2.0 * e / (v * (v - 1)))
        return SparsityTrace(sizes, tuple(densities))
    raise ValidationError(f"cannot trace {type(g).__name__}")


@dataclass(frozen=True)
class PowerLawFit:
    gamma_hat: float
    k_range: tuple
    r2: float


def fit_power_law(profile: DegreeProfile, k_min: int = 2) -> PowerLawFit:
    """Least-squares slope of log degree fractions against log degree.

    The fitted range runs from ``k_min`` to the largest degree whose
    count is at least 5, which keeps sparse tail counts from dominating.
    The slowly varying factor is treated as constant; a poor ``r2``
    flags profiles that are not power laws.
    """
    counts = profile.as_dict()
    supported = sorted(k for k, c in counts.items() if k >= k_min and c > 0)
    if len(supported) < 5:
        raise FitError("need at least 5 distinct degrees at or above k_min")
    tail = [k for k in supported if counts[k] >= 5]
    if not tail:
        raise FitError("no degree at or above k_min has count >= 5")
    k_max = max(tail)
    ks = np.array([k for k in supported if k <= k_max], dtype=float)
    if len(ks) < 2:
        raise FitError("fitted range collapsed to fewer than 2 points")
    ys = np.log(np.array([counts[int(k)] for k in ks], dtype=float) / profile.v)
    xs = np.log(ks)
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    gamma_hat = -float(slope)
    if gamma_hat <= 0:
        raise FitError("degree fractions do not decay; no power-law exponent")
    return PowerLawFit(gamma_hat, (int(k_min), int(k_max)), r2)


@dataclass(frozen=True)
class MartingaleReport:
    sizes: tuple
    means: tuple
    ses: tuple
    passed: bool


def density_martingale_check(model, sizes, reps: int, seed: int) -> MartingaleReport:
    """Check that mean edge density of restrictions is constant in size.

    For an exchangeable generator the density of the restriction to
    1..s has the same expectation at every s, so sample means at all
    requested sizes must agree within three combined standard errors.
    Each replicate is drawn once at the largest size and restricted,
    which only makes the criterion conservative.
    """
    if not isinstance(model, (ER, Graphon, ERGM)):
        raise ValidationError(
            "constant-mean check applies only to exchangeable families "
            "(fixed-partition blockmodels are excluded)"
        )
    sizes = tuple(sorted(int(s) for s in sizes))
    if len(set(sizes)) != len(sizes) or sizes[0] < 2:
        raise ValidationError("sizes must be distinct and at least 2")
    n_max = sizes[-1]
    if isinstance(model, ERGM) and model.n < n_max:
        raise ValidationError("exact exponential-family model is smaller than max size")
    from .generators import child_seeds

    seeds = child_seeds(seed, "martingale", reps)
    samples = np.empty((reps, len(sizes)))
    for r, s in enumerate(seeds):
        g = generate(model, s, n=None if isinstance(model, ERGM) else n_max)
        maxj = np.sort(np.array([j for _, j in g.edges], dtype=np.int64))
        for c, size in enumerate(sizes):
            e = int(np.searchsorted(maxj, size, side="right"))
            samples[r, c] = 2.0 * e / (size * (size - 1))
    means = samples.mean(axis=0)
    ses = samples.std(axis=0, ddof=1) / np.sqrt(reps) if reps > 1 else np.zeros(len(sizes))
    passed = True
    for a in range(len(sizes)):
        for b in range(a + 1, len(sizes)):
            if abs(means[a] - means[b]) > 3.0 * np.hypot(ses[a], ses[b]):
                passed = False
    return MartingaleReport(sizes, tuple(means.tolist()), tuple(ses.tolist()), passed)
