"""Graph value types and exact small-graph utilities.

A ``SimpleGraph`` is a vertex-labeled undirected graph on 1..n without
self-loops; edges are stored canonically as (min, max) pairs so equality
is structural.  A ``Multigraph`` is an indexed sequence of unordered
pairs over arbitrary positive vertex names: vertices exist only through
the pairs that mention them.  Both are immutable values, and every
operation returns a new graph, so instances are safe to share.

The module also holds the edge-list text interchange format used by the
command line tools.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .errors import CapacityError, RangeError, ValidationError

ENUMERATION_CAP = 6


def canonical_pair(i: int, j: int) -> tuple[int, int]:
    """Return the unordered pair {i, j} in canonical (min, max) form."""
    if i == j:
        raise ValidationError(f"pair ({i}, {j}) has equal endpoints")
    return (i, j) if i < j else (j, i)


def pairs_in_order(n: int) -> list[tuple[int, int]]:
    """All unordered pairs of 1..n, ordered by larger endpoint first.

    This order makes the pairs of 1..m a prefix of the pairs of 1..n for
    m <= n, which is what lets seeded generation commute with restriction.
    """
    return [(i, j) for j in range(2, n + 1) for i in range(1, j)]


def pair_index(i: int, j: int) -> int:
    """Position of canonical pair (i, j), i < j, in ``pairs_in_order``."""
    return (j - 1) * (j - 2) // 2 + (i - 1)


@dataclass(frozen=True)
class SimpleGraph:
    """Vertex-labeled undirected graph on vertices 1..n, no self-loops."""

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValidationError("vertex count must be a non-negative integer")
        canon = []
        for pair in self.edges:
            i, j = pair
            i, j = canonical_pair(int(i), int(j))
            if not 1 <= i < j <= self.n:
                raise ValidationError(f"edge ({i}, {j}) outside vertex range 1..{self.n}")
            canon.append((i, j))
        object.__setattr__(self, "edges", frozenset(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return canonical_pair(i, j) in self.edges

    def degrees(self) -> dict:
        deg = dict.fromkeys(range(1, self.n + 1), 0)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> dict:
        """Neighbor sets keyed by vertex, including isolated vertices."""
        nbr = {i: set() for i in range(1, self.n + 1)}
        for i, j in self.edges:
            nbr[i].add(j)
            nbr[j].add(i)
        return nbr


@dataclass(frozen=True)
class Multigraph:
    """Edge-indexed sequence of unordered pairs over positive vertex names."""

    pairs: tuple = ()

    def __post_init__(self):
        canon = []
        for pair in self.pairs:
            v, w = pair
            v, w = canonical_pair(int(v), int(w))
            if v < 1:
                raise ValidationError("vertex names must be positive integers")
            canon.append((v, w))
        object.__setattr__(self, "pairs", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.pairs)

    def vertices(self) -> tuple:
        """Distinct vertex names in ascending order."""
        return tuple(sorted({v for pair in self.pairs for v in pair}))

    def degrees(self) -> dict:
        """Degree of each vertex, counting multiplicity."""
        deg = {}
        for v, w in self.pairs:
            deg[v] = deg.get(v, 0) + 1
            deg[w] = deg.get(w, 0) + 1
        return deg


@dataclass(frozen=True)
class Partition:
    """Set partition of 1..n, stored as a block id per label.

    Block ids form a contiguous range 1..B in order of first appearance,
    so equality of partitions is equality of the id sequences.
    """

    block_of: tuple = ()

    def __post_init__(self):
        seen = 0
        for b in self.block_of:
            if not isinstance(b, int):
                raise ValidationError("block ids must be integers")
            if b == seen + 1:
                seen += 1
            elif not 1 <= b <= seen:
                raise ValidationError(
                    "block ids must appear contiguously from 1 in order of first appearance"
                )

    @classmethod
    def from_blocks(cls, blocks) -> "Partition":
        """Build from an iterable of blocks covering 1..n exactly once."""
        assignment = {}
        for bid, block in enumerate(blocks, start=1):
            for label in block:
                if label in assignment:
                    raise ValidationError(f"label {label} assigned to two blocks")
                assignment[label] = bid
        n = len(assignment)
        if sorted(assignment) != list(range(1, n + 1)):
            raise ValidationError("blocks must cover labels 1..n exactly once")
        raw = [assignment[i] for i in range(1, n + 1)]
        return cls(_canonical_block_ids(raw))

    @property
    def n(self) -> int:
        return len(self.block_of)

    @property
    def num_blocks(self) -> int:
        return max(self.block_of, default=0)

    def block(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise RangeError(f"label {i} outside 1..{self.n}")
        return self.block_of[i - 1]

    def same_block(self, i: int, j: int) -> bool:
        return self.block(i) == self.block(j)

    def restrict(self, m: int) -> "Partition":
        if not 0 <= m <= self.n:
            raise RangeError(f"restriction size {m} outside 0..{self.n}")
        return Partition(_canonical_block_ids(self.block_of[:m]))

    def relabel(self, sigma) -> "Partition":
        """Partition with label i moved to sigma(i); ids re-canonicalized."""
        sigma = _check_permutation(sigma, self.n)
        raw = [0] * self.n
        for i in range(1, self.n + 1):
            raw[sigma[i - 1] - 1] = self.block_of[i - 1]
        return Partition(_canonical_block_ids(raw))

    def blocks(self) -> tuple:
        out = [[] for _ in range(self.num_blocks)]
        for label, bid in enumerate(self.block_of, start=1):
            out[bid - 1].append(label)
        return tuple(tuple(b) for b in out)


def _canonical_block_ids(raw) -> tuple:
    relabeled = {}
    out = []
    for b in raw:
        if b not in relabeled:
            relabeled[b] = len(relabeled) + 1
        out.append(relabeled[b])
    return tuple(out)


def all_partitions(n: int) -> tuple:
    """Every partition of 1..n, enumerated by restricted growth strings."""
    if n < 0:
        raise RangeError("n must be non-negative")
    if n == 0:
        return (Partition(()),)
    results = []

    def grow(prefix, maxid):
        if len(prefix) == n:
            results.append(Partition(tuple(prefix)))
            return
        for b in range(1, maxid + 2):
            grow(prefix + [b], max(maxid, b))

    grow([1], 1)
    return tuple(results)


@dataclass(frozen=True)
class DegreeProfile:
    """Counts of vertices per degree, together with the vertex total."""

    counts: tuple = ()
    v: int = 0

    def __post_init__(self):
        counts = tuple(sorted((int(k), int(c)) for k, c in dict(self.counts).items() if c))
        object.__setattr__(self, "counts", counts)
        if sum(c for _, c in counts) != self.v:
            raise ValidationError("degree counts must sum to the vertex total")

    def as_dict(self) -> dict:
        return dict(self.counts)

    def degree_sum(self) -> int:
        return sum(k * c for k, c in self.counts)


def _check_permutation(sigma, n: int) -> tuple:
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise ValidationError(f"not a permutation of 1..{n}: {sigma}")
    return sigma


def restrict(g: SimpleGraph, m: int) -> SimpleGraph:
    """Induced subgraph on vertices 1..m."""
    if not 1 <= m <= g.n:
        raise RangeError(f"restriction size {m} outside 1..{g.n}")
    return SimpleGraph(m, frozenset(e for e in g.edges if e[1] <= m))


def relabel(g: SimpleGraph, sigma) -> SimpleGraph:
    """Graph with vertex i renamed to sigma(i).

    ``sigma`` is a sequence of length n whose k-th entry is the new name
    of vertex k; it must be a bijection of 1..n.
    """
    sigma = _check_permutation(sigma, g.n)
    return SimpleGraph(
        g.n, frozenset(canonical_pair(sigma[i - 1], sigma[j - 1]) for i, j in g.edges)
    )


def relabel_edges(g: Multigraph, sigma) -> Multigraph:
    """Multigraph with the pair at index k moved to index sigma(k)."""
    sigma = _check_permutation(sigma, g.m)
    out = [None] * g.m
    for k, pair in enumerate(g.pairs, start=1):
        out[sigma[k - 1] - 1] = pair
    return Multigraph(tuple(out))


def project(g: Multigraph) -> SimpleGraph:
    """Collapse multiplicities to a simple graph.

    Vertex names are renamed to 1..v in order of first appearance; an
    edge is present when the pair occurs at least once.
    """
    names = {}
    for v, w in g.pairs:
        for x in (v, w):
            if x not in names:
                names[x] = len(names) + 1
    edges = frozenset(canonical_pair(names[v], names[w]) for v, w in g.pairs)
    return SimpleGraph(len(names), edges)


def degree_profile(g) -> DegreeProfile:
    """Degree profile of a simple graph or multigraph (with multiplicity)."""
    deg = g.degrees()
    counts = {}
    for d in deg.values():
        counts[d] = counts.get(d, 0) + 1
    return DegreeProfile(tuple(counts.items()), len(deg))


@lru_cache(maxsize=8)
def enumerate_graphs(n: int) -> tuple:
    """All labeled simple graphs on 1..n, each once, in a fixed order.

    Graph k has edge j exactly when bit j of k is set, with pairs in
    ``pairs_in_order`` order, so the enumeration is deterministic.
    """
    if n < 1:
        raise RangeError("n must be at least 1")
    if n > ENUMERATION_CAP:
        raise CapacityError(f"enumeration capped at n={ENUMERATION_CAP} (got n={n})")
    pairs = pairs_in_order(n)
    graphs = []
    for mask in range(1 << len(pairs)):
        edges = frozenset(pairs[b] for b in range(len(pairs)) if mask >> b & 1)
        graphs.append(SimpleGraph(n, edges))
    return tuple(graphs)


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, frozenset(itertools.combinations(range(1, n + 1), 2)))


def empty_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n)


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, frozenset((i, i + 1) for i in range(1, n)))


def star_graph(n: int) -> SimpleGraph:
    """Star on n vertices with hub 1."""
    return SimpleGraph(n, frozenset((1, i) for i in range(2, n + 1)))


# ---------------------------------------------------------------------------
# Edge-list text interchange format.
#
#   simple n=<n>          multi m=<m>
#   i j                   <eid> <v> <v'>
#
# Lines are 1-based; blank lines and '#' comments are ignored.


def to_text(g) -> str:
    if isinstance(g, SimpleGraph):
        lines = [f"simple n={g.n}"]
        lines += [f"{i} {j}" for i, j in sorted(g.edges)]
    elif isinstance(g, Multigraph):
        lines = [f"multi m={g.m}"]
        lines += [f"{eid} {v} {w}" for eid, (v, w) in enumerate(g.pairs, start=1)]
    else:
        raise ValidationError(f"cannot serialize {type(g).__name__}")
    return "\n".join(lines) + "\n"


def from_text(text: str):
    body = []
    header = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = line
        else:
            body.append(line)
    if header is None:
        raise ValidationError("empty graph file")
    kind, _, size = header.partition(" ")
    key, _, value = size.strip().partition("=")
    if kind == "simple" and key == "n":
        n = int(value)
        edges = set()
        for line in body:
            fields = line.split()
            if len(fields) != 2:
                raise ValidationError(f"bad simple edge line: {line!r}")
            edges.add((int(fields[0]), int(fields[1])))
        return SimpleGraph(n, frozenset(edges))
    if kind == "multi" and key == "m":
        m = int(value)
        pairs = [None] * m
        for line in body:
            fields = line.split()
            if len(fields) != 3:
                raise ValidationError(f"bad multigraph line: {line!r}")
            eid = int(fields[0])
            if not 1 <= eid <= m or pairs[eid - 1] is not None:
                raise ValidationError(f"bad or repeated edge index {eid}")
            pairs[eid - 1] = (int(fields[1]), int(fields[2]))
        if any(p is None for p in pairs):
            raise ValidationError("missing edge indices in multigraph file")
        return Multigraph(tuple(pairs))
    raise ValidationError(f"bad header: {header!r}")


def dump(g, path) -> None:
    Path(path).write_text(to_text(g))


def load(path):
    return from_text(Path(path).read_text())
