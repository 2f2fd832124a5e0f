"""Random graph generators, hop distances, and complete-linkage clustering.

All generators are deterministic for a fixed (spec, seed) pair and return
dense :class:`~graphspec.spectral.GraphShift` objects.  Edge conventions
follow the shift definition: an edge ``src -> dst`` puts a nonzero at
``S[dst, src]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import Disconnected, InvalidSpec
from .spectral import GraphShift, _freeze

FAMILIES = ("erdos_renyi", "stochastic_block", "small_world", "directed_cycle", "path")


@dataclass(frozen=True, eq=False)
class GraphSpec:
    """Family tag plus parameters for one random-graph draw."""

    family: str
    n: int
    params: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class HopDistanceTable:
    """Shortest-path hop counts on the undirected support; inf = unreachable."""

    dist: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dist", _freeze(self.dist))

    @property
    def n(self):
        return self.dist.shape[0]


def _symmetric_from_upper(upper):
    a = np.triu(upper, 1)
    return a + a.T


def _erdos_renyi(n, p, rng):
    mask = rng.random((n, n)) < p
    return _symmetric_from_upper(mask.astype(float))


def _stochastic_block(n, sizes, p_in, p_out, rng):
    labels = np.repeat(np.arange(len(sizes)), sizes)
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, p_in, p_out)
    mask = rng.random((n, n)) < prob
    return _symmetric_from_upper(mask.astype(float))


def _small_world(n, k, q, rng):
    # ring lattice with k/2 neighbors per side, then each edge rewired with
    # probability q (new endpoint uniform, no self-loops or duplicates)
    if k % 2 or not 0 < k < n:
        raise InvalidSpec("small_world degree k must be even and in (0, n)")
    a = np.zeros((n, n))
    for d in range(1, k // 2 + 1):
        for i in range(n):
            a[i, (i + d) % n] = a[(i + d) % n, i] = 1.0
    for d in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + d) % n
            if a[i, j] == 0.0:  # already rewired away
                continue
            if rng.random() < q:
                candidates = np.flatnonzero(a[i] == 0.0)
                candidates = candidates[candidates != i]
                if candidates.size == 0:
                    continue
                new_j = int(rng.choice(candidates))
                a[i, j] = a[j, i] = 0.0
                a[i, new_j] = a[new_j, i] = 1.0
    return a


def _directed_cycle(n):
    a = np.zeros((n, n))
    a[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return a


def _path(n):
    a = np.zeros((n, n))
    idx = np.arange(n - 1)
    a[idx, idx + 1] = a[idx + 1, idx] = 1.0
    return a


def _check_prob(value, name):
    if not 0.0 <= value <= 1.0:
        raise InvalidSpec(f"{name} must lie in [0, 1], got {value}")
    return value


def generate_graph(spec, seed=None, kind="adjacency"):
    """Draw a graph from ``spec`` and return it as a shift operator.

    ``kind`` selects the adjacency matrix or the combinatorial Laplacian
    ``D - A`` (undirected families only).  Identical (spec, seed) pairs
    produce identical matrices.
    """
    if spec.family not in FAMILIES:
        raise InvalidSpec(f"unknown graph family {spec.family!r}")
    if spec.n < 1:
        raise InvalidSpec("node count must be >= 1")
    rng = np.random.default_rng(seed)
    p = spec.params

    if spec.family == "erdos_renyi":
        a = _erdos_renyi(spec.n, _check_prob(p.get("p", 0.5), "p"), rng)
    elif spec.family == "stochastic_block":
        if "sizes" in p:
            sizes = [int(s) for s in p["sizes"]]
        else:
            c = int(p.get("communities", 1))
            if c < 1 or spec.n % c:
                raise InvalidSpec("communities must divide n when sizes are omitted")
            sizes = [spec.n // c] * c
        if sum(sizes) != spec.n:
            raise InvalidSpec("community sizes must sum to n")
        a = _stochastic_block(
            spec.n,
            sizes,
            _check_prob(p.get("p", 0.9), "p"),
            _check_prob(p.get("q", 0.1), "q"),
            rng,
        )
    elif spec.family == "small_world":
        a = _small_world(
            spec.n, int(p.get("k", 10)), _check_prob(p.get("q", 0.1), "q"), rng
        )
    elif spec.family == "directed_cycle":
        a = _directed_cycle(spec.n)
    else:
        a = _path(spec.n)

    if kind == "adjacency":
        return GraphShift(a, "adjacency")
    if kind == "laplacian":
        if spec.family == "directed_cycle":
            raise InvalidSpec("Laplacian shift is only defined for undirected families")
        return GraphShift(np.diag(a.sum(axis=1)) - a, "laplacian")
    raise InvalidSpec(f"unknown shift kind {kind!r}")


def sbm_blocks(sizes):
    """Vertex blocks of a stochastic block model (communities are consecutive)."""
    blocks, start = [], 0
    for s in sizes:
        blocks.append(list(range(start, start + s)))
        start += s
    return blocks


def hop_distances(shift):
    """BFS hop counts on the undirected support of the shift."""
    support = shift.support().astype(float)
    dist = shortest_path(csr_matrix(support), method="D", directed=False, unweighted=True)
    return HopDistanceTable(dist)


def cluster_complete_linkage(table, m):
    """Cut a complete-linkage dendrogram of the hop metric into ``m`` blocks.

    Merge order is deterministic: among pairs at the minimum linkage
    distance, the pair whose (smallest, second smallest) member vertex
    indices are lexicographically least is merged first.  Blocks are
    returned sorted by their smallest vertex.

    Raises ``Disconnected`` when only infinite-distance merges remain.
    """
    n = table.n
    if not 1 <= m <= n:
        raise InvalidSpec(f"block count {m} outside [1, {n}]")
    clusters = [[i] for i in range(n)]
    d = np.array(table.dist, dtype=float)
    np.fill_diagonal(d, np.inf)

    while len(clusters) > m:
        best = np.min(d)
        if not np.isfinite(best):
            raise Disconnected("cannot merge across disconnected components")
        pairs = np.argwhere(d == best)
        pairs = pairs[pairs[:, 0] < pairs[:, 1]]
        keys = [
            tuple(sorted((clusters[i][0], clusters[j][0]))) for i, j in pairs
        ]
        i, j = pairs[min(range(len(keys)), key=keys.__getitem__)]
        clusters[i] = sorted(clusters[i] + clusters[j])
        del clusters[j]
        merged = np.maximum(d[i], d[j])  # complete linkage
        d[i, :] = merged
        d[:, i] = merged
        d = np.delete(np.delete(d, j, axis=0), j, axis=1)
        d[i, i] = np.inf

    return sorted(clusters, key=lambda c: c[0])
