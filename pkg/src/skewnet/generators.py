"""Graph family constructors.

Every generator stamps provenance (family name, parameters, seed) into the
graph's ``meta`` block so downstream tools can trace where an instance came
from.  Random families draw from ``numpy.random.default_rng`` seeded
explicitly: same seed, same graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import SizeCapError, ValidationError
from .graph import CompatGraph, SimpleGraph

__all__ = [
    "DandelionSpec",
    "CdnSpec",
    "dandelion",
    "remove_central",
    "cdn_network",
    "random_bipartite",
    "er_network",
    "to_bipartite",
    "pod_expand",
]


@dataclass(frozen=True)
class DandelionSpec:
    """Shape of a dandelion system.

    ``n`` dispatchers each own ``boundary`` private servers and additionally
    share all ``central`` servers.  Rates are homogeneous.
    """

    n: int
    boundary: int
    central: int
    arrival: float
    service: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1 or self.boundary < 0 or self.central < 0:
            raise ValidationError("n >= 1, boundary >= 0, central >= 0 required")
        if self.boundary + self.central < 1:
            raise ValidationError("each dispatcher needs at least one server")
        if not (self.arrival >= 0 and math.isfinite(self.arrival)):
            raise ValidationError("arrival rate must be finite and >= 0")
        if not (self.service > 0 and math.isfinite(self.service)):
            raise ValidationError("service rate must be finite and > 0")


def dandelion(spec: DandelionSpec) -> CompatGraph:
    """Build the dandelion graph: shared central servers, private boundaries.

    Server ids go central-first (``0..central-1``), then the boundary block
    of dispatcher ``d`` occupies ``central + d*boundary`` onward.
    """
    n, b, c = spec.n, spec.boundary, spec.central
    edges = []
    for d in range(n):
        for u in range(c):
            edges.append((d, u))
        for j in range(b):
            edges.append((d, c + d * b + j))
    n_servers = c + n * b
    groups = tuple("central" if u < c else "boundary" for u in range(n_servers))
    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=np.full(n, spec.arrival),
        service_rate=np.full(n_servers, spec.service),
        server_groups=groups,
        meta={
            "family": "dandelion",
            "params": {"n": n, "boundary": b, "central": c,
                       "arrival": spec.arrival, "service": spec.service},
        },
    )


def remove_central(g: CompatGraph) -> CompatGraph:
    """Strip the shared central servers from a dandelion instance.

    The result is ``n`` disconnected single-dispatcher systems, re-indexed
    densely.  Only graphs built by :func:`dandelion` carry enough provenance
    to do this safely; anything else is rejected.
    """
    if g.meta.get("family") != "dandelion":
        raise ValidationError("remove_central requires dandelion provenance")
    p = g.meta["params"]
    n, b, c = p["n"], p["boundary"], p["central"]
    if b < 1:
        raise ValidationError("no boundary servers would remain")
    edges = []
    for d in range(n):
        for j in range(b):
            edges.append((d, d * b + j))
    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=np.full(n, p["arrival"]),
        service_rate=np.full(n * b, p["service"]),
        server_groups=("boundary",) * (n * b),
        meta={
            "family": "dandelion-boundary-only",
            "params": {"n": n, "boundary": b,
                       "arrival": p["arrival"], "service": p["service"]},
        },
    )


@dataclass(frozen=True)
class CdnSpec:
    """Content-delivery layout: clustered edge servers plus shared origins.

    Each cluster has ``edge_per_cluster`` edge servers and ``1 +
    edge_per_cluster`` dispatchers: one hot dispatcher compatible with the
    whole cluster and every origin, and one per edge server compatible with
    just that server and every origin.  The hot dispatcher's arrival rate is
    ``hot_multiplier`` times the others'; rates are normalized so total
    arrival equals ``load`` times total edge capacity.
    """

    clusters: int
    edge_per_cluster: int = 10
    origin_count: int = 100
    load: float = 0.9
    hot_multiplier: float = 5.0
    edge_service: float = 1.0
    origin_service: float = 1.0

    def __post_init__(self) -> None:
        if self.clusters < 1 or self.edge_per_cluster < 1 or self.origin_count < 1:
            raise ValidationError("clusters, edge_per_cluster, origin_count must be >= 1")
        if not 0 < self.load:
            raise ValidationError("load must be positive")
        if self.hot_multiplier <= 0:
            raise ValidationError("hot_multiplier must be positive")
        if self.edge_service <= 0 or self.origin_service <= 0:
            raise ValidationError("service rates must be positive")


def cdn_network(spec: CdnSpec) -> CompatGraph:
    """Build the clustered CDN graph described by ``spec``."""
    nc, ne, no = spec.clusters, spec.edge_per_cluster, spec.origin_count
    n_servers = nc * ne + no
    origins = list(range(nc * ne, n_servers))
    # Per-cluster arrival budget: load * cluster edge capacity, split so the
    # hot dispatcher gets hot_multiplier times each single-server dispatcher.
    cluster_budget = spec.load * ne * spec.edge_service
    base = cluster_budget / (spec.hot_multiplier + ne)
    edges = []
    rates = []
    for k in range(nc):
        cluster_servers = list(range(k * ne, (k + 1) * ne))
        hot = len(rates)
        rates.append(spec.hot_multiplier * base)
        for u in cluster_servers + origins:
            edges.append((hot, u))
        for u in cluster_servers:
            d = len(rates)
            rates.append(base)
            edges.append((d, u))
            for o in origins:
                edges.append((d, o))
    service = np.concatenate(
        [np.full(nc * ne, spec.edge_service), np.full(no, spec.origin_service)]
    )
    groups = tuple("edge" if u < nc * ne else "origin" for u in range(n_servers))
    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=np.array(rates),
        service_rate=service,
        server_groups=groups,
        meta={
            "family": "cdn",
            "params": {"clusters": nc, "edge_per_cluster": ne, "origin_count": no,
                       "load": spec.load, "hot_multiplier": spec.hot_multiplier,
                       "edge_service": spec.edge_service,
                       "origin_service": spec.origin_service},
        },
    )


def _sample_sparse_cells(rng: np.random.Generator, n_cells: int, p: float) -> list[int]:
    """Indices of success cells among ``n_cells`` i.i.d. Bernoulli(p) draws.

    Geometric skipping: the gap to the next success is geometric, so the
    cost scales with the number of successes rather than cells.  Matches the
    cell-by-cell law exactly.
    """
    if p <= 0:
        return []
    if p >= 1:
        return list(range(n_cells))
    out = []
    pos = -1
    while True:
        pos += int(rng.geometric(p))
        if pos >= n_cells:
            return out
        out.append(pos)


def random_bipartite(
    n: int,
    b: float,
    seed: int,
    arrival: float = 0.5,
    service: float = 1.0,
    stabilize: bool = False,
) -> CompatGraph:
    """Random n-by-n bipartite graph with edge probability ``b / n``.

    Rates are uniform.  Dispatchers that sample no edge are re-rolled until
    they have one, unless ``stabilize`` is set: then every dispatcher ``d``
    also gets a dedicated server ``n + d``, which guarantees degree >= 1 on
    its own (and makes the system ergodic whenever ``arrival < service``).
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    p = b / n
    if not 0 < p <= 1:
        raise ValidationError(f"edge probability b/n = {p} outside (0, 1]")
    rng = np.random.default_rng(seed)
    edges = []
    degree = [0] * n
    for cell in _sample_sparse_cells(rng, n * n, p):
        d, u = divmod(cell, n)
        edges.append((d, u))
        degree[d] += 1
    if stabilize:
        for d in range(n):
            edges.append((d, n + d))
        n_servers = 2 * n
    else:
        for d in range(n):
            while degree[d] == 0:
                row = _sample_sparse_cells(rng, n, p)
                for u in row:
                    edges.append((d, u))
                degree[d] = len(row)
        n_servers = n
    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=np.full(n, arrival),
        service_rate=np.full(n_servers, service),
        meta={
            "family": "random_bipartite",
            "params": {"n": n, "b": b, "arrival": arrival, "service": service,
                       "stabilize": stabilize},
            "seed": seed,
        },
    )


def er_network(
    n: int,
    seed: int,
    arrival: float = 0.5,
    service: float = 1.0,
) -> SimpleGraph:
    """Sparse Erdos-Renyi simple graph with p = loglog(n) / (2(n-1)).

    Every node is both a dispatcher and a server (self-compatibility is
    implicit).  Needs ``n >= 3`` so the edge probability is positive.
    """
    if n < 3:
        raise ValidationError("n must be >= 3 for a positive edge probability")
    p = math.log(math.log(n)) / (2 * (n - 1))
    if not 0 < p < 1:
        raise ValidationError(f"edge probability {p} outside (0, 1)")
    rng = np.random.default_rng(seed)
    n_pairs = n * (n - 1) // 2
    edges = []
    # Cells come back ascending, so unranking to (a, b) pairs is a single
    # forward walk over the rows a = 0..n-2 (row a holds n-1-a cells).
    a, row_start = 0, 0
    for cell in _sample_sparse_cells(rng, n_pairs, p):
        while cell >= row_start + (n - 1 - a):
            row_start += n - 1 - a
            a += 1
        edges.append((a, a + 1 + (cell - row_start)))
    return SimpleGraph(
        n_nodes=n,
        edges=tuple(edges),
        arrival_rate=np.full(n, arrival),
        service_rate=np.full(n, service),
        meta={
            "family": "er_network",
            "params": {"n": n, "arrival": arrival, "service": service},
            "seed": seed,
        },
    )


def to_bipartite(sg: SimpleGraph) -> CompatGraph:
    """View a simple graph as bipartite: node u may use itself and its neighbors."""
    edges = [(u, u) for u in range(sg.n_nodes)]
    for a, b in sg.edges:
        edges.append((a, b))
        edges.append((b, a))
    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=sg.arrival_rate.copy(),
        service_rate=sg.service_rate.copy(),
        meta={"family": "simple-as-bipartite", "origin": dict(sg.meta)},
    )


def pod_expand(g: CompatGraph, d_sample: int, max_sub: int = 10**6) -> CompatGraph:
    """Split each dispatcher into one sub-dispatcher per size-``d_sample`` subset.

    A dispatcher of degree ``deg >= d_sample`` becomes ``C(deg, d_sample)``
    sub-dispatchers, one per subset of its neighborhood in lexicographic
    order, each carrying an equal share of the arrival rate.  Dispatchers of
    smaller degree are kept whole.  Servers, rates and departure blocks are
    untouched, so sampling d servers then joining the shortest of them on
    the original graph is the same process as shortest-queue-first on the
    expanded one.
    """
    if d_sample < 1:
        raise ValidationError("d_sample must be >= 1")
    total = 0
    for d in range(g.n_dispatchers):
        deg = int(g.dispatcher_degrees[d])
        total += math.comb(deg, d_sample) if deg >= d_sample else 1
    if total > max_sub:
        raise SizeCapError(f"expansion would create {total} sub-dispatchers (cap {max_sub})")
    edges = []
    rates = []
    for d in range(g.n_dispatchers):
        nbrs = g.dispatcher_neighborhoods[d]
        lam = float(g.arrival_rate[d])
        if len(nbrs) < d_sample:
            sub = len(rates)
            rates.append(lam)
            for u in nbrs:
                edges.append((sub, u))
            continue
        n_subsets = math.comb(len(nbrs), d_sample)
        share = lam / n_subsets
        for subset in combinations(nbrs, d_sample):
            sub = len(rates)
            rates.append(share)
            for u in subset:
                edges.append((sub, u))
    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=np.array(rates),
        service_rate=g.service_rate.copy(),
        departure_partition=g.departure_partition,
        server_groups=g.server_groups,
        meta={"family": "pod-expanded", "d_sample": d_sample, "origin": dict(g.meta)},
    )
