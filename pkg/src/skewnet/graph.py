"""Bipartite compatibility graphs between dispatchers and servers.

A system is described by dispatchers that receive task streams, servers
that hold queues, and a bipartite edge set saying which servers each
dispatcher may use.  Servers are grouped into departure blocks: every
server in a block shares one potential-departure clock, so blocks must
have a single service rate.  Node ids are dense integers assigned at
construction and all set-valued results are returned in ascending id
order, which keeps every algorithm downstream deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal, Mapping, Sequence

import numpy as np

from .errors import SizeCapError, ValidationError

__all__ = [
    "CompatGraph",
    "SimpleGraph",
    "SkewParams",
    "ErgodicityResult",
    "neighborhood_of_dispatcher",
    "neighborhood_of_server",
    "skewed_neighborhood",
    "joint_skewed_neighborhood",
    "check_ergodicity",
    "check_ergodicity_simple",
    "greedy_disjoint_subset",
    "find_skewed_core",
    "to_json_dict",
    "from_json_dict",
    "save_graph",
    "load_graph",
]


@dataclass(frozen=True, eq=False, repr=False)
class CompatGraph:
    """Immutable bipartite compatibility graph with rates and departure blocks.

    Parameters
    ----------
    edges
        Iterable of ``(dispatcher, server)`` pairs.
    arrival_rate
        One nonnegative rate per dispatcher; the length fixes the number of
        dispatchers.  Zero is allowed only as the degenerate no-traffic case.
    service_rate
        One strictly positive rate per server.
    departure_partition
        Blocks of server ids sharing one potential-departure clock.  Defaults
        to singletons.  All servers in a block must have equal service rate.
    server_groups
        Optional label per server (``"central"``, ``"edge"``, ...) used for
        grouped reporting.  Defaults to ``"server"`` for every server.
    meta
        Free-form provenance (generator family, parameters, seed).
    """

    edges: tuple[tuple[int, int], ...]
    arrival_rate: np.ndarray
    service_rate: np.ndarray
    departure_partition: tuple[tuple[int, ...], ...] = ()
    server_groups: tuple[str, ...] = ()
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        arr = np.asarray(self.arrival_rate, dtype=float)
        srv = np.asarray(self.service_rate, dtype=float)
        arr.setflags(write=False)
        srv.setflags(write=False)
        object.__setattr__(self, "arrival_rate", arr)
        object.__setattr__(self, "service_rate", srv)
        if arr.ndim != 1 or srv.ndim != 1:
            raise ValidationError("rate vectors must be one-dimensional")
        n_d, n_s = arr.shape[0], srv.shape[0]
        if n_d == 0 or n_s == 0:
            raise ValidationError("need at least one dispatcher and one server")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValidationError("arrival rates must be finite and >= 0")
        if not np.all(np.isfinite(srv)) or np.any(srv <= 0):
            raise ValidationError("service rates must be finite and > 0")

        edges = tuple(sorted((int(d), int(u)) for d, u in self.edges))
        if len(set(edges)) != len(edges):
            raise ValidationError("duplicate edges")
        object.__setattr__(self, "edges", edges)
        nbr_d: list[list[int]] = [[] for _ in range(n_d)]
        nbr_s: list[list[int]] = [[] for _ in range(n_s)]
        for d, u in edges:
            if not (0 <= d < n_d and 0 <= u < n_s):
                raise ValidationError(f"edge ({d},{u}) out of range")
            nbr_d[d].append(u)
            nbr_s[u].append(d)
        for d in range(n_d):
            if not nbr_d[d]:
                raise ValidationError(f"dispatcher {d} has no compatible server")

        part = self.departure_partition or tuple((u,) for u in range(n_s))
        part = tuple(tuple(int(u) for u in sorted(block)) for block in part)
        seen: set[int] = set()
        for block in part:
            if not block:
                raise ValidationError("empty departure block")
            if any(not (0 <= u < n_s) for u in block):
                raise ValidationError("departure block references unknown server")
            if len({float(srv[u]) for u in block}) != 1:
                raise ValidationError(f"block {block} mixes service rates")
            if seen & set(block):
                raise ValidationError("departure blocks overlap")
            seen.update(block)
        if seen != set(range(n_s)):
            raise ValidationError("departure partition must cover every server")
        object.__setattr__(self, "departure_partition", part)

        groups = self.server_groups or ("server",) * n_s
        if len(groups) != n_s:
            raise ValidationError("server_groups length mismatch")
        object.__setattr__(self, "server_groups", tuple(groups))

        # Cached adjacency, ascending ids throughout.
        object.__setattr__(self, "dispatcher_neighborhoods", tuple(tuple(v) for v in nbr_d))
        object.__setattr__(self, "server_neighborhoods", tuple(tuple(v) for v in nbr_s))
        deg_d = np.array([len(v) for v in nbr_d], dtype=np.int64)
        deg_s = np.array([len(v) for v in nbr_s], dtype=np.int64)
        deg_d.setflags(write=False)
        deg_s.setflags(write=False)
        object.__setattr__(self, "dispatcher_degrees", deg_d)
        object.__setattr__(self, "server_degrees", deg_s)
        # Max service rate a dispatcher can see; used by the skew filters.
        peak = np.array([max(srv[u] for u in nbr_d[d]) for d in range(n_d)])
        peak.setflags(write=False)
        object.__setattr__(self, "_peak_service", peak)
        block_of = np.empty(n_s, dtype=np.int64)
        for i, block in enumerate(part):
            for u in block:
                block_of[u] = i
        block_of.setflags(write=False)
        object.__setattr__(self, "block_of_server", block_of)

    # Populated in __post_init__; declared for type checkers.
    dispatcher_neighborhoods: tuple[tuple[int, ...], ...] = field(init=False, default=())
    server_neighborhoods: tuple[tuple[int, ...], ...] = field(init=False, default=())
    dispatcher_degrees: np.ndarray = field(init=False, default=None)
    server_degrees: np.ndarray = field(init=False, default=None)
    block_of_server: np.ndarray = field(init=False, default=None)

    @property
    def n_dispatchers(self) -> int:
        return self.arrival_rate.shape[0]

    @property
    def n_servers(self) -> int:
        return self.service_rate.shape[0]

    def block_rate(self, block_index: int) -> float:
        return float(self.service_rate[self.departure_partition[block_index][0]])

    def __repr__(self) -> str:
        return (
            f"CompatGraph(D={self.n_dispatchers}, S={self.n_servers}, "
            f"E={len(self.edges)}, blocks={len(self.departure_partition)})"
        )


@dataclass(frozen=True)
class SkewParams:
    """Filter triple for skewed neighborhoods.

    ``max_degree`` caps the dispatcher degree, ``min_arrival_rate`` floors
    the dispatcher arrival rate, and ``max_service_rate`` caps the service
    rate of every server that dispatcher can reach.
    """

    max_degree: int
    min_arrival_rate: float
    max_service_rate: float

    def __post_init__(self) -> None:
        if self.max_degree < 1:
            raise ValidationError("max_degree must be >= 1")
        if not (self.min_arrival_rate >= 0 and math.isfinite(self.min_arrival_rate)):
            raise ValidationError("min_arrival_rate must be finite and >= 0")
        if not (self.max_service_rate > 0 and math.isfinite(self.max_service_rate)):
            raise ValidationError("max_service_rate must be finite and > 0")


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """Undirected graph where each node is both a dispatcher and a server."""

    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    arrival_rate: np.ndarray
    service_rate: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        arr = np.asarray(self.arrival_rate, dtype=float)
        srv = np.asarray(self.service_rate, dtype=float)
        arr.setflags(write=False)
        srv.setflags(write=False)
        object.__setattr__(self, "arrival_rate", arr)
        object.__setattr__(self, "service_rate", srv)
        if arr.shape != (self.n_nodes,) or srv.shape != (self.n_nodes,):
            raise ValidationError("rate vectors must have one entry per node")
        norm = []
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValidationError("self-loops are implicit; do not list them")
            if not (0 <= a < self.n_nodes and 0 <= b < self.n_nodes):
                raise ValidationError(f"edge ({a},{b}) out of range")
            norm.append((min(a, b), max(a, b)))
        if len(set(norm)) != len(norm):
            raise ValidationError("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


@dataclass(frozen=True)
class ErgodicityResult:
    """Outcome of the exhaustive stability check.

    ``status`` is ``"ergodic"`` when every nonempty server subset has
    strictly more service than the arrival it fully absorbs, ``"unstable"``
    when some subset strictly reverses that, and ``"inconclusive"`` when the
    sharpest subset is an exact tie.  ``witness`` carries the offending
    subset for the latter two.
    """

    status: Literal["ergodic", "unstable", "inconclusive"]
    witness: tuple[int, ...] | None = None
    witness_arrival: float | None = None
    witness_service: float | None = None

    @property
    def is_ergodic(self) -> bool:
        return self.status == "ergodic"


def neighborhood_of_dispatcher(g: CompatGraph, d: int) -> tuple[int, ...]:
    """Servers compatible with dispatcher ``d``, ascending."""
    if not 0 <= d < g.n_dispatchers:
        raise ValidationError(f"unknown dispatcher id {d}")
    return g.dispatcher_neighborhoods[d]


def neighborhood_of_server(g: CompatGraph, u: int) -> tuple[int, ...]:
    """Dispatchers compatible with server ``u``, ascending."""
    if not 0 <= u < g.n_servers:
        raise ValidationError(f"unknown server id {u}")
    return g.server_neighborhoods[u]


def skewed_neighborhood(g: CompatGraph, u: int, params: SkewParams) -> tuple[int, ...]:
    """Dispatchers of ``u`` passing all three skew filters.

    A dispatcher qualifies when its degree is at most ``params.max_degree``,
    its arrival rate is at least ``params.min_arrival_rate``, and no server
    it can reach is faster than ``params.max_service_rate``.
    """
    nbrs = neighborhood_of_server(g, u)
    peak = g._peak_service
    return tuple(
        d
        for d in nbrs
        if g.dispatcher_degrees[d] <= params.max_degree
        and g.arrival_rate[d] >= params.min_arrival_rate
        and peak[d] <= params.max_service_rate
    )


def joint_skewed_neighborhood(
    g: CompatGraph, servers: Sequence[int], params: SkewParams
) -> tuple[int, ...]:
    """Intersection of the skewed neighborhoods of ``servers``.

    Empty whenever more than ``params.max_degree`` servers are given, since
    a qualifying dispatcher would need a larger degree than the filter
    allows.  That emptiness is emergent, not special-cased.
    """
    if not servers:
        raise ValidationError("need at least one server")
    out: set[int] | None = None
    for u in servers:
        cur = set(skewed_neighborhood(g, u, params))
        out = cur if out is None else out & cur
        if not out:
            break
    return tuple(sorted(out))


def check_ergodicity(g: CompatGraph, max_servers: int = 20) -> ErgodicityResult:
    """Exhaustive sufficient-condition check over all server subsets.

    For each nonempty subset ``U`` of servers, compares the arrival that can
    only go to ``U`` (dispatchers whose whole neighborhood lies inside)
    against the total service rate of ``U``.  Strict inequality everywhere
    means ergodic; a strict reversal anywhere means unstable, and the first
    such subset in ascending bitmask order is returned as witness; an exact
    tie with no reversal is inconclusive.

    The scan is vectorized over bitmasks and costs ``O(2^S)`` memory, so it
    is capped at ``max_servers`` servers.
    """
    n_s = g.n_servers
    if n_s > max_servers:
        raise SizeCapError(f"{n_s} servers exceeds subset-enumeration cap {max_servers}")
    n_masks = 1 << n_s
    masks = np.arange(n_masks, dtype=np.int64)
    lhs = np.zeros(n_masks)
    for d in range(g.n_dispatchers):
        dmask = 0
        for u in g.dispatcher_neighborhoods[d]:
            dmask |= 1 << u
        lhs[(masks & dmask) == dmask] += g.arrival_rate[d]
    rhs = np.zeros(n_masks)
    for u in range(n_s):
        rhs += g.service_rate[u] * ((masks >> u) & 1)

    def unpack(mask: int) -> tuple[int, ...]:
        return tuple(u for u in range(n_s) if mask >> u & 1)

    def direct(mask: int) -> tuple[float, float]:
        # Same ascending-id accumulation order as the vectorized pass.
        a = 0.0
        for d in range(g.n_dispatchers):
            if all(mask >> u & 1 for u in g.dispatcher_neighborhoods[d]):
                a += float(g.arrival_rate[d])
        s = sum(float(g.service_rate[u]) for u in range(n_s) if mask >> u & 1)
        return a, s

    strict = lhs > rhs
    strict[0] = False
    if strict.any():
        w = int(np.argmax(strict))
        a, s = direct(w)
        return ErgodicityResult("unstable", unpack(w), a, s)
    ties = lhs == rhs
    ties[0] = False
    if ties.any():
        w = int(np.argmax(ties))
        a, s = direct(w)
        return ErgodicityResult("inconclusive", unpack(w), a, s)
    return ErgodicityResult("ergodic")


def check_ergodicity_simple(sg: SimpleGraph) -> bool:
    """Per-node sufficient condition for a self-compatible simple graph."""
    return bool(np.all(sg.arrival_rate < sg.service_rate))


def greedy_disjoint_subset(
    g: CompatGraph, centers: Sequence[int], pool: Sequence[int]
) -> tuple[int, ...]:
    """Greedily keep dispatchers that pairwise share servers only in ``centers``.

    Scans ``pool`` in ascending id order: each kept dispatcher knocks out
    every later one whose common servers with it stick outside the center
    set.  The caller is responsible for ``pool`` actually being a skewed
    neighborhood of ``centers``; that is not re-checked here.
    """
    center_set = set(centers)
    pool_sorted = sorted(set(pool))
    dead: set[int] = set()
    kept: list[int] = []
    nbhd = g.dispatcher_neighborhoods
    for d in pool_sorted:
        if d in dead:
            continue
        kept.append(d)
        nd = set(nbhd[d])
        for e in pool_sorted:
            if e == d or e in dead:
                continue
            if any(u not in center_set for u in nd.intersection(nbhd[e])):
                dead.add(e)
        dead.add(d)
    return tuple(kept)


def find_skewed_core(
    g: CompatGraph,
    seed_server: int,
    params: SkewParams,
    drop_fraction: float = 0.5,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Grow a server core from ``seed_server`` and pick its dispatcher set.

    Starting from the seed, repeatedly adds the server maximizing the joint
    skewed neighborhood of the enlarged core (ties to the smallest server
    id).  Growth stops once the best extension drops the joint size below
    ``drop_fraction`` of the current one, once the core reaches
    ``params.max_degree`` servers, or once the joint set is empty.  Returns
    ``(core_servers, dispatchers)`` where the dispatchers are the greedy
    pairwise-disjoint selection from the final joint neighborhood.
    """
    if not 0 <= seed_server < g.n_servers:
        raise ValidationError(f"unknown server id {seed_server}")
    if not 0 < drop_fraction <= 1:
        raise ValidationError("drop_fraction must lie in (0, 1]")
    skew_sets = {u: set(skewed_neighborhood(g, u, params)) for u in range(g.n_servers)}
    core = [seed_server]
    cur = skew_sets[seed_server]
    while len(core) < params.max_degree and cur:
        best_u = -1
        best: set[int] = set()
        for u in range(g.n_servers):
            if u in core:
                continue
            cand = cur & skew_sets[u]
            if best_u < 0 or len(cand) > len(best):
                best_u, best = u, cand
        if best_u < 0 or len(best) < drop_fraction * len(cur):
            break
        core.append(best_u)
        cur = best
    dispatchers = greedy_disjoint_subset(g, core, sorted(cur))
    return tuple(sorted(core)), dispatchers


# --- JSON wire format ------------------------------------------------------

def to_json_dict(g: CompatGraph) -> dict[str, Any]:
    out: dict[str, Any] = {
        "dispatchers": list(range(g.n_dispatchers)),
        "servers": list(range(g.n_servers)),
        "edges": [list(e) for e in g.edges],
        "arrival_rate": {str(d): float(g.arrival_rate[d]) for d in range(g.n_dispatchers)},
        "service_rate": {str(u): float(g.service_rate[u]) for u in range(g.n_servers)},
        "departure_partition": [list(b) for b in g.departure_partition],
    }
    if any(lbl != "server" for lbl in g.server_groups):
        out["server_groups"] = {str(u): g.server_groups[u] for u in range(g.n_servers)}
    if g.meta:
        out["provenance"] = g.meta
    return out


def from_json_dict(doc: Mapping[str, Any]) -> CompatGraph:
    try:
        dispatchers = list(doc["dispatchers"])
        servers = list(doc["servers"])
        edges = [tuple(e) for e in doc["edges"]]
        arrival = doc["arrival_rate"]
        service = doc["service_rate"]
        partition = tuple(tuple(b) for b in doc["departure_partition"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"graph document missing field: {exc}") from exc
    if dispatchers != list(range(len(dispatchers))):
        raise ValidationError("dispatcher ids must be dense 0..D-1")
    if servers != list(range(len(servers))):
        raise ValidationError("server ids must be dense 0..S-1")
    try:
        arr = np.array([float(arrival[str(d)]) for d in dispatchers])
        srv = np.array([float(service[str(u)]) for u in servers])
    except KeyError as exc:
        raise ValidationError(f"rate map missing id {exc}") from exc
    groups: tuple[str, ...] = ()
    if "server_groups" in doc:
        try:
            groups = tuple(str(doc["server_groups"][str(u)]) for u in servers)
        except KeyError as exc:
            raise ValidationError(f"server_groups missing id {exc}") from exc
    meta = dict(doc.get("provenance", {}))
    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=arr,
        service_rate=srv,
        departure_partition=partition,
        server_groups=groups,
        meta=meta,
    )


def save_graph(g: CompatGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(g), indent=2) + "\n")


def load_graph(path: str | Path) -> CompatGraph:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {path}: {exc}") from exc
    return from_json_dict(doc)
