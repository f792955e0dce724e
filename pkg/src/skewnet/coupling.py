"""Monotone graph transforms and coupled two-system simulation.

Each transform makes a compatibility graph lazier in a provable sense: the
transformed system, run under just-the-right coupling, never has shorter
queues on tracked servers than the original.  Chaining transforms reduces a
general graph around a skewed core to a disjoint union of dandelion
components, which is how per-server lower bounds on stationary occupancy
are obtained without solving the original chain.

The coupled simulator shares randomness between the two systems:

* arrivals are drawn at the original rates and thinned down to the
  transformed rates with an independent mark per event,
* departures are drawn at the transformed (higher) block rates and thinned
  down to the original rates,
* each arrival consumes exactly two selection uniforms, which jointly drive
  both dispatch decisions so the queue-length ordering survives ties.

Every event then checks the tracked dominance pairs, so a single run either
certifies the ordering pathwise or pins the first violation.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass

import numpy as np

from .errors import CouplingIntegrityError, ValidationError
from .graph import CompatGraph, SkewParams
from .sim import (
    OccupancyMetrics,
    SimConfig,
    _ExpStream,
    _MetricsAccumulator,
    _UniStream,
    _resolve_x0,
    group_statistics,
)

__all__ = [
    "EdgeSimplify",
    "AddServer",
    "DecreaseArrival",
    "IncreaseService",
    "TransformOp",
    "ServerMap",
    "DominanceReport",
    "DandelionComponent",
    "apply_transform",
    "apply_pipeline",
    "ops_to_json",
    "ops_from_json",
    "joint_dispatch",
    "coupled_simulate",
    "dandelion_reduction",
]


@dataclass(frozen=True)
class EdgeSimplify:
    """Replace edge (dispatcher, server) with an edge to a fresh server.

    The fresh server gets its own queue but joins ``server``'s departure
    block, so it ticks on the same clock at the same rate.  ``new_server``
    defaults to the next dense id; passing it explicitly is only useful
    when serializing pipelines.
    """

    dispatcher: int
    server: int
    new_server: int | None = None


@dataclass(frozen=True)
class AddServer:
    """Attach a fresh server with its own clock to one dispatcher."""

    dispatcher: int
    service_rate: float
    new_server: int | None = None


@dataclass(frozen=True)
class DecreaseArrival:
    """Lower one dispatcher's arrival rate."""

    dispatcher: int
    new_rate: float


@dataclass(frozen=True)
class IncreaseService:
    """Raise the service rate of one server's whole departure block."""

    server: int
    new_rate: float


TransformOp = EdgeSimplify | AddServer | DecreaseArrival | IncreaseService

_OP_TAGS: dict[type, str] = {
    EdgeSimplify: "edge_simplify",
    AddServer: "add_server",
    DecreaseArrival: "decrease_arrival",
    IncreaseService: "increase_service",
}
_TAG_TYPES = {tag: cls for cls, tag in _OP_TAGS.items()}


def ops_to_json(ops: list[TransformOp]) -> str:
    records = []
    for op in ops:
        rec = {"op": _OP_TAGS[type(op)]}
        rec.update(op.__dict__)
        records.append(rec)
    return json.dumps(records, indent=2)


def ops_from_json(text: str) -> list[TransformOp]:
    try:
        records = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"bad transform JSON: {e}") from None
    if not isinstance(records, list):
        raise ValidationError("transform JSON must be an array of records")
    out: list[TransformOp] = []
    for rec in records:
        if not isinstance(rec, dict) or "op" not in rec:
            raise ValidationError(f"bad transform record: {rec!r}")
        tag = rec["op"]
        if tag not in _TAG_TYPES:
            raise ValidationError(f"unknown transform op {tag!r}")
        kwargs = {k: v for k, v in rec.items() if k != "op"}
        try:
            out.append(_TAG_TYPES[tag](**kwargs))
        except TypeError as e:
            raise ValidationError(f"bad fields for {tag}: {e}") from None
    return out


@dataclass(frozen=True)
class ServerMap:
    """How servers of the original graph relate to the transformed one.

    Original servers keep their ids.  ``phi[d]`` maps each original
    neighbor of dispatcher ``d`` to the transformed server standing in for
    it (itself unless an ``EdgeSimplify`` redirected the edge, possibly
    through a chain of fresh servers).  Departure blocks keep their index:
    block ``i`` of the transformed graph extends block ``i`` of the
    original, with fresh blocks appended after.
    """

    n_original_servers: int
    n_servers: int
    phi: tuple[dict[int, int], ...]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Tracked dominance pairs (original server, transformed server).

        Under the coupled run, the original queue at the first coordinate
        stays >= the transformed queue at the second.  Every original
        server dominates itself; each redirected edge adds the pair tying
        its source to its final stand-in.
        """
        out = {(w, w) for w in range(self.n_original_servers)}
        for phi_d in self.phi:
            for w, img in phi_d.items():
                if img != w:
                    out.add((w, img))
        return tuple(sorted(out))


def _apply_one(g: CompatGraph, op: TransformOp, phi: list[dict[int, int]]) -> CompatGraph:
    """Apply one op to ``g``, updating the composed ``phi`` in place."""
    edges = list(g.edges)
    arrival = list(g.arrival_rate)
    service = list(g.service_rate)
    blocks = [list(b) for b in g.departure_partition]
    groups = list(g.server_groups)
    n_s = g.n_servers

    if isinstance(op, EdgeSimplify):
        d, u = op.dispatcher, op.server
        if not (0 <= d < g.n_dispatchers):
            raise ValidationError(f"no dispatcher {d}")
        if (d, u) not in set(edges):
            raise ValidationError(f"edge ({d}, {u}) not in graph")
        v = n_s if op.new_server is None else op.new_server
        if v != n_s:
            raise ValidationError(
                f"new_server must be the next dense id {n_s}, got {v}")
        edges.remove((d, u))
        edges.append((d, v))
        service.append(service[u])
        groups.append(groups[u])
        blocks[g.block_of_server[u]].append(v)
        # Compose: any original neighbor of d currently standing on u moves
        # to v.  An edge created by AddServer has no original source; then
        # phi is untouched.
        for w, img in phi[d].items():
            if img == u:
                phi[d][w] = v
    elif isinstance(op, AddServer):
        d = op.dispatcher
        if not (0 <= d < g.n_dispatchers):
            raise ValidationError(f"no dispatcher {d}")
        if not (op.service_rate > 0):
            raise ValidationError("added server needs a positive service rate")
        v = n_s if op.new_server is None else op.new_server
        if v != n_s:
            raise ValidationError(
                f"new_server must be the next dense id {n_s}, got {v}")
        edges.append((d, v))
        service.append(float(op.service_rate))
        groups.append("added")
        blocks.append([v])
    elif isinstance(op, DecreaseArrival):
        d = op.dispatcher
        if not (0 <= d < g.n_dispatchers):
            raise ValidationError(f"no dispatcher {d}")
        if not (0 <= op.new_rate <= arrival[d]):
            raise ValidationError(
                f"new rate {op.new_rate} must lie in [0, {arrival[d]}]")
        arrival[d] = float(op.new_rate)
    elif isinstance(op, IncreaseService):
        u = op.server
        if not (0 <= u < n_s):
            raise ValidationError(f"no server {u}")
        if not (op.new_rate >= service[u]):
            raise ValidationError(
                f"new rate {op.new_rate} below current {service[u]}")
        for w in blocks[g.block_of_server[u]]:
            service[w] = float(op.new_rate)
    else:
        raise ValidationError(f"unknown transform op {op!r}")

    return CompatGraph(
        edges=tuple(edges),
        arrival_rate=tuple(arrival),
        service_rate=tuple(service),
        departure_partition=tuple(tuple(b) for b in blocks),
        server_groups=tuple(groups),
        meta=dict(g.meta),
    )


def apply_pipeline(g: CompatGraph, ops: list[TransformOp]) -> tuple[CompatGraph, ServerMap]:
    """Apply a sequence of transforms, composing the server map."""
    phi = [{w: w for w in g.dispatcher_neighborhoods[d]} for d in range(g.n_dispatchers)]
    cur = g
    for op in ops:
        cur = _apply_one(cur, op, phi)
    # Laziness invariants of the whole pipeline.
    if cur.n_dispatchers != g.n_dispatchers:
        raise CouplingIntegrityError("pipeline changed the dispatcher set")
    if any(cur.arrival_rate[d] > g.arrival_rate[d] for d in range(g.n_dispatchers)):
        raise CouplingIntegrityError("pipeline raised an arrival rate")
    if any(cur.service_rate[u] < g.service_rate[u] for u in range(g.n_servers)):
        raise CouplingIntegrityError("pipeline lowered a service rate")
    return cur, ServerMap(
        n_original_servers=g.n_servers,
        n_servers=cur.n_servers,
        phi=tuple(phi),
    )


def apply_transform(g: CompatGraph, op: TransformOp) -> tuple[CompatGraph, ServerMap]:
    """Apply a single transform; see ``apply_pipeline`` for sequences."""
    return apply_pipeline(g, [op])


def joint_dispatch(
    cands1: list[int],
    cands2: list[int],
    x1: list[int],
    x2: list[int],
    phi: dict[int, int],
    u_a: float,
    u_b: float,
) -> tuple[int, int]:
    """Pick coupled JSQ destinations for one arrival in both systems.

    ``cands1``/``cands2`` are the shortest-queue candidate sets (system 1 /
    system 2), ``phi`` the injection from system 1's neighborhood into
    system 2's.  Requires x1(w) >= x2(phi(w)) on every key of ``phi``; the
    choices then preserve that ordering after both queues are incremented.
    Consumes exactly the two uniforms supplied.
    """
    for w, img in phi.items():
        if x1[w] < x2[img]:
            raise CouplingIntegrityError(
                f"queue ordering broken before dispatch: x1[{w}]={x1[w]} < x2[{img}]={x2[img]}")
    m1 = x1[cands1[0]]
    m2 = x2[cands2[0]]
    if m1 < m2:
        # phi maps cands1's minimizer to a server with no more work, so the
        # system-2 minimum cannot exceed the system-1 minimum.
        raise CouplingIntegrityError(
            f"candidate minima inverted: min1={m1} < min2={m2}")
    if m1 > m2:
        # Strict gap: the two choices cannot collide in a harmful way, so
        # independent picks are fine.
        return cands1[int(u_a * len(cands1))], cands2[int(u_b * len(cands2))]
    # Equal minima: land system 2 first, then steer system 1 onto the
    # matching server when the pick lies in phi's image of cands1.
    c2 = cands2[int(u_a * len(cands2))]
    inverse = {}
    for w in cands1:
        img = phi.get(w, w)
        inverse[img] = w
    if c2 in inverse:
        return inverse[c2], c2
    return cands1[int(u_b * len(cands1))], c2


@dataclass(frozen=True)
class DominanceReport:
    """Outcome of per-event dominance checking on a coupled run."""

    pairs: tuple[tuple[int, int], ...]
    events: int
    violations: int
    first_violation: dict | None = None

    @property
    def clean(self) -> bool:
        return self.violations == 0


def coupled_simulate(
    g1: CompatGraph,
    ops: list[TransformOp],
    cfg: SimConfig,
    x0=None,
) -> tuple[OccupancyMetrics, OccupancyMetrics, DominanceReport]:
    """Run the original and transformed systems on shared randomness.

    System 2 is ``apply_pipeline(g1, ops)``.  Both run under JSQ; arrivals
    and departures are thinned as described in the module docstring; after
    every event each tracked pair (w, m) is checked for x1(w) >= x2(m).
    Fresh servers start empty, original servers start from ``x0`` in both
    systems.
    """
    if cfg.sample_every is not None or cfg.min_track_group is not None:
        raise ValidationError("coupled runs do not support sampling or min tracking")
    g2, smap = apply_pipeline(g1, ops)
    n_d = g1.n_dispatchers
    n_s1, n_s2 = g1.n_servers, g2.n_servers
    blocks1, blocks2 = g1.departure_partition, g2.departure_partition
    n_b1, n_b2 = len(blocks1), len(blocks2)

    horizon = float(cfg.horizon)
    warm = cfg.warmup_fraction * horizon

    # Stream layout: selection, per-dispatcher arrival clocks, per-dispatcher
    # thinning marks, per-block departure clocks (system 2 rates), per-block
    # thinning marks.  Marks are consumed only when the thinning is strict,
    # so a no-op pipeline replays system 1's exact path.
    seeds = np.random.SeedSequence(cfg.seed).spawn(1 + 2 * n_d + 2 * n_b2)
    sel = _UniStream(np.random.Generator(np.random.PCG64(seeds[0])))
    arr_streams: list[_ExpStream | None] = []
    arr_marks: list[_UniStream] = []
    for d in range(n_d):
        rate = float(g1.arrival_rate[d])
        arr_streams.append(
            _ExpStream(np.random.Generator(np.random.PCG64(seeds[1 + d])), rate)
            if rate > 0 else None)
        arr_marks.append(_UniStream(np.random.Generator(np.random.PCG64(seeds[1 + n_d + d]))))
    blk_streams: list[_ExpStream] = []
    blk_marks: list[_UniStream] = []
    for i in range(n_b2):
        blk_streams.append(_ExpStream(
            np.random.Generator(np.random.PCG64(seeds[1 + 2 * n_d + i])),
            g2.block_rate(i)))
        blk_marks.append(_UniStream(
            np.random.Generator(np.random.PCG64(seeds[1 + 2 * n_d + n_b2 + i]))))

    arr_accept = [float(g2.arrival_rate[d]) / float(g1.arrival_rate[d])
                  if g1.arrival_rate[d] > 0 else 1.0
                  for d in range(n_d)]
    blk_accept = [g1.block_rate(i) / g2.block_rate(i) if i < n_b1 else 0.0
                  for i in range(n_b2)]

    x1 = _resolve_x0(g1, x0)
    x2 = x1 + [0] * (n_s2 - n_s1)
    x0_arr1 = np.array(x1, dtype=np.int64)
    x0_arr2 = np.array(x2, dtype=np.int64)

    neigh1 = g1.dispatcher_neighborhoods
    neigh2 = g2.dispatcher_neighborhoods
    pairs = smap.pairs()

    acc1 = _MetricsAccumulator(n_s1, warm, horizon, cfg.n_batches, tuple(cfg.tail_ks))
    acc2 = _MetricsAccumulator(n_s2, warm, horizon, cfg.n_batches, tuple(cfg.tail_ks))

    heap: list[tuple[float, int]] = []
    for d in range(n_d):
        st = arr_streams[d]
        if st is not None:
            heap.append((st.next(), d))
    for i in range(n_b2):
        heap.append((blk_streams[i].next(), n_d + i))
    heapq.heapify(heap)

    events = 0
    arrivals1 = arrivals2 = departures1 = departures2 = 0
    violations = 0
    first_violation: dict | None = None
    max_events = cfg.max_events
    partial = False
    t_end = horizon

    def argmins(nb: tuple[int, ...], x: list[int]) -> list[int]:
        best = nb[0]
        m = x[best]
        out = [best]
        for u in nb[1:]:
            v = x[u]
            if v < m:
                m = v
                out = [u]
            elif v == m:
                out.append(u)
        return out

    while heap:
        t, src = heapq.heappop(heap)
        if t > horizon:
            break
        events += 1
        if src < n_d:
            d = src
            u_a = sel.next()
            u_b = sel.next()
            p = arr_accept[d]
            accept = p >= 1.0 or (p > 0.0 and arr_marks[d].next() < p)
            cands1 = argmins(neigh1[d], x1)
            if accept:
                cands2 = argmins(neigh2[d], x2)
                c1, c2 = joint_dispatch(cands1, cands2, x1, x2, smap.phi[d], u_a, u_b)
                acc1.flush(c1, t, x1[c1])
                x1[c1] += 1
                acc2.flush(c2, t, x2[c2])
                x2[c2] += 1
                arrivals1 += 1
                arrivals2 += 1
            else:
                c1 = cands1[int(u_a * len(cands1))]
                acc1.flush(c1, t, x1[c1])
                x1[c1] += 1
                arrivals1 += 1
            heapq.heappush(heap, (t + arr_streams[d].next(), src))
        else:
            bi = src - n_d
            p = blk_accept[bi]
            accept = p >= 1.0 or (p > 0.0 and blk_marks[bi].next() < p)
            for u in blocks2[bi]:
                if x2[u] > 0:
                    acc2.flush(u, t, x2[u])
                    x2[u] -= 1
                    departures2 += 1
            if accept:
                for u in blocks1[bi]:
                    if x1[u] > 0:
                        acc1.flush(u, t, x1[u])
                        x1[u] -= 1
                        departures1 += 1
            heapq.heappush(heap, (t + blk_streams[bi].next(), src))
        for w, m in pairs:
            if x1[w] < x2[m]:
                violations += 1
                if first_violation is None:
                    first_violation = {
                        "event": events, "time": t, "pair": (w, m),
                        "x1": x1[w], "x2": x2[m],
                    }
        if events == max_events:
            partial = True
            t_end = t
            break

    mean1, tail1, batch1 = acc1.finalize(t_end, x1)
    mean2, tail2, batch2 = acc2.finalize(t_end, x2)

    m1 = OccupancyMetrics(
        mean_queue=mean1, tail_freq=tail1, batch_means=batch1,
        group_stats=group_statistics(g1.server_groups, mean1),
        events=events, sim_time=t_end, arrivals=arrivals1,
        departures=departures1, initial_state=x0_arr1,
        final_state=np.array(x1, dtype=np.int64), partial=partial)
    m2 = OccupancyMetrics(
        mean_queue=mean2, tail_freq=tail2, batch_means=batch2,
        group_stats=group_statistics(g2.server_groups, mean2),
        events=events, sim_time=t_end, arrivals=arrivals2,
        departures=departures2, initial_state=x0_arr2,
        final_state=np.array(x2, dtype=np.int64), partial=partial)
    report = DominanceReport(
        pairs=pairs, events=events, violations=violations,
        first_violation=first_violation)
    return m1, m2, report


@dataclass(frozen=True)
class DandelionComponent:
    """Isolated dandelion embedded in a transformed graph.

    ``centers`` are the shared servers, ``boundary[d]`` the private servers
    of dispatcher ``d``.  When ``trivial`` is true the core already spans
    whole neighborhoods and no transform is needed; rates are then None.
    """

    centers: tuple[int, ...]
    dispatchers: tuple[int, ...]
    boundary: dict[int, tuple[int, ...]]
    arrival: float | None
    service: float | None
    trivial: bool = False


def dandelion_reduction(
    g: CompatGraph,
    centers: list[int],
    dispatchers: list[int],
    params: SkewParams,
) -> tuple[list[TransformOp], DandelionComponent]:
    """Build the transform pipeline isolating a dandelion on ``centers``.

    ``dispatchers`` must pairwise overlap only inside ``centers`` (the
    disjointness a skewed-core search guarantees).  The pipeline equalizes
    rates over everything those dispatchers can reach, cuts every foreign
    edge into that zone, and pads degrees up to ``params.max_degree``.  The
    transformed graph then contains a dandelion with ``len(centers)``
    shared servers and ``max_degree - len(centers)`` private servers per
    dispatcher, ticking on clocks no outside server shares.
    """
    a = params.max_degree
    u_set = sorted(set(centers))
    a_set = sorted(set(dispatchers))
    if not a_set:
        raise ValidationError("no dispatchers to build on")
    if not u_set:
        raise ValidationError("no center servers")
    for d in a_set:
        if not (0 <= d < g.n_dispatchers):
            raise ValidationError(f"no dispatcher {d}")
        nd = set(g.dispatcher_neighborhoods[d])
        if not set(u_set) <= nd:
            raise ValidationError(f"dispatcher {d} misses some centers")
        if len(nd) > a:
            raise ValidationError(f"dispatcher {d} has degree {len(nd)} > {a}")
    for i, d in enumerate(a_set):
        nd = set(g.dispatcher_neighborhoods[d])
        for e in a_set[i + 1:]:
            extra = (nd & set(g.dispatcher_neighborhoods[e])) - set(u_set)
            if extra:
                raise ValidationError(
                    f"dispatchers {d} and {e} share servers {sorted(extra)} outside the centers")
    c = len(u_set)
    if c > a:
        raise ValidationError(f"{c} centers exceed the degree bound {a}")
    if c == a:
        # Neighborhoods equal the centers exactly; the graph already
        # contains the target structure and padding would change nothing.
        return [], DandelionComponent(
            centers=tuple(u_set), dispatchers=tuple(a_set), boundary={},
            arrival=None, service=None, trivial=True)

    seen = sorted({u for d in a_set for u in g.dispatcher_neighborhoods[d]})
    mu_t = 1.01 * params.max_service_rate
    lam_cap = min(g.arrival_rate[d] for d in a_set)
    if params.min_arrival_rate > 0:
        lam_cap = min(lam_cap, params.min_arrival_rate)
    if lam_cap <= 0:
        raise ValidationError("cannot anchor a component on zero arrival rates")
    # Strictly below both every dispatcher's rate and the component's
    # stability threshold (a - c) * mu.
    lam_t = min(0.99 * lam_cap, 0.5 * (a - c) * mu_t)

    ops: list[TransformOp] = []
    for d in a_set:
        ops.append(DecreaseArrival(d, lam_t))
    for u in seen:
        ops.append(IncreaseService(u, mu_t))
    inside = set(a_set)
    for u in seen:
        for e in sorted(g.server_neighborhoods[u]):
            if e not in inside:
                ops.append(EdgeSimplify(e, u))
    for d in a_set:
        for _ in range(a - g.dispatcher_degrees[d]):
            ops.append(AddServer(d, mu_t))

    g2, _ = apply_pipeline(g, ops)
    boundary: dict[int, tuple[int, ...]] = {}
    comp_servers = set(u_set)
    for d in a_set:
        nd2 = sorted(g2.dispatcher_neighborhoods[d])
        priv = tuple(u for u in nd2 if u not in set(u_set))
        if len(nd2) != a or len(priv) != a - c:
            raise CouplingIntegrityError(
                f"dispatcher {d} ended with neighborhood {nd2}, expected degree {a}")
        boundary[d] = priv
        comp_servers.update(priv)
    for u in comp_servers:
        others = set(g2.departure_partition[g2.block_of_server[u]]) - {u}
        if others & comp_servers:
            raise CouplingIntegrityError(
                f"component server {u} shares a clock with {sorted(others & comp_servers)}")
        if not np.isclose(g2.service_rate[u], mu_t):
            raise CouplingIntegrityError(f"component server {u} missed the target rate")
        for e in g2.server_neighborhoods[u]:
            if e not in inside:
                raise CouplingIntegrityError(
                    f"outside dispatcher {e} still reaches component server {u}")
    return ops, DandelionComponent(
        centers=tuple(u_set), dispatchers=tuple(a_set), boundary=boundary,
        arrival=lam_t, service=mu_t, trivial=False)
