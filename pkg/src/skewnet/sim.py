"""Event-driven simulation of the queueing dynamics on a compatibility graph.

Tasks arrive at each dispatcher as a Poisson stream and join the shortest
compatible queue (optionally among a sampled subset).  Each departure block
carries one Poisson potential-departure clock applied to all its servers at
once, decrementing the nonempty ones.  Every stochastic source owns an RNG
stream split off the master seed, so identical configurations replay
identical paths and adding instrumentation never perturbs the draws.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .graph import CompatGraph

__all__ = [
    "Jsq",
    "PowerOfD",
    "Policy",
    "SimConfig",
    "GroupStats",
    "TimeSeries",
    "OccupancyMetrics",
    "SweepRow",
    "simulate",
    "sweep",
    "batch_interval",
]


@dataclass(frozen=True)
class Jsq:
    """Join the shortest queue over the full compatible set."""


@dataclass(frozen=True)
class PowerOfD:
    """Sample ``d`` distinct compatible servers, then join the shortest.

    A dispatcher with fewer than ``d`` compatible servers uses its whole
    neighborhood, which makes the policy coincide with :class:`Jsq` there.
    """

    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValidationError("power-of-d needs d >= 1")


Policy = Jsq | PowerOfD


@dataclass(frozen=True)
class SimConfig:
    """Run parameters for :func:`simulate`.

    ``horizon`` is simulated time.  Metrics are time averages over the
    window after ``warmup_fraction * horizon``, split into ``n_batches``
    equal batches for confidence intervals.  ``max_events`` optionally caps
    the event count; hitting it truncates the run and flags the result as
    partial.  ``sample_every`` records per-group instantaneous occupancy
    statistics on a regular grid.  ``min_track_group`` additionally tracks
    the exact fraction of post-warmup time during which the minimum
    occupancy within that group stays at or above ``min_track_threshold``,
    along with the exact time average of that group minimum.
    """

    horizon: float
    warmup_fraction: float = 0.25
    seed: int = 0
    tail_ks: tuple[int, ...] = ()
    n_batches: int = 20
    max_events: int | None = None
    sample_every: float | None = None
    min_track_group: str | None = None
    min_track_threshold: int = 0

    def __post_init__(self) -> None:
        if not (self.horizon > 0 and np.isfinite(self.horizon)):
            raise ValidationError("horizon must be finite and > 0")
        if not 0 <= self.warmup_fraction < 1:
            raise ValidationError("warmup_fraction must lie in [0, 1)")
        if self.n_batches < 1:
            raise ValidationError("n_batches must be >= 1")
        if any(k < 0 for k in self.tail_ks):
            raise ValidationError("tail thresholds must be >= 0")
        if self.max_events is not None and self.max_events < 1:
            raise ValidationError("max_events must be >= 1 when given")
        if self.sample_every is not None and self.sample_every <= 0:
            raise ValidationError("sample_every must be > 0 when given")


@dataclass(frozen=True)
class GroupStats:
    min: float
    mean: float
    max: float


@dataclass(frozen=True)
class TimeSeries:
    """Instantaneous per-group occupancy stats on a regular time grid."""

    times: np.ndarray
    group_mean: dict[str, np.ndarray]
    group_min: dict[str, np.ndarray]
    group_max: dict[str, np.ndarray]


@dataclass(frozen=True)
class OccupancyMetrics:
    """Time-averaged occupancy statistics of one simulation run.

    ``mean_queue[u]`` is the time average of server u's queue length over
    the post-warmup window; ``tail_freq[k][u]`` the fraction of that window
    with at least k tasks at u.  ``batch_means`` has one row per batch.
    ``group_stats`` aggregates the per-server time averages by server label.
    """

    mean_queue: np.ndarray
    tail_freq: dict[int, np.ndarray]
    batch_means: np.ndarray
    group_stats: dict[str, GroupStats]
    events: int
    sim_time: float
    arrivals: int
    departures: int
    initial_state: np.ndarray
    final_state: np.ndarray
    partial: bool = False
    samples: TimeSeries | None = None
    min_track_fraction: float | None = None
    min_track_average: float | None = None


class _MetricsAccumulator:
    """Per-server time integrals over the measurement window.

    ``flush(u, t, v)`` credits occupancy ``v`` to server ``u`` over the
    interval since its last flush, clipped to ``[warm, horizon]`` and split
    across batch boundaries.  Callers flush a server exactly when its
    occupancy is about to change, so the cost is O(1) per state change
    instead of O(servers) per event.

    ``simulate`` inlines the same arithmetic in local closures for speed;
    keep the two in sync.
    """

    __slots__ = ("n_servers", "warm", "n_batches", "batch_len", "ks",
                 "acc", "last", "bacc", "taccs")

    def __init__(self, n_servers: int, warm: float, horizon: float,
                 n_batches: int, ks: tuple[int, ...]):
        self.n_servers = n_servers
        self.warm = warm
        self.n_batches = n_batches
        self.batch_len = (horizon - warm) / n_batches
        self.ks = ks
        self.acc = [0.0] * n_servers
        self.last = [0.0] * n_servers
        self.bacc = [0.0] * (n_batches * n_servers)
        self.taccs = [[0.0] * n_servers for _ in ks]

    def flush(self, u: int, t: float, v: int) -> None:
        t0 = self.last[u]
        warm = self.warm
        lo = t0 if t0 > warm else warm
        if t > lo:
            dt = t - lo
            self.acc[u] += v * dt
            ks = self.ks
            for ki in range(len(ks)):
                if v >= ks[ki]:
                    self.taccs[ki][u] += dt
            batch_len = self.batch_len
            n_b = self.n_batches
            n_s = self.n_servers
            j0 = int((lo - warm) / batch_len)
            j1 = int((t - warm) / batch_len)
            if j1 >= n_b:
                j1 = n_b - 1
            if j0 == j1:
                self.bacc[j0 * n_s + u] += v * dt
            else:
                for j in range(j0, j1 + 1):
                    seg_lo = warm + j * batch_len
                    seg_hi = seg_lo + batch_len
                    a = lo if lo > seg_lo else seg_lo
                    bnd = t if t < seg_hi else seg_hi
                    if bnd > a:
                        self.bacc[j * n_s + u] += v * (bnd - a)
        self.last[u] = t

    def finalize(self, t_end: float, x: Sequence[int]) -> tuple[np.ndarray, dict, np.ndarray]:
        for u in range(self.n_servers):
            self.flush(u, t_end, x[u])
        window = t_end - self.warm
        if window > 0:
            mean_queue = np.array(self.acc) / window
            tail = {k: np.array(self.taccs[ki]) / window for ki, k in enumerate(self.ks)}
        else:
            mean_queue = np.zeros(self.n_servers)
            tail = {k: np.zeros(self.n_servers) for k in self.ks}
        batch = np.array(self.bacc).reshape(self.n_batches, self.n_servers) / self.batch_len
        return mean_queue, tail, batch


def group_statistics(groups: Sequence[str], mean_queue: np.ndarray) -> dict[str, GroupStats]:
    out: dict[str, GroupStats] = {}
    for lbl in sorted(set(groups)):
        vals = mean_queue[[u for u in range(len(groups)) if groups[u] == lbl]]
        out[lbl] = GroupStats(float(vals.min()), float(vals.mean()), float(vals.max()))
    return out


class _ExpStream:
    """Buffered exponential draws from one dedicated generator."""

    __slots__ = ("rng", "scale", "buf", "i")

    def __init__(self, rng: np.random.Generator, rate: float, batch: int = 4096):
        self.rng = rng
        self.scale = 1.0 / rate
        self.buf = rng.exponential(self.scale, batch)
        self.i = 0

    def next(self) -> float:
        i = self.i
        buf = self.buf
        if i >= buf.shape[0]:
            buf = self.rng.exponential(self.scale, buf.shape[0])
            self.buf = buf
            i = 0
        self.i = i + 1
        return buf[i]


class _UniStream:
    """Buffered uniforms on [0, 1) from one dedicated generator."""

    __slots__ = ("rng", "buf", "i")

    def __init__(self, rng: np.random.Generator, batch: int = 4096):
        self.rng = rng
        self.buf = rng.random(batch)
        self.i = 0

    def next(self) -> float:
        i = self.i
        buf = self.buf
        if i >= buf.shape[0]:
            buf = self.rng.random(buf.shape[0])
            self.buf = buf
            i = 0
        self.i = i + 1
        return buf[i]


def source_streams(seed: int, n_dispatchers: int, n_blocks: int) -> list[np.random.SeedSequence]:
    """Deterministic per-source seed split: selection, arrivals, then blocks."""
    return np.random.SeedSequence(seed).spawn(1 + n_dispatchers + n_blocks)


def _resolve_x0(
    g: CompatGraph, x0: Sequence[int] | Mapping[int, int] | None
) -> list[int]:
    n_s = g.n_servers
    if x0 is None:
        return [0] * n_s
    if isinstance(x0, Mapping):
        out = [0] * n_s
        for u, v in x0.items():
            if not 0 <= int(u) < n_s:
                raise ValidationError(f"initial state references unknown server {u}")
            out[int(u)] = int(v)
    else:
        if len(x0) != n_s:
            raise ValidationError("initial state length must equal server count")
        out = [int(v) for v in x0]
    if any(v < 0 for v in out):
        raise ValidationError("initial occupancies must be >= 0")
    return out


def simulate(
    g: CompatGraph,
    policy: Policy,
    cfg: SimConfig,
    x0: Sequence[int] | Mapping[int, int] | None = None,
    on_event: Callable[[str, float, tuple], None] | None = None,
) -> OccupancyMetrics:
    """Run one simulation and return time-averaged occupancy metrics.

    ``on_event`` is an optional instrumentation hook invoked before each
    state change with ``("arrival", t, (dispatcher, candidates, chosen))``
    or ``("departure", t, (block_index, members))``; it consumes no
    randomness, so hooked and unhooked runs follow identical paths.
    """
    if not isinstance(policy, (Jsq, PowerOfD)):
        raise ValidationError(f"unknown policy {policy!r}")
    n_d, n_s = g.n_dispatchers, g.n_servers
    blocks = g.departure_partition
    n_b = len(blocks)
    horizon = float(cfg.horizon)
    warm = cfg.warmup_fraction * horizon
    n_batches = cfg.n_batches
    batch_len = (horizon - warm) / n_batches
    ks = tuple(cfg.tail_ks)

    seeds = source_streams(cfg.seed, n_d, n_b)
    sel = _UniStream(np.random.Generator(np.random.PCG64(seeds[0])))
    arr_rates = g.arrival_rate
    arr_streams: list[_ExpStream | None] = [
        _ExpStream(np.random.Generator(np.random.PCG64(seeds[1 + d])), float(arr_rates[d]))
        if arr_rates[d] > 0
        else None
        for d in range(n_d)
    ]
    blk_streams = [
        _ExpStream(np.random.Generator(np.random.PCG64(seeds[1 + n_d + i])), g.block_rate(i))
        for i in range(n_b)
    ]

    x = _resolve_x0(g, x0)
    x0_arr = np.array(x, dtype=np.int64)
    neigh = g.dispatcher_neighborhoods
    pod = policy.d if isinstance(policy, PowerOfD) else 0

    acc = [0.0] * n_s
    last = [0.0] * n_s
    bacc = [0.0] * (n_batches * n_s)
    taccs = [[0.0] * n_s for _ in ks]

    sampling = cfg.sample_every is not None
    if sampling:
        step = float(cfg.sample_every)
        next_sample = 0.0
        sample_times: list[float] = []
        labels = sorted(set(g.server_groups))
        group_idx = {lbl: np.array([u for u in range(n_s) if g.server_groups[u] == lbl])
                     for lbl in labels}
        s_mean: dict[str, list[float]] = {lbl: [] for lbl in labels}
        s_min: dict[str, list[float]] = {lbl: [] for lbl in labels}
        s_max: dict[str, list[float]] = {lbl: [] for lbl in labels}

    tracking = cfg.min_track_group is not None
    if tracking:
        in_track = [lbl == cfg.min_track_group for lbl in g.server_groups]
        track_members = [u for u in range(n_s) if in_track[u]]
        if not track_members:
            raise ValidationError(f"no server has group {cfg.min_track_group!r}")
        thr = cfg.min_track_threshold
        cur_min = min(x[u] for u in track_members)
        min_last_t = 0.0
        min_time_ok = 0.0
        min_time_int = 0.0

    heap: list[tuple[float, int]] = []
    for d in range(n_d):
        st = arr_streams[d]
        if st is not None:
            heap.append((st.next(), d))
    for i in range(n_b):
        heap.append((blk_streams[i].next(), n_d + i))
    heapq.heapify(heap)
    push, pop = heapq.heappush, heapq.heappop

    events = arrivals = departures = 0
    max_events = cfg.max_events
    partial = False
    t_end = horizon

    def flush(u: int, t: float) -> None:
        # Credit x[u] over [last[u], t), clipped to the measurement window.
        t0 = last[u]
        lo = t0 if t0 > warm else warm
        if t > lo:
            v = x[u]
            dt = t - lo
            acc[u] += v * dt
            for ki in range(len(ks)):
                if v >= ks[ki]:
                    taccs[ki][u] += dt
            j0 = int((lo - warm) / batch_len)
            j1 = int((t - warm) / batch_len)
            if j1 >= n_batches:
                j1 = n_batches - 1
            if j0 == j1:
                bacc[j0 * n_s + u] += v * dt
            else:
                for j in range(j0, j1 + 1):
                    seg_lo = warm + j * batch_len
                    seg_hi = seg_lo + batch_len
                    a = lo if lo > seg_lo else seg_lo
                    bnd = t if t < seg_hi else seg_hi
                    if bnd > a:
                        bacc[j * n_s + u] += v * (bnd - a)
        last[u] = t

    def track_min_change(t: float, new_min: int) -> None:
        nonlocal cur_min, min_last_t, min_time_ok, min_time_int
        lo = min_last_t if min_last_t > warm else warm
        hi = t if t < horizon else horizon
        if hi > lo:
            if cur_min >= thr:
                min_time_ok += hi - lo
            min_time_int += cur_min * (hi - lo)
        min_last_t = t
        cur_min = new_min

    def take_samples(up_to: float) -> None:
        nonlocal next_sample
        while next_sample <= up_to:
            xs = np.array(x)
            sample_times.append(next_sample)
            for lbl in labels:
                vals = xs[group_idx[lbl]]
                s_mean[lbl].append(float(vals.mean()))
                s_min[lbl].append(float(vals.min()))
                s_max[lbl].append(float(vals.max()))
            next_sample += step

    while heap:
        t, src = pop(heap)
        if t > horizon:
            break
        if sampling and next_sample <= t:
            take_samples(t)
        events += 1
        if src < n_d:
            nb = neigh[src]
            if pod and len(nb) > pod:
                pool = list(nb)
                m_len = len(pool)
                for i in range(pod):
                    j = i + int(sel.next() * (m_len - i))
                    pool[i], pool[j] = pool[j], pool[i]
                cands = pool[:pod]
            else:
                cands = nb
            best = cands[0]
            m = x[best]
            ties = None
            for u in cands[1:]:
                v = x[u]
                if v < m:
                    m = v
                    best = u
                    ties = None
                elif v == m:
                    if ties is None:
                        ties = [best]
                    ties.append(u)
            if ties is not None:
                best = ties[int(sel.next() * len(ties))]
            if on_event is not None:
                on_event("arrival", t, (src, tuple(cands), best))
            flush(best, t)
            x[best] += 1
            arrivals += 1
            if tracking and in_track[best] and x[best] - 1 == cur_min:
                new_min = min(x[u] for u in track_members)
                if new_min != cur_min:
                    track_min_change(t, new_min)
            push(heap, (t + arr_streams[src].next(), src))
        else:
            bi = src - n_d
            members = blocks[bi]
            if on_event is not None:
                on_event("departure", t, (bi, members))
            for u in members:
                if x[u] > 0:
                    flush(u, t)
                    x[u] -= 1
                    departures += 1
                    if tracking and in_track[u] and x[u] < cur_min:
                        track_min_change(t, x[u])
            push(heap, (t + blk_streams[bi].next(), src))
        if events == max_events:
            partial = True
            t_end = t
            break

    if sampling:
        take_samples(t_end)
    for u in range(n_s):
        flush(u, t_end)

    window = t_end - warm
    if window > 0:
        mean_queue = np.array(acc) / window
        tail = {k: np.array(taccs[ki]) / window for ki, k in enumerate(ks)}
    else:
        mean_queue = np.zeros(n_s)
        tail = {k: np.zeros(n_s) for k in ks}
    batch = np.array(bacc).reshape(n_batches, n_s) / batch_len

    group_stats = group_statistics(g.server_groups, mean_queue)

    samples = None
    if sampling:
        samples = TimeSeries(
            times=np.array(sample_times),
            group_mean={lbl: np.array(v) for lbl, v in s_mean.items()},
            group_min={lbl: np.array(v) for lbl, v in s_min.items()},
            group_max={lbl: np.array(v) for lbl, v in s_max.items()},
        )

    min_frac = None
    min_avg = None
    if tracking:
        track_min_change(t_end, cur_min)
        min_frac = min_time_ok / window if window > 0 else 0.0
        min_avg = min_time_int / window if window > 0 else 0.0

    return OccupancyMetrics(
        mean_queue=mean_queue,
        tail_freq=tail,
        batch_means=batch,
        group_stats=group_stats,
        events=events,
        sim_time=t_end,
        arrivals=arrivals,
        departures=departures,
        initial_state=x0_arr,
        final_state=np.array(x, dtype=np.int64),
        partial=partial,
        samples=samples,
        min_track_fraction=min_frac,
        min_track_average=min_avg,
    )


def batch_interval(metrics: OccupancyMetrics, u: int, z: float = 3.0) -> tuple[float, float]:
    """Batch-means interval ``mean +- z * stderr`` for server u's queue average."""
    vals = metrics.batch_means[:, u]
    n = vals.shape[0]
    se = vals.std(ddof=1) / np.sqrt(n) if n > 1 else 0.0
    center = float(vals.mean())
    return center - z * se, center + z * se


@dataclass(frozen=True)
class SweepRow:
    params: dict[str, Any]
    seed: int
    metrics: OccupancyMetrics


def _run_point(
    args: tuple[int, Mapping[str, Any], CompatGraph, Policy, SimConfig]
) -> SweepRow:
    index, params, graph, policy, cfg = args
    run_cfg = replace(cfg, seed=cfg.seed + index)
    return SweepRow(dict(params), run_cfg.seed, simulate(graph, policy, run_cfg))


def sweep(
    points: Sequence[tuple[Mapping[str, Any], CompatGraph]],
    policy: Policy,
    cfg: SimConfig,
    workers: int = 1,
) -> list[SweepRow]:
    """Run :func:`simulate` once per point, seeding run i with ``cfg.seed + i``.

    Each point pairs a parameter record (echoed into the output row) with
    the graph to simulate.  Runs are independent, so ``workers > 1`` farms
    them out to processes; the row order is by point index either way.
    """
    jobs = [(i, params, graph, policy, cfg) for i, (params, graph) in enumerate(points)]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_point, jobs))
    return [_run_point(job) for job in jobs]
