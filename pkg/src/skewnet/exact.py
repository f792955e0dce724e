"""Exact stationary analysis of the truncated queueing chain.

The occupancy process restricted to the box {0..cap}^S is itself a Markov
chain when arrivals that would push a queue past the cap are dropped, so
its generator, stationary distribution, and drift identities can be
computed to solver precision.  Only singleton departure blocks are
supported here: a shared clock makes simultaneous multi-server departures,
which are not representable as independent per-server transitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    NumericError,
    SizeCapError,
    UnsupportedStructureError,
    ValidationError,
)
from .graph import CompatGraph

__all__ = [
    "TruncatedChain",
    "StationaryDist",
    "MinRateCheck",
    "ConvergenceRow",
    "build_generator",
    "stationary",
    "drift",
    "check_zero_mean_drift",
    "check_min_rate_inequality",
    "minimizer_probability",
    "m_count_expectation",
    "marginal",
    "tv_distance",
    "basic_graph",
    "basic_jsq_stationary",
    "boundary_convergence_table",
]


@dataclass(frozen=True, eq=False, repr=False)
class TruncatedChain:
    """Generator matrix of the shortest-queue process on a capped state box.

    States are all occupancy vectors in ``{0..cap}^S`` indexed in mixed
    radix with server 0 most significant; ``states[i]`` decodes index i.
    ``generator`` holds rates with the diagonal set so rows sum to zero.
    """

    graph: CompatGraph
    cap: int
    states: np.ndarray
    generator: sp.csr_matrix

    @property
    def n_states(self) -> int:
        return self.states.shape[0]

    def state_index(self, x: Sequence[int]) -> int:
        k1 = self.cap + 1
        idx = 0
        for v in x:
            if not 0 <= v <= self.cap:
                raise ValidationError(f"occupancy {v} outside [0, {self.cap}]")
            idx = idx * k1 + int(v)
        return idx

    def __repr__(self) -> str:
        return f"TruncatedChain(S={self.graph.n_servers}, cap={self.cap}, states={self.n_states})"


@dataclass(frozen=True, eq=False, repr=False)
class StationaryDist:
    """Stationary probability vector with solver diagnostics.

    ``boundary_mass`` is the probability of any queue sitting exactly at
    the cap; quantities compared against untruncated identities inherit a
    bias of that order.
    """

    pi: np.ndarray
    residual: float
    boundary_mass: float
    method: str

    def expectation(self, values: np.ndarray) -> float:
        return float(self.pi @ values)


def build_generator(g: CompatGraph, cap: int, max_states: int = 5_000_000) -> TruncatedChain:
    """Assemble the truncated-chain generator for graph ``g``.

    Arrival transitions split the dispatcher's rate uniformly over its
    current shortest-queue set; an arrival whose whole candidate set sits
    at the cap is dropped.  Departure transitions need singleton blocks.
    """
    if cap < 1:
        raise ValidationError("cap must be >= 1")
    if any(len(block) != 1 for block in g.departure_partition):
        raise UnsupportedStructureError(
            "exact analysis supports singleton departure blocks only; "
            "shared clocks fire multiple servers at once"
        )
    n_s = g.n_servers
    k1 = cap + 1
    n_states = k1**n_s
    if n_states > max_states:
        raise SizeCapError(f"{n_states} states exceeds cap {max_states}")
    shape = (k1,) * n_s
    states = np.stack(np.unravel_index(np.arange(n_states), shape), axis=1).astype(np.int16)
    stride = np.array([k1 ** (n_s - 1 - u) for u in range(n_s)], dtype=np.int64)
    idx = np.arange(n_states, dtype=np.int64)

    rows, cols, vals = [], [], []
    for d in range(g.n_dispatchers):
        lam = float(g.arrival_rate[d])
        if lam == 0.0:
            continue
        nd = g.dispatcher_neighborhoods[d]
        occ = states[:, nd].astype(np.int64)
        m = occ.min(axis=1)
        open_states = m < cap
        ties = occ == m[:, None]
        n_ties = ties.sum(axis=1)
        for j, u in enumerate(nd):
            mask = ties[:, j] & open_states
            rows.append(idx[mask])
            cols.append(idx[mask] + stride[u])
            vals.append(lam / n_ties[mask])
    for u in range(n_s):
        mu = float(g.service_rate[u])
        mask = states[:, u] > 0
        rows.append(idx[mask])
        cols.append(idx[mask] - stride[u])
        vals.append(np.full(int(mask.sum()), mu))

    row_arr = np.concatenate(rows)
    col_arr = np.concatenate(cols)
    val_arr = np.concatenate(vals)
    diag = -np.bincount(row_arr, weights=val_arr, minlength=n_states)
    row_arr = np.concatenate([row_arr, idx])
    col_arr = np.concatenate([col_arr, idx])
    val_arr = np.concatenate([val_arr, diag])
    gen = sp.coo_matrix((val_arr, (row_arr, col_arr)), shape=(n_states, n_states)).tocsr()
    return TruncatedChain(graph=g, cap=cap, states=states, generator=gen)


def _boundary_mass(chain: TruncatedChain, pi: np.ndarray) -> float:
    at_cap = (chain.states == chain.cap).any(axis=1)
    return float(pi[at_cap].sum())


def stationary(
    chain: TruncatedChain,
    direct_threshold: int = 100_000,
    residual_target: float = 1e-10,
) -> StationaryDist:
    """Solve pi @ A = 0, sum(pi) = 1 to the requested residual.

    Below ``direct_threshold`` states, a sparse LU factorization of the
    transposed generator (one balance equation swapped for normalization)
    is solved with iterative refinement.  Above it, Jacobi-preconditioned
    BiCGStab does the same job; uniformized power iteration is the
    fallback.  Raises ``NumericError`` if no method reaches the target.
    """
    A = chain.generator
    n = chain.n_states
    M = A.T.tocoo()
    keep = M.row != 0
    rows = np.concatenate([M.row[keep], np.zeros(n, dtype=M.row.dtype)])
    cols = np.concatenate([M.col[keep], np.arange(n, dtype=M.col.dtype)])
    vals = np.concatenate([M.data[keep], np.ones(n)])
    Mc = sp.csc_matrix(sp.coo_matrix((vals, (rows, cols)), shape=(n, n)))
    b = np.zeros(n)
    b[0] = 1.0

    def finish(pi: np.ndarray, method: str) -> StationaryDist | None:
        pi = np.where(pi > 0, pi, 0.0)
        total = pi.sum()
        if total <= 0:
            return None
        pi = pi / total
        res = float(np.abs(pi @ A).max())
        if res > residual_target:
            return None
        return StationaryDist(pi, res, _boundary_mass(chain, pi), method)

    if n <= direct_threshold:
        lu = spla.splu(Mc)
        pi = lu.solve(b)
        for _ in range(3):
            r = b - Mc @ pi
            if np.abs(r).max() < 1e-14:
                break
            pi = pi + lu.solve(r)
        out = finish(pi, "direct")
        if out is not None:
            return out
        raise NumericError("direct solve missed the residual target")

    diag = Mc.diagonal()
    diag = np.where(diag != 0, diag, 1.0)
    precond = spla.LinearOperator((n, n), lambda v: v / diag)
    pi, info = spla.bicgstab(Mc, b, M=precond, rtol=1e-13, atol=0.0, maxiter=5000)
    if info == 0:
        out = finish(pi, "bicgstab")
        if out is not None:
            return out

    # Fallback: uniformized power iteration.  Slow but dependable.
    lam_max = float(-A.diagonal().min()) * 1.05
    P_t = (sp.identity(n, format="csr") + A / lam_max).T.tocsr()
    pi = np.full(n, 1.0 / n)
    for sweep_i in range(4000):
        for _ in range(50):
            pi = P_t @ pi
        pi /= pi.sum()
        if float(np.abs(pi @ A).max()) < residual_target:
            out = finish(pi, "power")
            if out is not None:
                return out
    raise NumericError("stationary solve failed to reach residual "
                       f"{residual_target} on {n} states")


def drift(chain: TruncatedChain, f: Callable[[np.ndarray], float], x: Sequence[int]) -> float:
    """Instantaneous generator applied to ``f`` at state ``x``.

    Sums, over dispatchers, the rate-weighted increments of ``f`` at each
    current shortest-queue placement (dropped entirely when the whole
    candidate set is capped), plus the decrement terms for busy servers.
    """
    g = chain.graph
    xv = np.asarray(x, dtype=np.int64)
    if xv.shape != (g.n_servers,) or (xv < 0).any() or (xv > chain.cap).any():
        raise ValidationError("state must hold one occupancy in [0, cap] per server")
    fx = float(f(xv))
    total = 0.0
    for d in range(g.n_dispatchers):
        lam = float(g.arrival_rate[d])
        if lam == 0.0:
            continue
        nd = list(g.dispatcher_neighborhoods[d])
        occ = xv[nd]
        m = int(occ.min())
        if m == chain.cap:
            continue
        argmin = [u for u, v in zip(nd, occ) if v == m]
        share = lam / len(argmin)
        for u in argmin:
            xe = xv.copy()
            xe[u] += 1
            total += share * (float(f(xe)) - fx)
    for u in range(g.n_servers):
        if xv[u] > 0:
            xe = xv.copy()
            xe[u] -= 1
            total += float(g.service_rate[u]) * (float(f(xe)) - fx)
    return total


def _values_over_states(
    chain: TruncatedChain, f: Callable[[np.ndarray], float] | np.ndarray
) -> np.ndarray:
    if isinstance(f, np.ndarray):
        if f.shape != (chain.n_states,):
            raise ValidationError("value array must have one entry per state")
        return f.astype(float)
    return np.array([float(f(chain.states[i])) for i in range(chain.n_states)])


def check_zero_mean_drift(
    chain: TruncatedChain,
    dist: StationaryDist,
    f: Callable[[np.ndarray], float] | np.ndarray,
) -> float:
    """|E[Af]| under the stationary law; zero up to solver residual.

    ``f`` is either a callable on occupancy vectors or a precomputed value
    per state index.
    """
    values = _values_over_states(chain, f)
    return float(abs(dist.pi @ (chain.generator @ values)))


def minimizer_probability(
    chain: TruncatedChain, dist: StationaryDist, d: int, u: int
) -> float:
    """Stationary chance that server ``u`` is in dispatcher ``d``'s argmin set."""
    g = chain.graph
    nd = g.dispatcher_neighborhoods[d]
    if u not in nd:
        raise ValidationError(f"server {u} is not compatible with dispatcher {d}")
    occ = chain.states[:, nd].astype(np.int64)
    m = occ.min(axis=1)
    j = nd.index(u)
    return float(dist.pi[occ[:, j] == m].sum())


@dataclass(frozen=True)
class MinRateCheck:
    server: int
    lhs: float
    service_rate: float
    holds: bool


def check_min_rate_inequality(
    chain: TruncatedChain, dist: StationaryDist, u: int, slack: float = 1e-9
) -> MinRateCheck:
    """Check that argmin-weighted arrival pressure on ``u`` is within its rate.

    The left side sums, over dispatchers compatible with ``u``, the
    dispatcher rate divided by its full degree times the stationary
    probability that ``u`` is among its shortest queues.
    """
    g = chain.graph
    if not 0 <= u < g.n_servers:
        raise ValidationError(f"unknown server id {u}")
    lhs = 0.0
    for d in g.server_neighborhoods[u]:
        lam = float(g.arrival_rate[d])
        if lam == 0.0:
            continue
        lhs += lam / len(g.dispatcher_neighborhoods[d]) * minimizer_probability(chain, dist, d, u)
    mu = float(g.service_rate[u])
    return MinRateCheck(server=u, lhs=lhs, service_rate=mu, holds=lhs <= mu + slack)


def m_count_expectation(
    chain: TruncatedChain, dist: StationaryDist, central: Sequence[int]
) -> float:
    """Expected number of dispatchers whose argmin set touches ``central``."""
    g = chain.graph
    central_set = set(int(u) for u in central)
    total = 0.0
    for d in range(g.n_dispatchers):
        nd = g.dispatcher_neighborhoods[d]
        positions = [j for j, u in enumerate(nd) if u in central_set]
        if not positions:
            continue
        occ = chain.states[:, nd].astype(np.int64)
        m = occ.min(axis=1)
        hit = (occ[:, positions] == m[:, None]).any(axis=1)
        total += float(dist.pi[hit].sum())
    return total


def marginal(chain: TruncatedChain, dist: StationaryDist, servers: Sequence[int]) -> np.ndarray:
    """Joint stationary law of the given servers, axes in ascending id order."""
    srv = sorted(set(int(u) for u in servers))
    if not srv:
        raise ValidationError("need at least one server")
    n_s = chain.graph.n_servers
    if any(not 0 <= u < n_s for u in srv):
        raise ValidationError("unknown server id in marginal request")
    shape = (chain.cap + 1,) * n_s
    drop = tuple(u for u in range(n_s) if u not in srv)
    return dist.pi.reshape(shape).sum(axis=drop)


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Total variation distance between two distributions on a common space."""
    if p.shape != q.shape:
        raise ValidationError("distributions must share a shape")
    return 0.5 * float(np.abs(p - q).sum())


def basic_graph(b: int, arrival: float, service: float = 1.0) -> CompatGraph:
    """One dispatcher joined to ``b`` identical servers."""
    if b < 1:
        raise ValidationError("need at least one server")
    return CompatGraph(
        edges=tuple((0, u) for u in range(b)),
        arrival_rate=np.array([arrival]),
        service_rate=np.full(b, service),
        meta={"family": "basic", "params": {"b": b, "arrival": arrival, "service": service}},
    )


def basic_jsq_stationary(
    b: int, arrival: float, service: float, cap: int
) -> tuple[TruncatedChain, StationaryDist]:
    """Exact law of the single-dispatcher system with ``b`` servers."""
    chain = build_generator(basic_graph(b, arrival, service), cap)
    return chain, stationary(chain)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    marginal_tv: float
    joint_tv: float
    m_count: float
    m_count_bound: float
    boundary_mass: float


def boundary_convergence_table(
    n_list: Sequence[int],
    boundary: int,
    central: int,
    arrival: float,
    service: float,
    cap: int,
) -> list[ConvergenceRow]:
    """Distance of boundary-block laws from the isolated single-dispatcher law.

    For each n, solves the dandelion system exactly and reports the total
    variation distance between one dispatcher's boundary-block marginal and
    the isolated b-server law, the distance between a two-block joint law
    and the product of two independent copies, and the expected number of
    dispatchers whose shortest-queue set touches the central servers along
    with its arrival-balance bound.
    """
    from .generators import DandelionSpec, dandelion

    if len(n_list) == 0 or min(n_list) < 2:
        raise ValidationError("need n >= 2 to compare two boundary blocks")
    if boundary < 1:
        raise ValidationError("need at least one boundary server per dispatcher")
    _, basic_dist = basic_jsq_stationary(boundary, arrival, service, cap)
    shape_b = (cap + 1,) * boundary
    basic_law = basic_dist.pi.reshape(shape_b)
    product_law = np.multiply.outer(basic_law, basic_law)
    bound = service * (boundary + central) * central / arrival if arrival > 0 else float("inf")
    rows = []
    for n in n_list:
        g = dandelion(DandelionSpec(n=n, boundary=boundary, central=central,
                                    arrival=arrival, service=service))
        chain = build_generator(g, cap)
        dist = stationary(chain)
        block0 = [central + j for j in range(boundary)]
        block1 = [central + boundary + j for j in range(boundary)]
        marg0 = marginal(chain, dist, block0)
        joint = marginal(chain, dist, block0 + block1)
        rows.append(
            ConvergenceRow(
                n=n,
                marginal_tv=tv_distance(marg0, basic_law),
                joint_tv=tv_distance(joint, product_law),
                m_count=m_count_expectation(chain, dist, list(range(central))),
                m_count_bound=bound,
                boundary_mass=dist.boundary_mass,
            )
        )
    return rows
