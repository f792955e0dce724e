"""Exact truncated-chain analysis against closed forms and enumeration."""

import numpy as np
import pytest

from skewnet import (
    CompatGraph,
    DandelionSpec,
    UnsupportedStructureError,
    ValidationError,
    basic_graph,
    basic_jsq_stationary,
    boundary_convergence_table,
    build_generator,
    check_min_rate_inequality,
    check_zero_mean_drift,
    dandelion,
    drift,
    m_count_expectation,
    marginal,
    minimizer_probability,
    stationary,
    tv_distance,
)
from skewnet.errors import SizeCapError


def truncated_geometric(lam, mu, cap):
    """Stationary law of the capped single queue, normalized closed form."""
    rho = lam / mu
    weights = rho ** np.arange(cap + 1)
    return weights / weights.sum()


class TestGeneratorStructure:
    def test_state_enumeration_mixed_radix(self):
        g = dandelion(DandelionSpec(n=2, boundary=1, central=1, arrival=0.5))
        chain = build_generator(g, cap=3)
        assert chain.n_states == 4 ** 3
        # Server 0 is the most significant digit.
        assert list(chain.states[0]) == [0, 0, 0]
        assert list(chain.states[1]) == [0, 0, 1]
        assert list(chain.states[4]) == [0, 1, 0]
        for i in (0, 17, 63):
            assert chain.state_index(chain.states[i]) == i

    def test_rows_sum_to_zero_offdiag_nonnegative(self):
        g = dandelion(DandelionSpec(n=2, boundary=2, central=1, arrival=0.9))
        chain = build_generator(g, cap=2)
        q = chain.generator.toarray()
        assert np.allclose(q.sum(axis=1), 0.0, atol=1e-12)
        off = q - np.diag(np.diag(q))
        assert (off >= 0).all()

    def test_arrival_blocked_when_candidates_capped(self):
        chain = build_generator(basic_graph(1, 0.7), cap=4)
        q = chain.generator.toarray()
        # Top state: only the departure transition remains.
        assert q[4, 3] == pytest.approx(1.0)
        assert q[4, 4] == pytest.approx(-1.0)
        assert (q[4, :3] == 0).all()

    def test_tie_splits_arrival_rate(self):
        chain = build_generator(basic_graph(2, 0.8), cap=2)
        q = chain.generator.toarray()
        zero = chain.state_index([0, 0])
        up0 = chain.state_index([1, 0])
        up1 = chain.state_index([0, 1])
        assert q[zero, up0] == pytest.approx(0.4)
        assert q[zero, up1] == pytest.approx(0.4)
        skew = chain.state_index([2, 1])
        assert q[skew, chain.state_index([2, 2])] == pytest.approx(0.8)

    def test_shared_departure_blocks_unsupported(self):
        g = CompatGraph(
            edges=((0, 0), (0, 1)),
            arrival_rate=(0.5,),
            service_rate=(1.0, 1.0),
            departure_partition=((0, 1),),
        )
        with pytest.raises(UnsupportedStructureError):
            build_generator(g, cap=3)

    def test_state_space_cap(self):
        g = dandelion(DandelionSpec(n=4, boundary=2, central=2, arrival=0.5))
        with pytest.raises(SizeCapError):
            build_generator(g, cap=10, max_states=1000)

    def test_cap_must_be_positive(self):
        with pytest.raises(ValidationError):
            build_generator(basic_graph(1, 0.5), cap=0)


class TestStationarySingleQueue:
    def test_matches_truncated_geometric(self):
        for lam, mu, cap in [(0.5, 1.0, 20), (1.0, 2.0, 35), (0.9, 1.0, 12)]:
            chain = build_generator(basic_graph(1, lam, mu), cap)
            dist = stationary(chain)
            expected = truncated_geometric(lam, mu, cap)
            assert np.max(np.abs(dist.pi - expected)) < 1e-9

    def test_expectation_and_boundary_mass(self):
        lam, mu, cap = 0.5, 1.0, 25
        chain = build_generator(basic_graph(1, lam, mu), cap)
        dist = stationary(chain)
        expected = truncated_geometric(lam, mu, cap)
        idx = np.arange(cap + 1).astype(float)
        assert dist.expectation(idx) == pytest.approx(float(expected @ idx), abs=1e-9)
        assert dist.boundary_mass == pytest.approx(expected[-1], abs=1e-9)

    def test_solver_paths_agree(self):
        g = dandelion(DandelionSpec(n=2, boundary=1, central=1, arrival=0.9))
        chain = build_generator(g, cap=7)
        direct = stationary(chain)
        iterative = stationary(chain, direct_threshold=1)
        assert direct.method == "direct"
        assert iterative.method != "direct"
        assert tv_distance(direct.pi, iterative.pi) < 1e-9


class TestDrift:
    def test_matches_generator_row(self):
        g = dandelion(DandelionSpec(n=2, boundary=2, central=1, arrival=1.1))
        chain = build_generator(g, cap=3)
        rng = np.random.default_rng(2)
        values = rng.normal(size=chain.n_states)
        f = lambda x: values[chain.state_index(x)]
        qf = chain.generator @ values
        for i in rng.integers(0, chain.n_states, size=25):
            x = chain.states[int(i)]
            assert drift(chain, f, x) == pytest.approx(qf[int(i)], rel=1e-9, abs=1e-12)

    def test_rejects_states_outside_box(self):
        chain = build_generator(basic_graph(2, 0.5), cap=3)
        with pytest.raises(ValidationError):
            drift(chain, lambda x: 0.0, [4, 0])
        with pytest.raises(ValidationError):
            drift(chain, lambda x: 0.0, [1, -1])

    def test_zero_mean_under_stationary_law(self):
        g = dandelion(DandelionSpec(n=2, boundary=1, central=1, arrival=0.8))
        chain = build_generator(g, cap=6)
        dist = stationary(chain)
        rng = np.random.default_rng(3)
        for _ in range(5):
            values = rng.uniform(-1, 1, size=chain.n_states)
            assert check_zero_mean_drift(chain, dist, values) < 1e-8
        # Callable form agrees with the array form.
        total = lambda x: float(x.sum()) / (3 * chain.cap)
        arr = np.array([total(chain.states[i]) for i in range(chain.n_states)])
        assert check_zero_mean_drift(chain, dist, total) == pytest.approx(
            check_zero_mean_drift(chain, dist, arr))


class TestArgminQuantities:
    def test_minimizer_probability_single_server(self):
        chain = build_generator(basic_graph(1, 0.5), cap=10)
        dist = stationary(chain)
        assert minimizer_probability(chain, dist, 0, 0) == pytest.approx(1.0)

    def test_minimizer_probabilities_cover_ties(self):
        chain, dist = basic_jsq_stationary(2, 0.8, 1.0, cap=8)
        p0 = minimizer_probability(chain, dist, 0, 0)
        p1 = minimizer_probability(chain, dist, 0, 1)
        occ = chain.states.astype(np.int64)
        p_tie = float(dist.pi[occ[:, 0] == occ[:, 1]].sum())
        assert p0 == pytest.approx(p1, abs=1e-9)
        assert p0 + p1 == pytest.approx(1.0 + p_tie, abs=1e-9)

    def test_incompatible_pair_rejected(self):
        g = dandelion(DandelionSpec(n=2, boundary=1, central=1, arrival=0.5))
        chain = build_generator(g, cap=2)
        dist = stationary(chain)
        with pytest.raises(ValidationError):
            minimizer_probability(chain, dist, 0, 2)  # dispatcher 1's boundary

    def test_min_rate_inequality_on_dandelion(self):
        g = dandelion(DandelionSpec(n=2, boundary=1, central=1, arrival=0.9))
        chain = build_generator(g, cap=8)
        dist = stationary(chain)
        for u in range(g.n_servers):
            res = check_min_rate_inequality(chain, dist, u)
            assert res.holds
            assert res.lhs <= res.service_rate + 1e-9

    def test_m_count_matches_enumeration(self):
        g = dandelion(DandelionSpec(n=2, boundary=1, central=1, arrival=0.7))
        chain = build_generator(g, cap=4)
        dist = stationary(chain)
        # Oracle: P(central is among dispatcher argmins), state by state.
        total = 0.0
        for i in range(chain.n_states):
            x = chain.states[i]
            for d, nd in enumerate(chain.graph.dispatcher_neighborhoods):
                m = min(x[u] for u in nd)
                if x[0] == m:  # server 0 is the only central
                    total += float(dist.pi[i])
        assert m_count_expectation(chain, dist, [0]) == pytest.approx(total, abs=1e-12)


class TestMarginals:
    def test_marginal_of_everything_is_pi(self):
        g = dandelion(DandelionSpec(n=2, boundary=1, central=1, arrival=0.6))
        chain = build_generator(g, cap=3)
        dist = stationary(chain)
        full = marginal(chain, dist, [0, 1, 2])
        assert np.allclose(full.ravel(), dist.pi)

    def test_marginal_sums_to_one_and_symmetry(self):
        chain, dist = basic_jsq_stationary(2, 0.9, 1.0, cap=10)
        m0 = marginal(chain, dist, [0])
        m1 = marginal(chain, dist, [1])
        assert m0.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(m0, m1, atol=1e-9)

    def test_tv_distance_basics(self):
        p = np.array([0.5, 0.5])
        q = np.array([1.0, 0.0])
        assert tv_distance(p, p) == 0.0
        assert tv_distance(p, q) == pytest.approx(0.5)
        with pytest.raises(ValidationError):
            tv_distance(p, np.array([1.0]))


class TestConvergenceTable:
    def test_rows_shrink_toward_independence(self):
        rows = boundary_convergence_table([2, 3], boundary=1, central=1,
                                          arrival=0.9, service=1.0, cap=5)
        assert [r.n for r in rows] == [2, 3]
        assert rows[1].marginal_tv < rows[0].marginal_tv
        assert rows[1].joint_tv < rows[0].joint_tv
        for r in rows:
            assert r.m_count <= r.m_count_bound
            assert 0 <= r.boundary_mass < 1

    def test_input_validation(self):
        with pytest.raises(ValidationError):
            boundary_convergence_table([1, 2], 1, 1, 0.5, 1.0, 4)
        with pytest.raises(ValidationError):
            boundary_convergence_table([2], 0, 1, 0.5, 1.0, 4)
