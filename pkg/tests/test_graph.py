"""Graph model, skew filters, ergodicity scan, core search, JSON format."""

import itertools
import json

import numpy as np
import pytest

from skewnet import (
    CompatGraph,
    SimpleGraph,
    SkewParams,
    ValidationError,
    check_ergodicity,
    check_ergodicity_simple,
    find_skewed_core,
    from_json_dict,
    greedy_disjoint_subset,
    joint_skewed_neighborhood,
    load_graph,
    neighborhood_of_dispatcher,
    neighborhood_of_server,
    save_graph,
    skewed_neighborhood,
    to_json_dict,
)
from skewnet.errors import SizeCapError
from skewnet.generators import DandelionSpec, dandelion


def tiny_graph(**overrides):
    """2 dispatchers, 3 servers; dispatcher 0 sees {0,1}, dispatcher 1 sees {1,2}."""
    kw = dict(
        edges=((0, 0), (0, 1), (1, 1), (1, 2)),
        arrival_rate=(1.0, 0.5),
        service_rate=(1.0, 2.0, 1.5),
    )
    kw.update(overrides)
    return CompatGraph(**kw)


class TestValidation:
    def test_duplicate_edges_rejected(self):
        with pytest.raises(ValidationError):
            tiny_graph(edges=((0, 0), (0, 0), (1, 1), (1, 2)))

    def test_dispatcher_without_edges_rejected(self):
        with pytest.raises(ValidationError):
            CompatGraph(edges=((0, 0),), arrival_rate=(1.0, 1.0), service_rate=(2.0,))

    def test_edge_endpoint_out_of_range(self):
        with pytest.raises(ValidationError):
            tiny_graph(edges=((0, 0), (0, 5), (1, 1), (1, 2)))

    def test_negative_arrival_rate_rejected(self):
        with pytest.raises(ValidationError):
            tiny_graph(arrival_rate=(-1.0, 0.5))

    def test_zero_service_rate_rejected(self):
        with pytest.raises(ValidationError):
            tiny_graph(service_rate=(1.0, 0.0, 1.5))

    def test_nan_rate_rejected(self):
        with pytest.raises(ValidationError):
            tiny_graph(arrival_rate=(float("nan"), 0.5))

    def test_partition_must_cover_every_server(self):
        with pytest.raises(ValidationError):
            tiny_graph(departure_partition=((0,), (1,)))

    def test_partition_blocks_must_be_disjoint(self):
        with pytest.raises(ValidationError):
            tiny_graph(departure_partition=((0, 1), (1, 2)))

    def test_block_members_must_share_service_rate(self):
        with pytest.raises(ValidationError):
            tiny_graph(departure_partition=((0, 1), (2,)))

    def test_equal_rate_block_accepted(self):
        g = tiny_graph(service_rate=(2.0, 2.0, 1.5), departure_partition=((0, 1), (2,)))
        assert g.block_rate(0) == 2.0
        assert g.block_of_server[1] == 0

    def test_group_labels_length_checked(self):
        with pytest.raises(ValidationError):
            tiny_graph(server_groups=("a", "b"))

    def test_zero_arrival_rate_allowed(self):
        g = tiny_graph(arrival_rate=(0.0, 0.5))
        assert g.arrival_rate[0] == 0.0


class TestCachedStructure:
    def test_neighborhoods_sorted_ascending(self):
        g = tiny_graph(edges=((0, 1), (0, 0), (1, 2), (1, 1)))
        assert neighborhood_of_dispatcher(g, 0) == (0, 1)
        assert neighborhood_of_dispatcher(g, 1) == (1, 2)
        assert neighborhood_of_server(g, 1) == (0, 1)

    def test_degrees(self):
        g = tiny_graph()
        assert list(g.dispatcher_degrees) == [2, 2]
        assert list(g.server_degrees) == [1, 2, 1]

    def test_unknown_ids_raise(self):
        g = tiny_graph()
        with pytest.raises(ValidationError):
            neighborhood_of_dispatcher(g, 2)
        with pytest.raises(ValidationError):
            neighborhood_of_server(g, -1)

    def test_default_partition_is_singletons(self):
        g = tiny_graph()
        assert g.departure_partition == ((0,), (1,), (2,))


class TestSkewFilters:
    def test_three_filters_applied_jointly(self):
        g = tiny_graph()
        # peak service: d0 -> max(1.0, 2.0) = 2.0; d1 -> max(2.0, 1.5) = 2.0
        assert skewed_neighborhood(g, 1, SkewParams(2, 0.0, 2.0)) == (0, 1)
        assert skewed_neighborhood(g, 1, SkewParams(1, 0.0, 2.0)) == ()
        assert skewed_neighborhood(g, 1, SkewParams(2, 0.6, 2.0)) == (0,)
        assert skewed_neighborhood(g, 1, SkewParams(2, 0.0, 1.9)) == ()

    def test_brute_force_agreement(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n_d, n_s = 4, 5
            edges = []
            for d in range(n_d):
                nbrs = rng.choice(n_s, size=rng.integers(1, n_s + 1), replace=False)
                edges += [(d, int(u)) for u in nbrs]
            g = CompatGraph(
                edges=tuple(edges),
                arrival_rate=tuple(rng.uniform(0.1, 2.0, n_d)),
                service_rate=tuple(rng.uniform(0.5, 3.0, n_s)),
            )
            params = SkewParams(3, 0.5, 2.2)
            for u in range(n_s):
                expected = tuple(
                    d for d in neighborhood_of_server(g, u)
                    if len(neighborhood_of_dispatcher(g, d)) <= 3
                    and g.arrival_rate[d] >= 0.5
                    and max(g.service_rate[w] for w in neighborhood_of_dispatcher(g, d)) <= 2.2
                )
                assert skewed_neighborhood(g, u, params) == expected

    def test_joint_is_intersection(self):
        g = dandelion(DandelionSpec(n=3, boundary=2, central=2, arrival=1.0))
        params = SkewParams(4, 0.0, 1.0)
        a = set(skewed_neighborhood(g, 0, params))
        b = set(skewed_neighborhood(g, 1, params))
        assert set(joint_skewed_neighborhood(g, [0, 1], params)) == a & b

    def test_joint_empty_beyond_degree_bound(self):
        # More servers than any qualifying dispatcher could cover.
        g = dandelion(DandelionSpec(n=3, boundary=1, central=2, arrival=1.0))
        assert joint_skewed_neighborhood(g, [0, 1, 2], SkewParams(2, 0.0, 1.0)) == ()

    def test_joint_needs_servers(self):
        with pytest.raises(ValidationError):
            joint_skewed_neighborhood(tiny_graph(), [], SkewParams(2, 0.0, 2.0))


def ergodicity_oracle(g):
    """Independent subset enumeration, small graphs only."""
    n_s = g.n_servers
    nbhd = [set(neighborhood_of_dispatcher(g, d)) for d in range(g.n_dispatchers)]
    verdict = "ergodic"
    for r in range(1, n_s + 1):
        for combo in itertools.combinations(range(n_s), r):
            u = set(combo)
            lhs = sum(g.arrival_rate[d] for d in range(g.n_dispatchers) if nbhd[d] <= u)
            rhs = sum(g.service_rate[w] for w in combo)
            if lhs > rhs:
                return "unstable"
            if lhs == rhs:
                verdict = "inconclusive"
    return verdict


class TestErgodicity:
    def test_single_queue_cases(self):
        mk = lambda lam, mu: CompatGraph(
            edges=((0, 0),), arrival_rate=(lam,), service_rate=(mu,))
        assert check_ergodicity(mk(1.0, 2.0)).status == "ergodic"
        r = check_ergodicity(mk(3.0, 2.0))
        assert r.status == "unstable"
        assert r.witness == (0,)
        assert r.witness_arrival == 3.0
        assert r.witness_service == 2.0
        assert check_ergodicity(mk(2.0, 2.0)).status == "inconclusive"
        assert not check_ergodicity(mk(2.0, 2.0)).is_ergodic

    def test_random_graphs_match_oracle(self):
        rng = np.random.default_rng(11)
        seen = set()
        for trial in range(60):
            n_d = int(rng.integers(1, 5))
            n_s = int(rng.integers(1, 5))
            edges = []
            for d in range(n_d):
                nbrs = rng.choice(n_s, size=rng.integers(1, n_s + 1), replace=False)
                edges += [(d, int(u)) for u in nbrs]
            # Mix of float rates and small integers so exact ties do occur.
            if trial % 3 == 0:
                arr = tuple(float(v) for v in rng.integers(1, 4, n_d))
                srv = tuple(float(v) for v in rng.integers(1, 4, n_s))
            else:
                arr = tuple(rng.uniform(0.1, 3.0, n_d))
                srv = tuple(rng.uniform(0.1, 3.0, n_s))
            g = CompatGraph(edges=tuple(edges), arrival_rate=arr, service_rate=srv)
            res = check_ergodicity(g)
            assert res.status == ergodicity_oracle(g)
            seen.add(res.status)
            if res.status != "ergodic":
                # Witness must reproduce the reported sums exactly.
                w = set(res.witness)
                lhs = 0.0
                for d in range(n_d):
                    if set(neighborhood_of_dispatcher(g, d)) <= w:
                        lhs += float(g.arrival_rate[d])
                rhs = sum(float(g.service_rate[u]) for u in sorted(w))
                assert lhs == res.witness_arrival
                assert rhs == res.witness_service
        assert seen == {"ergodic", "unstable", "inconclusive"}

    def test_dandelion_threshold_scales_with_n(self):
        # Finite n: total capacity n*b + c against n*lam.
        mu, b, c = 1.0, 1, 1
        for n in (2, 4):
            edge = mu * (b + c / n)
            below = dandelion(DandelionSpec(n=n, boundary=b, central=c, arrival=edge - 0.01))
            above = dandelion(DandelionSpec(n=n, boundary=b, central=c, arrival=edge + 0.01))
            assert check_ergodicity(below).status == "ergodic"
            assert check_ergodicity(above).status == "unstable"

    def test_server_cap_enforced(self):
        g = dandelion(DandelionSpec(n=4, boundary=2, central=2, arrival=1.0))
        with pytest.raises(SizeCapError):
            check_ergodicity(g, max_servers=5)
        assert check_ergodicity(g).status == "ergodic"

    def test_simple_graph_condition(self):
        sg = SimpleGraph(n_nodes=3, edges=((0, 1), (1, 2)),
                         arrival_rate=(0.5, 0.5, 0.5), service_rate=(1.0, 1.0, 1.0))
        assert check_ergodicity_simple(sg)
        sg2 = SimpleGraph(n_nodes=3, edges=((0, 1), (1, 2)),
                          arrival_rate=(0.5, 1.5, 0.5), service_rate=(1.0, 1.0, 1.0))
        assert not check_ergodicity_simple(sg2)


class TestSimpleGraph:
    def test_edges_normalized_and_sorted(self):
        sg = SimpleGraph(n_nodes=4, edges=((2, 1), (3, 0)),
                         arrival_rate=(1.0,) * 4, service_rate=(2.0,) * 4)
        assert sg.edges == ((0, 3), (1, 2))
        assert list(sg.degrees()) == [1, 1, 1, 1]

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError):
            SimpleGraph(n_nodes=2, edges=((0, 0),),
                        arrival_rate=(1.0, 1.0), service_rate=(2.0, 2.0))

    def test_duplicate_undirected_edge_rejected(self):
        with pytest.raises(ValidationError):
            SimpleGraph(n_nodes=2, edges=((0, 1), (1, 0)),
                        arrival_rate=(1.0, 1.0), service_rate=(2.0, 2.0))


class TestCoreSearch:
    def test_greedy_subset_keeps_pairwise_disjoint(self):
        g = dandelion(DandelionSpec(n=5, boundary=2, central=1, arrival=0.5))
        kept = greedy_disjoint_subset(g, centers=[0], pool=range(5))
        # All dandelion dispatchers only overlap at the central server.
        assert kept == (0, 1, 2, 3, 4)

    def test_greedy_subset_knockout_order(self):
        # d0 and d1 share server 1 (not a center): earliest id wins.
        g = CompatGraph(
            edges=((0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 3)),
            arrival_rate=(1.0, 1.0, 1.0),
            service_rate=(1.0, 1.0, 1.0, 1.0),
        )
        assert greedy_disjoint_subset(g, centers=[0], pool=[0, 1, 2]) == (0, 2)
        assert greedy_disjoint_subset(g, centers=[0, 1], pool=[0, 1, 2]) == (0, 1, 2)

    def test_greedy_subset_size_guarantee(self):
        # Every knocked-out dispatcher shares a server with some kept one,
        # so |pool| <= |kept| * (1 + a * b_star).
        rng = np.random.default_rng(23)
        for _ in range(20):
            n_d, n_s = 12, 8
            edges = []
            for d in range(n_d):
                nbrs = rng.choice(n_s, size=rng.integers(1, 4), replace=False)
                edges += [(d, int(u)) for u in nbrs]
            g = CompatGraph(
                edges=tuple(edges),
                arrival_rate=(1.0,) * n_d,
                service_rate=(1.0,) * n_s,
            )
            pool = list(range(n_d))
            kept = greedy_disjoint_subset(g, centers=[0], pool=pool)
            a = max(len(neighborhood_of_dispatcher(g, d)) for d in pool)
            b_star = max(len(neighborhood_of_server(g, u)) for u in range(n_s))
            assert len(pool) <= len(kept) * (1 + a * b_star)
            for i, d in enumerate(kept):
                for e in kept[i + 1:]:
                    shared = set(neighborhood_of_dispatcher(g, d)) & set(
                        neighborhood_of_dispatcher(g, e))
                    assert shared <= {0}

    def test_core_search_recovers_dandelion_centers(self):
        g = dandelion(DandelionSpec(n=8, boundary=3, central=4, arrival=1.0))
        core, disp = find_skewed_core(g, 0, SkewParams(7, 0.5, 1.0))
        assert core == (0, 1, 2, 3)
        assert disp == tuple(range(8))

    def test_core_search_stops_on_drop(self):
        # Seeding from a boundary server: only its own dispatcher qualifies,
        # and every extension onto another boundary empties the joint set.
        g = dandelion(DandelionSpec(n=8, boundary=3, central=4, arrival=1.0))
        core, disp = find_skewed_core(g, 4, SkewParams(7, 0.5, 1.0))
        assert 4 in core
        assert disp == (0,)

    def test_core_search_validates_inputs(self):
        g = tiny_graph()
        with pytest.raises(ValidationError):
            find_skewed_core(g, 99, SkewParams(2, 0.0, 2.0))
        with pytest.raises(ValidationError):
            find_skewed_core(g, 0, SkewParams(2, 0.0, 2.0), drop_fraction=0.0)


class TestJsonFormat:
    def test_round_trip_preserves_everything(self, tmp_path):
        g = dandelion(DandelionSpec(n=3, boundary=2, central=1, arrival=0.7))
        doc = to_json_dict(g)
        g2 = from_json_dict(doc)
        assert g2.edges == g.edges
        assert np.array_equal(g2.arrival_rate, g.arrival_rate)
        assert np.array_equal(g2.service_rate, g.service_rate)
        assert g2.departure_partition == g.departure_partition
        assert g2.server_groups == g.server_groups
        assert g2.meta == g.meta

        p = tmp_path / "g.json"
        save_graph(g, p)
        g3 = load_graph(p)
        assert g3.edges == g.edges
        assert json.loads(p.read_text())["dispatchers"] == [0, 1, 2]

    def test_missing_field_rejected(self):
        doc = to_json_dict(tiny_graph())
        del doc["service_rate"]
        with pytest.raises(ValidationError):
            from_json_dict(doc)

    def test_sparse_server_ids_rejected(self):
        doc = to_json_dict(tiny_graph())
        doc["servers"] = [0, 1, 3]
        with pytest.raises(ValidationError):
            from_json_dict(doc)
