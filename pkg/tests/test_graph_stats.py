import math
import random

import networkx as nx
import numpy as np
import pytest

from biblionet.errors import DegenerateDataError
from biblionet.graph_stats import (
    AssortativityResult,
    avg_shortest_path,
    betweenness_centrality,
    centrality_table,
    closeness_centrality,
    clustering,
    degree_assortativity,
    degree_centrality,
    fit_power_law,
    largest_component_subgraph,
    per_component_assortativity,
    small_world_check,
)
from biblionet.graphs import GraphKind, WeightedGraph
from oracles import (
    brute_assortativity,
    brute_betweenness,
    brute_closeness,
    brute_degree_centrality,
    random_graph,
    sample_discrete_power_law,
)


def graph_from_edges(edges, extra_nodes=()):
    g = WeightedGraph(GraphKind.COAUTHOR)
    for a, b in edges:
        g.add_pair(a, b)
    g.nodes.update(extra_nodes)
    return g


def path3():
    return graph_from_edges([("a", "b"), ("b", "c")])


def star(leaves=5):
    return graph_from_edges([("hub", f"leaf{i}") for i in range(leaves)])


def complete(n):
    names = [f"v{i}" for i in range(n)]
    g = WeightedGraph(GraphKind.COAUTHOR)
    for i in range(n):
        for j in range(i + 1, n):
            g.add_pair(names[i], names[j])
    return g


def cycle(n):
    names = [f"c{i:04d}" for i in range(n)]
    return graph_from_edges([(names[i], names[(i + 1) % n]) for i in range(n)])


class TestDegreeCentrality:
    def test_path(self):
        assert degree_centrality(path3()) == {"a": 0.5, "b": 1.0, "c": 0.5}

    def test_complete_graph(self):
        assert set(degree_centrality(complete(4)).values()) == {1.0}

    def test_star(self):
        values = degree_centrality(star(5))
        assert values["hub"] == 1.0
        assert values["leaf0"] == pytest.approx(0.2)

    def test_single_node_errors(self):
        g = WeightedGraph(GraphKind.COAUTHOR)
        g.nodes.add("x")
        with pytest.raises(DegenerateDataError):
            degree_centrality(g)


class TestBetweenness:
    def test_path_interior(self):
        assert betweenness_centrality(path3()) == {"a": 0.0, "b": 1.0, "c": 0.0}

    def test_cycle4(self):
        g = graph_from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")])
        for value in betweenness_centrality(g).values():
            assert value == pytest.approx(1 / 6)

    def test_complete_graph_zero(self):
        assert set(betweenness_centrality(complete(5)).values()) == {0.0}

    def test_star_center_is_one(self):
        for leaves in (3, 5, 8):
            assert betweenness_centrality(star(leaves))["hub"] == pytest.approx(1.0)

    def test_small_graphs_all_zero(self):
        assert betweenness_centrality(graph_from_edges([("a", "b")])) == {"a": 0.0, "b": 0.0}

    def test_matches_oracle_on_random_graphs(self):
        for seed in range(25):
            g = random_graph(seed, max_nodes=25)
            mine = betweenness_centrality(g)
            expected = brute_betweenness(g)
            for node in g.nodes:
                assert mine[node] == pytest.approx(expected[node], abs=1e-9)

    def test_sampled_full_coverage_equals_exact(self):
        g = random_graph(77, max_nodes=30)
        exact = betweenness_centrality(g)
        sampled = betweenness_centrality(g, sample_sources=g.node_count, seed=3)
        assert sampled == exact  # bit-identical, not just close

    def test_sampled_is_seeded_and_deterministic(self):
        g = random_graph(78, max_nodes=40)
        a = betweenness_centrality(g, sample_sources=10, seed=5)
        b = betweenness_centrality(g, sample_sources=10, seed=5)
        c = betweenness_centrality(g, sample_sources=10, seed=6)
        assert a == b
        assert a != c

    def test_path_counting_conservation(self):
        # sum of raw dependencies equals sum over ordered pairs of (d-1)
        from oracles import allpairs_matrices
        for seed in (1, 2, 3):
            g = random_graph(seed, max_nodes=20)
            comp = largest_component_subgraph(g)
            n = comp.node_count
            if n < 3:
                continue
            values = betweenness_centrality(comp)
            raw_total = sum(values.values()) * (n - 1) * (n - 2)
            _, dist, _ = allpairs_matrices(comp)
            expected = sum(
                dist[s, t] - 1
                for s in range(n) for t in range(n)
                if s != t and np.isfinite(dist[s, t])
            )
            assert raw_total == pytest.approx(expected, rel=1e-9)


class TestCloseness:
    def test_path_conventional(self):
        values = closeness_centrality(path3())
        assert values["b"] == pytest.approx(1.0)
        assert values["a"] == pytest.approx(2 / 3)

    def test_path_literal_form(self):
        values = closeness_centrality(path3(), literal=True)
        assert values["b"] == pytest.approx(1.5)
        assert values["a"] == pytest.approx(1.0)

    def test_k3_literal_symmetry(self):
        values = closeness_centrality(complete(3), literal=True)
        assert set(values.values()) == {1.5}

    def test_singleton_component_omitted(self):
        g = graph_from_edges([("a", "b")], extra_nodes=["zz"])
        values = closeness_centrality(g)
        assert "zz" not in values
        assert set(values) == {"a", "b"}

    def test_matches_oracle_on_random_graphs(self):
        for seed in range(15):
            g = random_graph(seed + 100, max_nodes=25)
            for literal in (False, True):
                mine = closeness_centrality(g, literal=literal)
                expected = brute_closeness(g, literal=literal)
                assert set(mine) == set(expected)
                for node, value in expected.items():
                    assert mine[node] == pytest.approx(value, abs=1e-9)


class TestClustering:
    def test_triangle(self):
        coeffs, average = clustering(complete(3))
        assert set(coeffs.values()) == {1.0}
        assert average == 1.0

    def test_path_zero(self):
        coeffs, average = clustering(path3())
        assert set(coeffs.values()) == {0.0}
        assert average == 0.0

    def test_k4_minus_edge(self):
        g = graph_from_edges([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
        coeffs, average = clustering(g)
        assert coeffs["a"] == pytest.approx(2 / 3)
        assert coeffs["c"] == pytest.approx(1.0)
        assert average == pytest.approx(5 / 6)

    def test_empty_graph_errors(self):
        with pytest.raises(DegenerateDataError):
            clustering(WeightedGraph(GraphKind.COAUTHOR))

    def test_matches_networkx(self):
        for seed in range(10):
            g = random_graph(seed + 300, max_nodes=30)
            G = nx.Graph()
            G.add_nodes_from(g.nodes)
            G.add_edges_from(g.edges)
            coeffs, average = clustering(g)
            expected = nx.clustering(G)
            for node in g.nodes:
                assert coeffs[node] == pytest.approx(expected[node], abs=1e-12)
            assert average == pytest.approx(nx.average_clustering(G), abs=1e-12)


class TestAvgShortestPath:
    def test_path3(self):
        assert avg_shortest_path(path3()) == pytest.approx(4 / 3)

    def test_complete(self):
        assert avg_shortest_path(complete(6)) == pytest.approx(1.0)

    def test_two_node_edge(self):
        assert avg_shortest_path(graph_from_edges([("a", "b")])) == pytest.approx(1.0)

    def test_computed_on_largest_component(self):
        g = graph_from_edges([("a", "b"), ("b", "c"), ("x", "y")])
        assert avg_shortest_path(g) == pytest.approx(4 / 3)

    def test_sampled_full_coverage_equals_exact(self):
        g = random_graph(55, max_nodes=40)
        exact = avg_shortest_path(g)
        sampled = avg_shortest_path(g, sample_sources=10_000, seed=1)
        assert sampled == exact

    def test_too_small_errors(self):
        g = WeightedGraph(GraphKind.COAUTHOR)
        g.nodes.add("x")
        with pytest.raises(DegenerateDataError):
            avg_shortest_path(g)


class TestSmallWorld:
    def test_k10_consistent(self):
        report = small_world_check(complete(10))
        assert report.avg_shortest_path == pytest.approx(1.0)
        assert report.ln_node_count == pytest.approx(math.log(10))
        assert "small-world-consistent" in report.verdict
        assert not report.sampled

    def test_ring_lattice_not_small_world(self):
        report = small_world_check(cycle(300))
        assert report.avg_shortest_path > 70
        assert "not-small-world" in report.verdict

    def test_clustering_reported_on_largest_component(self):
        g = graph_from_edges([("a", "b"), ("b", "c"), ("a", "c"), ("x", "y")])
        report = small_world_check(g)
        assert report.avg_clustering == pytest.approx(1.0)


class TestFitPowerLaw:
    def test_recovers_seeded_exponent(self):
        degrees = sample_discrete_power_law(2.5, 30_000, seed=123)
        fit = fit_power_law(degrees)
        assert abs(fit.gamma - 2.5) <= 0.05
        assert fit.xmin == 1
        assert fit.n_tail <= degrees.size

    def test_all_equal_errors(self):
        with pytest.raises(DegenerateDataError):
            fit_power_law([3] * 100)

    def test_too_few_samples_errors(self):
        with pytest.raises(DegenerateDataError):
            fit_power_law([1, 2, 3])

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            fit_power_law([0] * 60)

    def test_scale_consistency_under_duplication(self):
        degrees = sample_discrete_power_law(2.3, 5_000, seed=7).tolist()
        once = fit_power_law(degrees)
        twice = fit_power_law(degrees + degrees)
        assert twice.gamma == once.gamma
        assert twice.xmin == once.xmin
        assert twice.n_tail == 2 * once.n_tail

    def test_geometric_sample_fits_worse(self):
        power = sample_discrete_power_law(2.5, 30_000, seed=42)
        rng = np.random.default_rng(42)
        geometric = rng.geometric(0.35, size=30_000)
        assert fit_power_law(geometric).ks_statistic > fit_power_law(power).ks_statistic

    def test_gamma_above_one(self):
        degrees = sample_discrete_power_law(2.5, 5_000, seed=9)
        assert fit_power_law(degrees).gamma > 1.0


class TestAssortativity:
    def test_star_is_minus_one(self):
        result = degree_assortativity(star(5))
        assert result.r == -1.0

    def test_regular_graph_undefined(self):
        assert degree_assortativity(cycle(5)).r is None
        assert degree_assortativity(complete(4)).r is None

    def test_two_disjoint_edges_undefined(self):
        g = graph_from_edges([("a", "b"), ("c", "d")])
        assert degree_assortativity(g).r is None

    def test_edgeless_errors(self):
        g = WeightedGraph(GraphKind.COAUTHOR)
        g.nodes.update("ab")
        with pytest.raises(DegenerateDataError):
            degree_assortativity(g)

    def test_matches_direct_pearson_oracle(self):
        for seed in range(40):
            g = random_graph(seed + 500, max_nodes=30)
            if not g.edges:
                continue  # edgeless graphs raise, covered elsewhere
            result = degree_assortativity(g)
            expected = brute_assortativity(g)
            if expected is None:
                assert result.r is None
            else:
                assert result.r == pytest.approx(expected, abs=1e-12)

    def test_erdos_renyi_near_zero(self):
        # sparse random graphs are nearly unassorted; statistical check
        hits = 0
        for seed in range(100):
            G = nx.fast_gnp_random_graph(2000, 0.005, seed=seed)
            g = WeightedGraph(GraphKind.COAUTHOR)
            g.nodes.update(f"n{i:04d}" for i in G.nodes)
            for a, b in G.edges:
                g.add_pair(f"n{a:04d}", f"n{b:04d}")
            result = degree_assortativity(g)
            if result.r is not None and -0.1 <= result.r <= 0.1:
                hits += 1
        assert hits >= 95


class TestPerComponentAssortativity:
    def test_triangle_single_undefined(self):
        results = per_component_assortativity(complete(3))
        assert results == [AssortativityResult(r=None, component_size=3)]

    def test_star_plus_path_by_brute_force(self):
        g = graph_from_edges([
            ("hub", "l1"), ("hub", "l2"), ("hub", "l3"),   # star, size 4
            ("p1", "p2"), ("p2", "p3"),                    # path, size 3
        ])
        results = per_component_assortativity(g)
        assert [r.component_size for r in results] == [4, 3]
        star_graph = graph_from_edges([("hub", "l1"), ("hub", "l2"), ("hub", "l3")])
        path_graph = graph_from_edges([("p1", "p2"), ("p2", "p3")])
        assert results[0].r == pytest.approx(brute_assortativity(star_graph), abs=1e-12)
        assert results[1].r == pytest.approx(brute_assortativity(path_graph), abs=1e-12)

    def test_empty_graph(self):
        assert per_component_assortativity(WeightedGraph(GraphKind.COAUTHOR)) == []

    def test_isolated_component_undefined(self):
        g = graph_from_edges([("a", "b"), ("b", "c")], extra_nodes=["solo"])
        results = per_component_assortativity(g)
        assert [r.component_size for r in results] == [3, 1]
        assert results[1].r is None


class TestCentralityTable:
    def test_star_hub_tops_every_column(self):
        table = centrality_table(star(5))
        top = table.rows[0]
        assert top.node == "hub"
        assert top.degree == max(row.degree for row in table.rows)
        assert top.betweenness == max(row.betweenness for row in table.rows)
        assert top.closeness == max(row.closeness for row in table.rows)

    def test_k3_rows_identical(self):
        table = centrality_table(complete(3))
        values = {(row.degree, row.betweenness, row.closeness) for row in table.rows}
        assert len(values) == 1

    def test_six_node_fixture_matches_oracles(self):
        g = graph_from_edges([
            ("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("b", "e"), ("e", "f"),
        ])
        table = centrality_table(g)
        deg = brute_degree_centrality(g)
        btw = brute_betweenness(g)
        clo = brute_closeness(g)
        for row in table.rows:
            assert row.degree == pytest.approx(deg[row.node], abs=1e-9)
            assert row.betweenness == pytest.approx(btw[row.node], abs=1e-9)
            assert row.closeness == pytest.approx(clo[row.node], abs=1e-9)

    def test_default_scope_is_largest_component(self):
        g = graph_from_edges([("a", "b"), ("b", "c"), ("x", "y")])
        table = centrality_table(g)
        assert {row.node for row in table.rows} == {"a", "b", "c"}
        whole = centrality_table(g, scope="whole")
        assert {row.node for row in whole.rows} == {"a", "b", "c", "x", "y"}

    def test_sorted_by_betweenness_then_node(self):
        table = centrality_table(star(4))
        assert table.rows[0].node == "hub"
        leaves = [row.node for row in table.rows[1:]]
        assert leaves == sorted(leaves)
