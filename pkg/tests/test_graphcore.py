import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import linerigidity as lr
from linerigidity import ResourceCapError, ValidationError
from linerigidity.graphcore import (adjacency_matrix, connected_partition_count,
                                    spanning_tree_count)
from linerigidity.rng import SplitMix64

from oracles import prune_trace


def edge_lists(max_n=8, max_edges=12):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                     max_size=max_edges)))


class TestBuild:
    def test_triangle_degrees(self, triangle):
        assert triangle.degrees == (2, 2, 2)

    def test_loop_counts_two(self):
        g = lr.build_multigraph(1, [(0, 0)])
        assert g.degree(0) == 2

    def test_out_of_range_endpoint(self):
        with pytest.raises(ValidationError):
            lr.build_multigraph(2, [(0, 5)])

    @given(edge_lists())
    @settings(max_examples=150, deadline=None)
    def test_degree_sum_is_twice_edges(self, spec):
        n, edges = spec
        g = lr.build_multigraph(n, edges)
        assert sum(g.degrees) == 2 * g.edge_count


class TestTwoCore:
    def test_triangle_is_its_own_core(self, triangle):
        assert lr.two_core(triangle) == triangle

    def test_path_peels_to_nothing(self):
        g = lr.build_multigraph(3, [(0, 1), (1, 2)])
        core = lr.two_core(g)
        assert core.vertex_count == 0 and core.edge_count == 0

    def test_pendant_edge_removed(self, triangle):
        g = lr.build_multigraph(4, [(0, 1), (1, 2), (2, 0), (0, 3)])
        core = lr.two_core(g)
        assert core.vertex_count == 3
        assert sorted(core.edges) == sorted(triangle.edges)

    @given(edge_lists())
    @settings(max_examples=150, deadline=None)
    def test_idempotent_and_monotone(self, spec):
        n, edges = spec
        g = lr.build_multigraph(n, edges)
        core_vertices = lr.two_core_vertices(g)
        core = lr.two_core(g)
        assert lr.two_core(core) == core
        # subgraph relation: core edges map back into g's edge multiset
        back = [(core_vertices[u], core_vertices[v]) for u, v in core.edges]
        pool = list(g.edges)
        for e in back:
            pool.remove(tuple(sorted(e)))
        assert all(core.degree(v) >= 2 for v in range(core.vertex_count))


class TestKernelDecompose:
    def test_theta(self, theta):
        d = lr.kernel_decompose(theta)
        assert d.kernel.vertex_count == 2
        assert list(d.kernel.edges) == [(0, 1)] * 3
        assert sorted(len(p) - 1 for p in d.twopaths) == [2, 2, 3]

    def test_k4_is_its_own_kernel(self, k4):
        d = lr.kernel_decompose(k4)
        assert d.kernel.vertex_count == 4
        assert all(len(p) == 2 for p in d.twopaths)

    def test_pure_cycle(self):
        c5 = lr.build_multigraph(5, [(i, (i + 1) % 5) for i in range(5)])
        d = lr.kernel_decompose(c5)
        assert d.pure_cycle_flag and d.kernel.vertex_count == 0

    def test_rejects_low_degree(self):
        with pytest.raises(ValidationError):
            lr.kernel_decompose(lr.build_multigraph(3, [(0, 1), (1, 2)]))

    def test_rejects_disconnected(self):
        g = lr.build_multigraph(6, [(0, 1), (1, 2), (2, 0),
                                    (3, 4), (4, 5), (5, 3)])
        with pytest.raises(ValidationError):
            lr.kernel_decompose(g)

    def test_roundtrip_on_sampled_cores(self):
        rng = SplitMix64(314)
        params = lr.ModelParams(n=300, lam=Fraction(3))
        for _ in range(10):
            sample = lr.sample_two_core(params, rng)
            if not sample.connected or sample.empty:
                continue
            d = sample.decomposition
            # re-expanding the stored 2-paths reproduces the core exactly
            seen_vertices = set(d.kernel_vertices)
            rebuilt = []
            for path in d.twopaths:
                seen_vertices.update(path)
                rebuilt.extend(tuple(sorted((path[i], path[i + 1])))
                               for i in range(len(path) - 1))
            assert seen_vertices == set(range(d.core.vertex_count))
            assert sorted(rebuilt) == sorted(d.core.edges)
            # kernel vertices are exactly the degree->=3 core vertices
            assert set(d.kernel_vertices) == {
                v for v in range(d.core.vertex_count) if d.core.degree(v) >= 3}
            for path in d.twopaths:
                assert all(d.core.degree(w) == 2 for w in path[1:-1])


class TestPrune:
    def test_k4_unchanged(self, k4):
        d = lr.kernel_decompose(k4)
        assert lr.prune_to_subcubic(d) is d

    def test_k5_prunes_to_nothing(self):
        k5 = lr.build_multigraph(5, [(i, j) for i in range(5)
                                     for j in range(i + 1, 5)])
        out = lr.prune_to_subcubic(lr.kernel_decompose(k5))
        assert out.core.vertex_count == 0
        assert out.kernel.vertex_count == 0
        assert not out.pure_cycle_flag

    def test_petersen_plus_chord_matches_hand_trace(self, petersen):
        g = lr.build_multigraph(10, list(petersen.edges) + [(0, 2)])
        d = lr.kernel_decompose(g)
        pruned = lr.prune_to_subcubic(d)
        # independent step-by-step trace over the kernel edge list
        kernel_core_ids = d.kernel_vertices
        survivors, kept_edges = prune_trace(list(d.kernel.edges),
                                            d.kernel.vertex_count)
        want_core_ids = sorted(kernel_core_ids[v] for v in survivors)
        got_core_ids = sorted(int(pruned.kernel.label_of(v))
                              for v in range(pruned.kernel.vertex_count))
        assert got_core_ids == want_core_ids
        relabel = {kernel_core_ids[v]: i for i, v in enumerate(sorted(survivors))}
        want_edges = sorted(tuple(sorted((relabel[kernel_core_ids[a]],
                                          relabel[kernel_core_ids[b]])))
                            for a, b in kept_edges)
        assert sorted(pruned.kernel.edges) == want_edges

    def test_pruned_kernel_is_cubic_on_samples(self):
        # close to the critical density most kernel degrees are exactly 3,
        # which is the regime the pruning is meant for
        rng = SplitMix64(99)
        params = lr.ModelParams(n=2000, lam=Fraction(3, 2))
        seen_nonempty = 0
        for _ in range(8):
            sample = lr.sample_two_core(params, rng)
            if sample.decomposition is None \
                    or sample.decomposition.kernel.vertex_count == 0:
                continue
            pruned = lr.prune_to_subcubic(sample.decomposition)
            if pruned.kernel.vertex_count:
                seen_nonempty += 1
                assert set(pruned.kernel.degrees) == {3}
                rebuilt = lr.kernel_decompose(pruned.core)
                assert sorted(rebuilt.kernel.edges) == sorted(pruned.kernel.edges)
        assert seen_nonempty > 0


class TestConnectedSubsets:
    def test_star_center(self):
        star = lr.build_multigraph(4, [(0, 1), (0, 2), (0, 3)])
        out = list(lr.enumerate_connected_subsets(star, 0, 2))
        assert sorted(map(sorted, out)) == [[0], [0, 1], [0, 2], [0, 3]]

    def test_triangle_all_supersets(self, triangle):
        out = list(lr.enumerate_connected_subsets(triangle, 0, 3))
        assert len(out) == 4

    def test_k4_count_and_bound(self, k4):
        out = list(lr.enumerate_connected_subsets(k4, 0, 3))
        assert len(out) == 7
        assert 7 <= 1 + 2 * math.e + (2 * math.e) ** 2

    def test_no_duplicates_and_connected(self, petersen):
        seen = set()
        for s in lr.enumerate_connected_subsets(petersen, 0, 4):
            assert s not in seen
            seen.add(s)
            sub = lr.induced_subgraph(petersen, s)
            assert len(lr.connected_components(sub)) == 1


class TestExpansion:
    def test_k4(self, k4):
        assert lr.vertex_expansion_audit(k4, Fraction(1, 2)) == 1

    def test_p4(self):
        p4 = lr.build_multigraph(4, [(0, 1), (1, 2), (2, 3)])
        assert lr.vertex_expansion_audit(p4, Fraction(1, 2)) == Fraction(1, 2)

    def test_single_vertex(self):
        g = lr.build_multigraph(1, [])
        assert lr.vertex_expansion_audit(g, Fraction(1, 2)) == 0

    def test_exact_cap(self):
        g = lr.build_multigraph(25, [(i, i + 1) for i in range(24)])
        with pytest.raises(ResourceCapError):
            lr.vertex_expansion_audit(g, Fraction(1, 2), exact_cap=20)

    def test_sampled_upper_bounds_exact(self, petersen):
        rng = SplitMix64(5)
        exact = lr.vertex_expansion_audit(petersen, Fraction(1, 2))
        for budget in (5, 25, 100):
            sampled = lr.vertex_expansion_audit(petersen, Fraction(1, 2),
                                                mode="sampled",
                                                sample_budget=budget, rng=rng)
            assert sampled >= exact


class TestSpectral:
    def test_k18(self):
        k18 = lr.build_multigraph(18, [(i, j) for i in range(18)
                                       for j in range(i + 1, 18)])
        report = lr.second_adjacency_eigenvalue(k18)
        assert abs(report.second_magnitude - 1.0) < 1e-7
        assert report.top_eigenvalue == 17

    def test_c4(self):
        c4 = lr.build_multigraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        report = lr.second_adjacency_eigenvalue(c4)
        assert abs(report.second_magnitude - 2.0) < 1e-7

    def test_petersen(self, petersen):
        report = lr.second_adjacency_eigenvalue(petersen)
        assert abs(report.second_magnitude - 2.0) < 1e-7

    def test_rejects_irregular(self):
        with pytest.raises(ValidationError):
            lr.second_adjacency_eigenvalue(
                lr.build_multigraph(3, [(0, 1), (1, 2)]))

    def test_matches_dense_oracle_on_regular_samples(self):
        rng = SplitMix64(21)
        for n, d in [(6, 3), (8, 3), (10, 3), (12, 5), (8, 5)]:
            g = lr.sample_regular_simple(n, d, rng)
            report = lr.second_adjacency_eigenvalue(g, tolerance=1e-9)
            eigs = np.linalg.eigvalsh(adjacency_matrix(g))
            want = max(abs(eigs[0]), abs(eigs[-2]))
            assert abs(report.second_magnitude - want) <= 1e-8


class TestEdgeBoundary:
    def test_k4_single(self, k4):
        assert lr.edge_boundary_count(k4, {0}) == 3

    def test_k4_everything(self, k4):
        assert lr.edge_boundary_count(k4, {0, 1, 2, 3}) == 0

    def test_loops_never_counted(self):
        g = lr.build_multigraph(2, [(0, 0), (0, 1)])
        assert lr.edge_boundary_count(g, {0}) == 1

    def test_k18_mixing_inequality(self):
        k18 = lr.build_multigraph(18, [(i, j) for i in range(18)
                                       for j in range(i + 1, 18)])
        for v in range(18):
            assert lr.edge_boundary_count(k18, {v}) == 17 > 17 / 2


class TestCountingBounds:
    def test_spanning_trees_k4(self, k4):
        out = lr.combinatorial_bounds("spanning_trees", graph=k4, want_exact=True)
        assert out.exact == 16
        assert abs(out.bound - math.e * (3 * math.e / 2) ** 3) < 1e-9
        assert out.exact <= out.bound

    def test_spanning_trees_multigraph(self):
        g = lr.build_multigraph(2, [(0, 1), (0, 1), (0, 0)])
        assert spanning_tree_count(g) == 2

    def test_partitions_triangle(self, triangle):
        out = lr.combinatorial_bounds("partitions", graph=triangle,
                                      want_exact=True)
        assert out.exact == 5

    def test_partition_count_ignores_parallel_edges(self):
        simple = lr.build_multigraph(3, [(0, 1), (1, 2)])
        multi = lr.build_multigraph(3, [(0, 1), (0, 1), (1, 2), (1, 1)])
        assert connected_partition_count(simple) == connected_partition_count(multi)

    def test_partitions_hypothesis_violation(self):
        with pytest.raises(ValidationError, match=r"\|V\|\*\*c / 10"):
            lr.combinatorial_bounds("partitions", vertex_count=10,
                                    max_degree=3, c=Fraction(1, 2))

    def test_subgraph_bound_and_exact(self, k4):
        out = lr.combinatorial_bounds("subgraphs", graph=k4, size=3, root=0,
                                      want_exact=True)
        assert out.exact == 3  # {0,1,2}, {0,1,3}, {0,2,3}
        assert out.exact <= out.bound
