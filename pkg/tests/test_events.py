import math
from fractions import Fraction

import pytest

import linerigidity as lr
from linerigidity import ValidationError
from linerigidity.events import (AnchorReport, anchor_census, anchor_check,
                                 subset_stats, write_census_csv)
from linerigidity.rng import SplitMix64

from oracles import core_path_edges_direct


@pytest.fixture
def theta_decomp(theta):
    return lr.kernel_decompose(theta)


@pytest.fixture
def k4_decomp(k4):
    return lr.kernel_decompose(k4)


class TestSubsetStats:
    def test_theta_single_hub(self, theta_decomp):
        hub = theta_decomp.kernel_vertices.index(0)
        stats = subset_stats(theta_decomp, {hub})
        assert stats.kernel_edges == 3
        assert stats.core_path_edges == 7
        assert stats.boundary == 1

    def test_k4_single_vertex(self, k4_decomp):
        stats = subset_stats(k4_decomp, {0})
        assert (stats.kernel_edges, stats.core_path_edges, stats.boundary) \
            == (3, 3, 3)

    def test_empty_subset(self, k4_decomp):
        stats = subset_stats(k4_decomp, set())
        assert (stats.kernel_edges, stats.core_path_edges, stats.boundary) \
            == (0, 0, 0)

    def test_loop_counts_once(self):
        # two triangles joined by a path: kernel has a loop at each end
        g = lr.build_multigraph(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5),
                                    (5, 3), (0, 6), (6, 3)])
        d = lr.kernel_decompose(g)
        stats = subset_stats(d, {0})
        assert stats.kernel_edges == 2  # the loop once plus the bridge edge
        assert stats.boundary == 1

    def test_rejects_non_kernel_vertex(self, k4_decomp):
        with pytest.raises(ValidationError):
            subset_stats(k4_decomp, {9})

    def test_monotone_in_subset(self, theta_decomp, k4_decomp):
        for d in (theta_decomp, k4_decomp):
            k = d.kernel.vertex_count
            rng = SplitMix64(6)
            for _ in range(20):
                small = {v for v in range(k) if rng.random() < 0.4}
                extra = {v for v in range(k) if rng.random() < 0.4}
                a = subset_stats(d, small)
                b = subset_stats(d, small | extra)
                assert a.kernel_edges <= b.kernel_edges
                assert a.core_path_edges <= b.core_path_edges

    def test_identity_against_core_walk(self):
        params = lr.ModelParams(n=400, lam=Fraction(3))
        rng = SplitMix64(44)
        sample = lr.sample_two_core(params, rng)
        d = sample.decomposition
        k = d.kernel.vertex_count
        for _ in range(100):
            subset = {v for v in range(k) if rng.random() < 0.1}
            stats = subset_stats(d, subset)
            assert stats.core_path_edges == core_path_edges_direct(d, subset)


class TestAnchorCheck:
    def test_k4_two_element_witness(self, k4_decomp):
        # any pair has only two outside neighbors
        report = anchor_check(k4_decomp, 0, Fraction(1, 2), 100)
        assert not report.holds
        assert report.witness is not None
        stats = subset_stats(k4_decomp, report.witness)
        assert stats.boundary < 3 \
            or stats.core_path_edges > 0.5 * len(report.witness) * math.log(100)

    def test_theta_hub_fails_on_boundary(self, theta_decomp):
        report = anchor_check(theta_decomp, 0, Fraction(1, 2), 100)
        assert not report.holds
        assert subset_stats(theta_decomp, report.witness).boundary < 3

    def test_vacuous_when_size_bound_below_one(self, theta_decomp):
        report = anchor_check(theta_decomp, 0, Fraction(3, 5), 100)
        assert report.holds and report.reason == "vacuous"

    def test_non_kernel_vertex_distinguished(self, k4_decomp):
        report = anchor_check(k4_decomp, 17, Fraction(1, 2), 100)
        assert not report.holds
        assert report.reason == "vertex-not-in-kernel"

    def test_truncation_flag(self):
        # a kernel big enough that the default exhaustive rule does not apply
        params = lr.ModelParams(n=600, lam=Fraction(3))
        sample = lr.sample_two_core(params, SplitMix64(3))
        d = sample.decomposition
        report = anchor_check(d, 0, Fraction(1, 2), 600, size_cap=2)
        if report.holds:
            assert report.truncated


class TestCensus:
    def test_k4_fraction_zero(self, k4_decomp):
        result = anchor_census(k4_decomp, Fraction(1, 2), 100)
        assert result.fraction == 0

    def test_single_vertex_kernel_is_always_vacuous(self):
        # a one-vertex kernel admits no subset within the strict size bound
        # |S| <= (1-beta)*1, so the census holds vacuously for every beta
        g = lr.build_multigraph(4, [(0, 1), (1, 0), (0, 2), (2, 0),
                                    (0, 3), (3, 0)])
        d = lr.kernel_decompose(g)
        assert d.kernel.vertex_count == 1
        result = anchor_census(d, Fraction(1, 10), 100)
        assert result.fraction == 1
        assert result.reports[0].reason == "vacuous"

    def test_vacuity_returns_one(self, theta_decomp):
        result = anchor_census(theta_decomp, Fraction(3, 5), 100)
        assert result.fraction == 1

    def test_census_consistent_with_checks(self):
        params = lr.ModelParams(n=300, lam=Fraction(3))
        sample = lr.sample_two_core(params, SplitMix64(5))
        d = sample.decomposition
        result = anchor_census(d, Fraction(1, 2), 300, size_cap=3)
        for v in range(d.kernel.vertex_count):
            direct = anchor_check(d, v, Fraction(1, 2), 300, size_cap=3)
            assert (v in result.holding) == direct.holds

    def test_pure_cycle_rejected(self):
        c5 = lr.build_multigraph(5, [(i, (i + 1) % 5) for i in range(5)])
        d = lr.kernel_decompose(c5)
        with pytest.raises(ValidationError):
            anchor_census(d, Fraction(1, 2), 100)

    def test_csv_layout(self, tmp_path, k4_decomp):
        result = anchor_census(k4_decomp, Fraction(1, 2), 100)
        path = tmp_path / "census.csv"
        write_census_csv(path, result)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "vertex,holds,witness_size,truncated"
        assert len(lines) == 1 + k4_decomp.kernel.vertex_count
        assert lines[1].startswith("0,false,1,")
