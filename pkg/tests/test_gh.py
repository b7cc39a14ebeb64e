from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpdms.core import FiniteMetricSpace
from fpdms.embedding import PointConfig, hausdorff_distance, recover_metric
from fpdms.errors import BudgetExceededError, FPDMSError, NotClusteredError
from fpdms.gh import (
    ClusterType,
    Verdict,
    cluster_partition,
    cluster_type,
    distortion,
    gh_distance_exact,
    theorem_region,
    type_leq,
)

from conftest import brute_force_gh, random_metric

ONE = FiniteMetricSpace([[0.0]])


def two(d):
    return FiniteMetricSpace([[0, d], [d, 0]])


def line(*xs):
    x = np.array(xs, float)
    return FiniteMetricSpace(np.abs(x[:, None] - x[None, :]))


class TestExactGH:
    def test_identity(self):
        X = line(0, 1, 3)
        value, pair = gh_distance_exact(X, X)
        assert value == 0.0
        assert pair.f == (0, 1, 2) and pair.g == (0, 1, 2)

    def test_singleton_vs_pair(self):
        value, pair = gh_distance_exact(ONE, two(2.0))
        assert value == 1.0
        assert pair.distortion == 2.0

    def test_two_pairs(self):
        value, _ = gh_distance_exact(two(1.0), two(1.2))
        assert value == pytest.approx(0.1, abs=1e-15)

    def test_witness_attains_value(self):
        rng = np.random.default_rng(5)
        X, Xp = random_metric(rng, 4), random_metric(rng, 3)
        value, pair = gh_distance_exact(X, Xp)
        assert distortion(X, Xp, pair.f, pair.g) == pytest.approx(2 * value, abs=0)

    def test_budget(self):
        X = line(*range(7))
        with pytest.raises(BudgetExceededError):
            gh_distance_exact(X, ONE)
        assert gh_distance_exact(X, ONE, max_size=7)[0] == pytest.approx(3.0)

    @pytest.mark.parametrize("seed", range(60))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        X = random_metric(rng, int(rng.integers(1, 5)))
        Xp = random_metric(rng, int(rng.integers(1, 5)))
        value, pair = gh_distance_exact(X, Xp)
        ref, arg = brute_force_gh(X, Xp)
        assert value == ref
        assert (pair.f, pair.g) == arg

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_symmetric_and_diameter_bound(self, seed):
        rng = np.random.default_rng(seed)
        X = random_metric(rng, int(rng.integers(1, 5)))
        Xp = random_metric(rng, int(rng.integers(1, 5)))
        a, _ = gh_distance_exact(X, Xp)
        b, _ = gh_distance_exact(Xp, X)
        assert abs(a - b) <= 1e-12
        assert a >= 0.5 * abs(X.diameter - Xp.diameter) - 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_triangle(self, seed):
        rng = np.random.default_rng(seed)
        X, Y, Z = (random_metric(rng, int(rng.integers(1, 5))) for _ in range(3))
        xy, yz, xz = gh_distance_exact(X, Y)[0], gh_distance_exact(Y, Z)[0], gh_distance_exact(X, Z)[0]
        assert xz <= xy + yz + 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_relabeling_is_zero(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 6))
        X = random_metric(rng, n)
        perm = rng.permutation(n)
        Xp = FiniteMetricSpace(X.d[np.ix_(perm, perm)])
        assert gh_distance_exact(X, Xp)[0] == 0.0

    def test_gh_vanishes_with_hausdorff(self):
        # labeled sweep: configs converge in Hausdorff distance, so the recovered spaces converge in GH
        base = np.array([[0, 0, 0], [0.3, 0, 0], [0.1, 0.25, 0]])
        direction = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) * 0.5
        X = recover_metric(base)
        hs, gs = [], []
        for j in range(2, 10):
            h = 2.0**-j
            Y = PointConfig(base + h * direction)
            hs.append(hausdorff_distance(Y, base))
            gs.append(gh_distance_exact(recover_metric(Y), X)[0])
        # labels are kept, so the distortion is at most Lip(phi) * 2h and phi' < 1 on these lengths
        assert all(g <= h for g, h in zip(gs, hs))
        assert gs[-1] < 0.05 * gs[0]


class TestClusterPartition:
    def test_line(self):
        p = cluster_partition(line(0, 0.01, 1), 0.1)
        assert p.blocks == ((0, 1), (2,))

    def test_all_singletons(self):
        X = line(0, 1, 3, 7)
        p = cluster_partition(X, 0.5 * X.min_distance)
        assert cluster_type(p) == ClusterType((0, 0, 0, 0))

    def test_clique(self):
        d = 0.05 * (1 - np.eye(3))
        p = cluster_partition(FiniteMetricSpace(d), 0.1)
        assert p.blocks == ((0, 1, 2),)

    def test_not_transitive(self):
        with pytest.raises(NotClusteredError) as exc:
            cluster_partition(line(0, 0.08, 0.16), 0.1)
        assert exc.value.witness == (0, 1, 2)

    def test_reference_default_epsilon(self):
        ref = line(0, 1)
        X = line(0, 0.1, 1, 1.05)
        p = cluster_partition(X, reference=ref)
        assert p.epsilon == 0.25 and p.delta0 == 1.0
        assert p.blocks == ((0, 1), (2, 3))

    def test_point_config_input(self):
        Y = PointConfig([[0, 0], [0.01, 0], [1, 0]])
        assert cluster_partition(Y, 0.1).blocks == ((0, 1), (2,))

    def test_needs_epsilon(self):
        with pytest.raises(FPDMSError):
            cluster_partition(line(0, 1))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(1, 5), min_size=1, max_size=5), st.integers(0, 2**31 - 1))
    def test_recovers_planted_clusters(self, sizes, seed):
        rng = np.random.default_rng(seed)
        pts = []
        for i, size in enumerate(sizes):
            center = np.array([10.0 * i, 0.0])
            pts += list(center + 0.01 * rng.standard_normal((size, 2)))
        p = cluster_partition(PointConfig(pts), 1.0)
        assert cluster_type(p) == ClusterType(tuple(sorted((s - 1 for s in sizes), reverse=True)))


class TestClusterType:
    def test_sizes(self):
        assert cluster_type_of([2, 1]) == ClusterType((1, 0))
        assert cluster_type_of([5]) == ClusterType((4,))
        assert cluster_type_of([2, 2, 2]) == ClusterType((1, 1, 1))

    def test_parse_and_str(self):
        r = ClusterType.parse("<3,0>")
        assert r.r == (3, 0) and str(r) == "<3,0>" and r.norm1 == 3

    @pytest.mark.parametrize("bad", [(0, 1), (-1,), (2, 3, 1)])
    def test_invalid(self, bad):
        with pytest.raises(FPDMSError):
            ClusterType(bad)

    def test_leq(self):
        assert type_leq(ClusterType((1, 0)), ClusterType((2, 1)))
        assert not type_leq(ClusterType((3,)), ClusterType((2, 1)))
        for r in [(0,), (1, 1), (4, 2, 0)]:
            assert type_leq(ClusterType(r), ClusterType(r))

    def test_leq_pads(self):
        assert type_leq(ClusterType((2,)), ClusterType((2, 1)))
        assert not type_leq(ClusterType((2, 1)), ClusterType((2,)))


def cluster_type_of(sizes):
    blocks, start = [], 0
    for s in sizes:
        blocks.append(tuple(range(start, start + s)))
        start += s
    from fpdms.gh import ClusterPartition

    return cluster_type(ClusterPartition(tuple(blocks), 1.0))


class TestTheoremRegion:
    @pytest.mark.parametrize(
        "r,k,expected",
        [
            ((1, 1), 5, Verdict.CONTINUOUS),
            ((3,), 1, Verdict.CONTINUOUS),
            ((2, 1), 2, Verdict.DISCONTINUOUS_POSSIBLE),
            ((3, 0), 2, Verdict.DISCONTINUOUS_POSSIBLE),
            ((4,), 1, Verdict.DISCONTINUOUS_POSSIBLE),
            ((1, 1, 1), 3, Verdict.DISCONTINUOUS_POSSIBLE),
            ((2,), 1, Verdict.CONTINUOUS),
            ((0, 0, 0), 3, Verdict.CONTINUOUS),
        ],
    )
    def test_cases(self, r, k, expected):
        assert theorem_region(ClusterType(r), k) is expected

    def test_label(self):
        assert Verdict.DISCONTINUOUS_POSSIBLE.value == "DISCONTINUOUS-POSSIBLE"

    def test_exhaustive_small(self):
        for r in itertools.product(range(4), repeat=3):
            if list(r) != sorted(r, reverse=True):
                continue
            for k in (1, 2, 3):
                v = theorem_region(ClusterType(r), k)
                n = sum(r)
                assert (v is Verdict.CONTINUOUS) == (n <= 2 or (n == 3 and k == 1))
