from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpdms.core import random_fpdms
from fpdms.embedding import PointConfig, circumsphere, embed, is_similarity_embedding
from fpdms.errors import DomainError, HypothesisViolation, UnreachableTypeError
from fpdms.families import FamilySpec
from fpdms.gh import ClusterType, cluster_partition, cluster_type
from fpdms.lemmas import (
    PushConstants,
    add_point_rotation,
    amplification_plan,
    amplify_type,
    check_amplified,
    continuous_region_sweep,
    four_point_ratio,
    lower_expression,
    lower_threshold_exact,
    max_dilation,
    max_rotation_angle,
    push_apex,
    push_apex_dilate,
    push_hypotheses,
    rotation_frame,
    rotation_radius,
    sample_four_point_configs,
    stability_ratios,
    two_point_perturbation,
)

EQUI = PointConfig([[0, 0], [0.5, 0], [0.25, math.sqrt(3) / 4]])


def small_embedding(n, seed):
    return embed(random_fpdms(n, seed=seed))


class TestRotation:
    def test_keeps_distances_to_others(self):
        Y = small_embedding(4, 1)
        Z = add_point_rotation(Y, 0.3, 2)
        P = Z.points
        for i in (0, 1, 3):
            assert np.linalg.norm(P[4] - P[i]) == pytest.approx(np.linalg.norm(P[2] - P[i]), abs=1e-12)

    def test_copy_distance(self):
        Y = small_embedding(3, 2)
        fr = rotation_frame(Y, 0)
        t = 0.4
        Z = add_point_rotation(Y, t, 0)
        assert np.linalg.norm(Z.points[0] - Z.points[-1]) == pytest.approx(2 * fr.a * math.sin(t / 2), abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 2**31 - 1), st.floats(1e-3, 1.5))
    def test_radius_formula(self, n, seed, t):
        Y = small_embedding(n, seed)
        idx = seed % n
        Z = add_point_rotation(Y, t, idx)
        assert circumsphere(Z).radius == pytest.approx(rotation_radius(Y, t, idx), abs=1e-10)

    @pytest.mark.parametrize("t", [0.0, -0.1, math.pi])
    def test_angle_domain(self, t):
        with pytest.raises(DomainError):
            add_point_rotation(EQUI, t)

    def test_singleton(self):
        with pytest.raises(DomainError):
            rotation_frame(PointConfig([[1.0, 0.0]]))

    def test_adds_one_to_a_cluster(self):
        Y = small_embedding(3, 7)
        Z = add_point_rotation(Y, 1e-3, 1)
        p = cluster_partition(Z, reference=Y.padded(Z.dim))
        assert cluster_type(p) == ClusterType((1, 0, 0))

    def test_max_angle_is_admissible(self):
        Y = small_embedding(4, 3)
        t = max_rotation_angle(Y, 0)
        assert is_similarity_embedding(add_point_rotation(Y, t, 0))


class TestPush:
    def setup_method(self):
        self.Y2 = small_embedding(3, 11)
        self.Y1 = PointConfig(self.Y2.points[:1])

    def test_hypotheses_hold_for_defaults(self):
        consts = PushConstants.for_configs(self.Y1, self.Y2)
        assert push_hypotheses(self.Y1, self.Y2, consts) == []

    def test_failed_hypotheses_named(self):
        c = PushConstants.for_configs(self.Y1, self.Y2)
        bad = push_hypotheses(self.Y1, self.Y2, PushConstants(c.c0, c.c1, 3.0, 0.1))
        assert "c2 <= 2" in bad and "1/c0 + sqrt(1/c0^2 - 1) < c3" in bad

    def test_not_subset(self):
        other = PointConfig([[5.0, 5.0, 5.0]])
        consts = PushConstants.for_configs(self.Y1, self.Y2)
        with pytest.raises(HypothesisViolation) as exc:
            push_apex_dilate(other, self.Y2, consts=consts)
        assert "Y1 subset of Y2" in exc.value.names

    def test_two_point_y2_has_diameter_two_rho(self):
        # a pair has diam = 2 rho, so no c2 <= 2 gives a strict inequality
        Y2 = small_embedding(2, 0)
        consts = PushConstants.for_configs(PointConfig(Y2.points[:1]), Y2)
        assert push_hypotheses(PointConfig(Y2.points[:1]), Y2, consts) == ["diam Y2 < c2 rho_Y2"]

    def test_apex_equidistant(self):
        _, Y2p, apex = push_apex(self.Y1, self.Y2, 2.0)
        d = np.linalg.norm(Y2p.points[:-1] - apex, axis=1)
        assert np.ptp(d) < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.integers(3, 6), st.integers(0, 2**31 - 1), st.floats(0.1, 0.9))
    def test_similar_triangles(self, n, seed, u):
        Y2 = small_embedding(n, seed)
        Y1 = PointConfig(Y2.points[: max(1, n // 2)])
        res = push_apex_dilate(Y1, Y2, u=u)
        assert res.similarity_residual <= 1e-9

    def test_gap_scales_with_u(self):
        a = push_apex_dilate(self.Y1, self.Y2, u=0.5)
        b = push_apex_dilate(self.Y1, self.Y2, u=0.25)
        assert a.radius_gap == pytest.approx(2 * b.radius_gap, rel=1e-9)

    def test_lower_threshold_closed_form(self):
        res = push_apex_dilate(self.Y1, self.Y2)
        c3 = PushConstants.for_configs(self.Y1, self.Y2).c3
        assert res.lower_threshold_actual == pytest.approx(lower_threshold_exact(self.Y2, c3), rel=1e-9)
        _, _, apex = push_apex(self.Y1, self.Y2, c3)
        sq = self.Y2.squared_distances()
        i, j = np.unravel_index(np.argmax(sq), sq.shape)
        assert lower_expression(self.Y2, apex, i, j, 0.99 * res.lower_threshold_actual) > 0

    def test_singleton_y1_printed_bound_is_exact(self):
        res = push_apex_dilate(self.Y1, self.Y2)
        assert res.lower_threshold_printed == pytest.approx(res.lower_threshold_actual, rel=1e-6)

    def test_max_dilation(self):
        # an equilateral triangle of side L is valid iff L < sqrt(2)
        Y = PointConfig(3.0 * EQUI.points)
        assert max_dilation(Y) == pytest.approx(math.sqrt(2) / 1.5, rel=1e-9)
        assert max_dilation(EQUI) == 1.0


class TestAmplify:
    def test_plan(self):
        assert amplification_plan(ClusterType((2, 1)), ClusterType((2, 1, 1))) == (1, (0, 0, 1))
        assert amplification_plan(ClusterType((4,)), ClusterType((5, 0))) == (1, (1, 0))

    @pytest.mark.parametrize("seed,target", [("T21", "<1,0>"), ("T21", "<3>"), ("T30", "<2,1>")])
    def test_unreachable(self, seed, target):
        with pytest.raises(UnreachableTypeError):
            amplification_plan(FamilySpec.certified(seed).cluster_type, ClusterType.parse(target))

    @pytest.mark.parametrize(
        "seed,target",
        [("T4", "<5>"), ("T4", "<4,0>"), ("T21", "<2,1,0>"), ("T21", "<2,1,1>"), ("T30", "<3,0,0>")],
    )
    def test_reaches_target(self, seed, target):
        amp = amplify_type(FamilySpec.certified(seed), target, [2.0**-6, 2.0**-8])
        for t, got, valid in check_amplified(amp):
            assert got == target and valid

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            amplify_type(FamilySpec.certified("T4"), "<5>", [])


class TestContinuity:
    def test_perturbation_size(self):
        Y = small_embedding(3, 4)
        _, hab = two_point_perturbation(Y, 1e-3)
        assert 0 < hab < 1e-2

    def test_stability_bounded(self):
        Y = small_embedding(3, 4)
        rows = stability_ratios(Y, js=range(6, 14))
        ratios = [r.ratio for r in rows]
        assert all(r.valid for r in rows)
        assert max(ratios) / min(ratios) <= 10

    def test_continuous_sweep_converges(self):
        Y = small_embedding(3, 9)
        sweep = continuous_region_sweep(Y, {0: 1, 1: 1}, js=range(5, 11))
        assert sweep.cluster_type == "<1,1,0>"
        r = sweep.ratios()
        assert r[-1] < r[0]

    def test_four_point_bound(self):
        configs = sample_four_point_configs(200, seed=1)
        assert len(configs) == 200
        assert all(is_similarity_embedding(Y) for Y in configs)
        assert max(four_point_ratio(Y) for Y in configs) <= 2

    def test_four_point_regular(self):
        t = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float) * 0.1
        assert four_point_ratio(t) == pytest.approx(math.sqrt(3) / (2 * math.sqrt(2)))
