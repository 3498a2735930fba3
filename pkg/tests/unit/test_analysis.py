"""
Unit tests for weak values, weak traces and the exclusive-path argument.
"""
from math import asin, sin

import numpy as np
import pytest

from src.analysis import (
    conclusive_branch_traces,
    contradiction_demo,
    exclusive_path_argument,
    f_passage_check,
    passage_points,
    phase_scan,
    solo_path_probability,
    trajectory_asymmetry,
    weak_trace_report,
    weak_value,
    weak_value_report,
)
from src.analysis.reports import ExclusivityVerdict
from src.core.exceptions import ConfigurationError, PhysicsAssertionError, PostselectionError
from src.interferometer.config import MarkerSpec, NestedMziConfig, equal_markers
from src.interferometer.network import Stage, evolve
from src.qcore.operations import condition_on_mode, reduced_marker_state
from src.qcore.state import ModeLabel

L = ModeLabel


@pytest.mark.unit
class TestWeakValues:

    @pytest.mark.parametrize("segment, expected", [
        (L.C, 1.0), (L.A, -1.0), (L.B, 1.0), (L.E, 0.0), (L.F, 0.0), (L.G, 0.0),
    ])
    def test_tuned_network_at_d(self, default_config, segment, expected):
        value = weak_value(default_config, segment, L.D)
        assert abs(value - expected) < 1e-12

    def test_slice_sum_rule(self, default_config):
        report = weak_value_report(default_config, L.D)
        assert [s.stage for s in report.slices] == ["post-BS1", "post-markers-phases", "post-BS3"]
        for time_slice in report.slices:
            assert abs(time_slice.total.to_complex() - 1.0) < 1e-12

    @pytest.mark.parametrize("config", [
        NestedMziConfig(),
        NestedMziConfig(t3=0.45),
        NestedMziConfig(t1=0.4, t2=0.3, phases={L.A: 0.7, L.C: 2.1}),
    ])
    def test_consistency_between_slices(self, config):
        report = weak_value_report(config, L.D)
        w_e = report.value(L.E)
        w_a, w_b = report.value(L.A), report.value(L.B)
        w_f, w_g = report.value(L.F), report.value(L.G)
        assert abs(w_e - (w_a + w_b)) < 1e-12
        assert abs((w_f + w_g) - (w_a + w_b)) < 1e-12
        for time_slice in report.slices:
            assert abs(time_slice.total.to_complex() - 1.0) < 1e-12

    def test_detuned_bs3_exposes_e_and_f(self):
        config = NestedMziConfig(t3=0.45)
        w_e = weak_value(config, L.E, L.D)
        w_f = weak_value(config, L.F, L.D)
        assert w_e.real == pytest.approx(0.0910, abs=5e-4)
        assert abs(w_e - w_f) < 1e-12

    def test_markers_are_rejected(self, marked_config):
        with pytest.raises(ConfigurationError):
            weak_value(marked_config, L.C, L.D)

    def test_zero_postselection(self, default_config):
        with pytest.raises(PostselectionError):
            weak_value(default_config.with_blocked({L.A, L.B, L.C}), L.C, L.D)

    def test_sink_is_not_a_postselection_port(self, default_config):
        with pytest.raises(ConfigurationError):
            weak_value(default_config, L.C, L.SINK)


@pytest.mark.unit
class TestWeakTraces:

    def test_equal_traces_on_a_b_c(self, marked_config):
        report = weak_trace_report(marked_config, L.D)
        expected = 0.01 / 1.02
        p = {trace.location: trace.excitation_probability for trace in report.markers}
        for location in (L.A, L.B, L.C):
            assert p[location] == pytest.approx(expected, abs=1e-12)
        assert abs(p[L.A] - p[L.B]) < 1e-12
        assert abs(p[L.B] - p[L.C]) < 1e-12
        assert abs(p[L.A] - p[L.C]) < 1e-12
        assert report.port_probability == pytest.approx(1.02 / 9, abs=1e-12)

    def test_excitation_matches_fidelity(self, marked_config):
        for trace in weak_trace_report(marked_config, L.D).markers:
            assert trace.excitation_probability == pytest.approx(1.0 - trace.fidelity_to_ground ** 2, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.05, 0.4, 1.2])
    def test_no_trace_on_e(self, default_config, theta):
        config = default_config.with_markers([MarkerSpec(location=L.E, theta=theta)])
        report = weak_trace_report(config, L.D)
        assert report.trace(L.E).excitation_probability < 1e-12

    def test_second_order_traces_on_e_and_f(self, default_config, weak_theta):
        config = default_config.with_markers(equal_markers(weak_theta, (L.A, L.B, L.C, L.E, L.F)))
        report = weak_trace_report(config, L.D)
        assert report.trace(L.E).excitation_probability < 1e-3
        assert report.trace(L.F).excitation_probability < 1e-3

    def test_leading_order_trace_law(self, default_config):
        """p_X = |w_X|^2 sin^2(theta) (1 + O(sin^2 theta)); the correction scales as sin^2."""
        deviations = []
        for epsilon in (0.01, 0.02):
            config = default_config.with_markers(equal_markers(asin(epsilon)))
            report = weak_trace_report(config, L.D)
            for location in (L.A, L.B, L.C):
                w = weak_value(default_config, location, L.D)
                ratio = report.trace(location).excitation_probability / (abs(w) ** 2 * epsilon ** 2)
                assert abs(ratio - 1.0) < 5 * epsilon ** 2
            deviations.append(report.trace(L.C).excitation_probability / epsilon ** 2 - 1.0)
        assert deviations[1] / deviations[0] == pytest.approx(4.0, abs=0.01)

    def test_needs_a_marker(self, default_config):
        with pytest.raises(ConfigurationError):
            weak_trace_report(default_config, L.D)


@pytest.mark.unit
class TestPhaseScan:

    @pytest.mark.parametrize("segment", [L.B, L.C])
    def test_flat_scans(self, default_config, segment):
        scan = phase_scan(default_config, segment, 100)
        assert len(scan.points) == 100
        assert scan.spread < 1e-12
        assert scan.points[0].p_d == pytest.approx(1 / 9, abs=1e-12)

    def test_scan_on_a_follows_closed_form(self, default_config):
        scan = phase_scan(default_config, L.A, 100)
        for point in scan.points:
            assert abs(point.p_d - (5 - 4 * np.cos(point.phi)) / 9) < 1e-12
        assert max(point.p_d for point in scan.points) == pytest.approx(1.0, abs=1e-12)

    def test_phases_cover_half_open_interval(self, default_config):
        phis = [point.phi for point in phase_scan(default_config, L.C, 8).points]
        assert phis[0] == 0.0
        assert phis[-1] == pytest.approx(2 * np.pi * 7 / 8)

    def test_invalid_segment(self, default_config):
        with pytest.raises(ConfigurationError):
            phase_scan(default_config, L.E, 10)

    def test_too_few_points(self, default_config):
        with pytest.raises(ConfigurationError):
            phase_scan(default_config, L.C, 1)

    def test_strong_c_marker_flattens_c_but_not_b(self, default_config):
        config = default_config.with_markers([MarkerSpec(location=L.C, theta=np.pi / 2)])
        assert phase_scan(config, L.C, 24).spread < 1e-12
        assert phase_scan(config, L.B, 24).spread > 1e-3


@pytest.mark.unit
class TestExclusivePathArgument:

    @pytest.mark.parametrize("path", [L.A, L.B, L.C])
    def test_solo_paths(self, path):
        assert solo_path_probability(path) == pytest.approx(1 / 9, abs=1e-12)

    def test_verdicts(self):
        assert exclusive_path_argument(L.C).ehdln_concludes_exclusive
        assert exclusive_path_argument(L.B).ehdln_concludes_exclusive
        verdict_a = exclusive_path_argument(L.A)
        assert not verdict_a.phase_invariant
        assert verdict_a.solo_prob_matches
        assert not verdict_a.ehdln_concludes_exclusive

    def test_conjunction_is_enforced(self):
        with pytest.raises(ValueError):
            ExclusivityVerdict(
                path=L.A, phase_invariant=False, solo_prob_matches=True, ehdln_concludes_exclusive=True,
                phase_spread=0.8, solo_probability=1 / 9, full_probability=1 / 9,
            )

    def test_contradiction_on_tuned_network(self):
        report = contradiction_demo()
        assert report.contradiction
        assert report.contradiction_pair == [L.B, L.C]
        assert not report.verdict(L.A).ehdln_concludes_exclusive

    def test_detuned_network_makes_no_claim(self):
        report = contradiction_demo(NestedMziConfig(t1=0.5), strict=False)
        assert not report.contradiction
        assert report.contradiction_pair == [L.C]
        assert not report.verdict(L.B).ehdln_concludes_exclusive

    def test_strict_mode_fails_loudly(self):
        with pytest.raises(PhysicsAssertionError):
            contradiction_demo(NestedMziConfig(t1=0.5))


@pytest.mark.unit
class TestFPassage:

    def test_every_photon_at_f_left_one_mark(self, weak_theta):
        report = f_passage_check(weak_theta)
        assert report.defined
        assert report.p_f == pytest.approx(0.01 / 3, abs=1e-12)
        assert report.p_both_ground == pytest.approx(0.0, abs=1e-12)
        assert report.p_exactly_one_excited == pytest.approx(1.0, abs=1e-12)
        assert report.p_both_excited == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.3, 0.9, np.pi / 2])
    def test_holds_for_any_positive_angle(self, theta):
        report = f_passage_check(theta)
        assert report.p_f == pytest.approx(sin(theta) ** 2 / 3, abs=1e-12)
        assert report.p_exactly_one_excited == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("theta", [asin(0.1), 0.9])
    def test_each_marker_is_maximally_mixed_at_f(self, theta):
        config = NestedMziConfig().with_markers(equal_markers(theta, (L.A, L.B)))
        result = condition_on_mode(evolve(config).snapshot(Stage.POST_BS3), L.F)
        assert result.defined
        for location in (L.A, L.B):
            reduced = reduced_marker_state(result.conditional, result.conditional.marker_at(location))
            assert np.allclose(reduced.rho, np.diag([0.5, 0.5]), atol=1e-12, rtol=0.0)

    def test_zero_angle_is_undefined(self):
        report = f_passage_check(0.0)
        assert not report.defined
        assert report.p_both_ground is None


@pytest.mark.unit
class TestConclusiveBranches:

    def test_conclusive_c_leaves_no_inner_traces(self, weak_theta):
        report = conclusive_branch_traces(weak_theta)
        assert report.excited.defined
        assert report.excited.p_a == pytest.approx(0.0, abs=1e-12)
        assert report.excited.p_b == pytest.approx(0.0, abs=1e-12)

    def test_ground_c_has_exactly_one_inner_trace(self, weak_theta):
        report = conclusive_branch_traces(weak_theta)
        assert report.ground.defined
        assert report.ground.p_exactly_one_excited == pytest.approx(1.0, abs=1e-12)
        assert report.ground.p_a + report.ground.p_b == pytest.approx(1.0, abs=1e-12)

    def test_without_weak_markers_only_c_reaches_d(self):
        report = conclusive_branch_traces(0.0)
        assert report.p_c_excited_given_d == pytest.approx(1.0, abs=1e-12)
        assert report.p_d == pytest.approx(1 / 9, abs=1e-12)


@pytest.mark.unit
class TestTrajectoryAsymmetry:

    def test_passage_points(self):
        assert passage_points(L.C) == frozenset({L.E, L.F})
        assert passage_points(L.A) == frozenset()
        assert passage_points(L.B) == frozenset()

    def test_report(self):
        report = trajectory_asymmetry()
        assert report.paths_with_passage_argument == [L.C]
        assert report.passage_points[L.C] == [L.E, L.F]
        assert report.trajectories[L.B] == [[L.S, L.E, L.B, L.F, L.D]]
