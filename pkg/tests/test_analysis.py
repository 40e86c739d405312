"""Metrics, entry/settling conventions, audits, skew-symmetry check."""

import json
import math

import numpy as np
import pytest

from smclab import (AuditError, DisturbanceSpec, SimConfig, apply_overrides,
                    audit_bounds, check_skew_symmetry, entry_and_settle, iae,
                    lyapunov_violations, mean_control, metrics_report,
                    residual_sup, rms_error, sato_slope, scenario_bounds,
                    simulate)
from smclab.simengine import Trajectory


def _series_traj(t, x, u=None):
    """Synthetic single-channel trajectory for metric oracles."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float).reshape(-1, 1)
    u = np.zeros_like(x) if u is None else np.asarray(u, dtype=float).reshape(-1, 1)
    cfg = SimConfig(plant="first-order", controller="zero", dt=float(t[1] - t[0]),
                    horizon=float(t[-1]), x0=float(x[0, 0]),
                    disturbance=DisturbanceSpec(kind="zero", bound=(0.0,)))
    return Trajectory(t=t, state=x, u=u, s=x.copy(), d=np.zeros_like(x), config=cfg)


class TestMetricOracles:
    def test_rms_of_constant(self):
        t = np.linspace(0.0, 4.0, 401)
        traj = _series_traj(t, np.full_like(t, -2.5))
        assert rms_error(traj) == pytest.approx(2.5, rel=1e-12)

    def test_rms_of_ramp_closed_form(self):
        # x(t) = 3 (1 - t/T): RMS over [0, T] is 3/sqrt(3)
        t = np.linspace(0.0, 6.0, 6001)
        traj = _series_traj(t, 3.0 * (1.0 - t / 6.0))
        assert rms_error(traj) == pytest.approx(math.sqrt(3.0), rel=1e-6)

    def test_iae_zero_trajectory(self):
        t = np.linspace(0.0, 4.0, 401)
        assert iae(_series_traj(t, np.zeros_like(t))) == 0.0

    def test_iae_triangle_area(self):
        # ramp 3 -> 0 over 6 s then zero: area 9 (trapezoid exact on
        # piecewise-linear data)
        t = np.linspace(0.0, 8.0, 8001)
        x = np.where(t <= 6.0, 3.0 * (1.0 - t / 6.0), 0.0)
        assert iae(_series_traj(t, x)) == pytest.approx(9.0, rel=1e-9)

    def test_mean_control_zero(self):
        t = np.linspace(0.0, 4.0, 401)
        traj = _series_traj(t, np.ones_like(t), u=np.zeros_like(t))
        assert mean_control(traj) == 0.0

    def test_time_reversal_invariance(self, preset_run):
        _, traj = preset_run("fo-hybrid-poly")
        reversed_traj = _series_traj(traj.t, traj.state[::-1, 0], traj.u[::-1, 0])
        assert rms_error(reversed_traj) == pytest.approx(rms_error(traj), rel=1e-12)
        assert iae(reversed_traj) == pytest.approx(iae(traj), rel=1e-12)


class TestEntryAndSettle:
    def test_starting_inside_both_balls(self):
        t = np.linspace(0.0, 1.0, 101)
        traj = _series_traj(t, np.full_like(t, 1e-5))
        t_entry, t_settle = entry_and_settle(traj, eps=0.08, delta=1e-3)
        assert t_entry == 0.0 and t_settle == 0.0

    def test_monotone_ramp_unique_crossing(self):
        t = np.linspace(0.0, 1.0, 1001)
        x = 1.0 - t  # crosses 0.08 at t = 0.92
        traj = _series_traj(t, x)
        t_entry, _ = entry_and_settle(traj, eps=0.08, delta=1e-3)
        k = np.flatnonzero(np.abs(x) > 0.08)[-1] + 1
        assert t_entry == pytest.approx(t[k])

    def test_last_entry_ignores_earlier_dips(self):
        t = np.linspace(0.0, 1.0, 11)
        x = np.array([1.0, 0.05, 1.0, 0.05, 0.05, 0.05, 0.04, 0.03, 0.02, 0.02, 0.02])
        traj = _series_traj(t, x)
        t_entry, _ = entry_and_settle(traj, eps=0.08, delta=1e-3)
        assert t_entry == pytest.approx(t[3])

    def test_not_reached_is_none(self):
        t = np.linspace(0.0, 1.0, 101)
        traj = _series_traj(t, np.ones_like(t))
        t_entry, t_settle = entry_and_settle(traj, eps=0.08, delta=1e-3)
        assert t_entry is None and t_settle is None

    def test_radius_ordering_validated(self):
        t = np.linspace(0.0, 1.0, 11)
        traj = _series_traj(t, np.zeros_like(t))
        with pytest.raises(ValueError, match="eps > delta"):
            entry_and_settle(traj, eps=1e-3, delta=0.08)

    def test_hysteresis_tolerates_small_excursions(self):
        t = np.linspace(0.0, 1.0, 5)
        x = np.array([1.0, 0.05, 0.085, 0.05, 0.05])
        traj = _series_traj(t, x)
        strict, _ = entry_and_settle(traj, eps=0.08, delta=1e-3)
        loose, _ = entry_and_settle(traj, eps=0.08, delta=1e-3, hysteresis=0.01)
        assert strict == pytest.approx(t[3])
        assert loose == pytest.approx(t[1])

    def test_residual_sup_tail_definition(self):
        t = np.linspace(0.0, 10.0, 1001)
        # tail starts at t = 8.0: a spike after that is seen...
        x = np.where(t < 8.5, 0.25, 1.0)
        assert residual_sup(_series_traj(t, x)) == pytest.approx(1.0)
        # ...but anything settled before the tail is not
        x = np.where(t < 7.9, 1.0, 0.25)
        assert residual_sup(_series_traj(t, x)) == pytest.approx(0.25)


class TestBenchmarkMetrics:
    def test_sato_mean_control_is_constant_magnitude(self, preset_run):
        _, traj = preset_run("fo-sato")
        assert mean_control(traj) == pytest.approx(1.4, rel=1e-3)

    def test_hybrid_mean_control_below_outer_ceiling(self, preset_run):
        for name in ("fo-hybrid-poly", "fo-hybrid-erf", "fo-hybrid-poly-microlayer"):
            _, traj = preset_run(name)
            assert mean_control(traj) < 1.6
            assert np.all(np.abs(traj.u[np.abs(traj.s[:, 0]) > 0.08]) <= 1.6)

    def test_metrics_report_bundles_config_radii(self, preset_run):
        _, traj = preset_run("fo-hybrid-poly")
        rep = metrics_report(traj)
        assert rep.horizon == pytest.approx(8.0)
        assert rep.t_entry == pytest.approx(2.167, abs=1e-3)
        assert rep.t_settle is None


class TestAudit:
    def test_respected_for_benchmark_run(self, preset_run):
        scenario, traj = preset_run("fo-hybrid-poly")
        report = scenario_bounds(scenario.config, "rederived")
        audit = audit_bounds(traj, report, scenario.config.audit_radius)
        assert audit.respected
        assert audit.t_entry_measured <= audit.t_out_bound
        assert audit.lyapunov_violations == 0
        assert audit.sato_slope_fit is None

    def test_trivially_respected_from_inside_layer(self, preset_run):
        scenario, _ = preset_run("fo-hybrid-poly")
        cfg = apply_overrides(scenario.config, {"x0": 0.01, "horizon": 1.0})
        traj = simulate(cfg)
        report = scenario_bounds(cfg, "rederived")
        audit = audit_bounds(traj, report, cfg.audit_radius)
        assert audit.t_entry_measured == 0.0
        assert audit.respected

    def test_sato_slope_within_disturbance_band(self, preset_run):
        scenario, traj = preset_run("fo-sato")
        report = scenario_bounds(scenario.config, "rederived")
        audit = audit_bounds(traj, report, 0.08)
        assert -1.9 <= audit.sato_slope_fit <= -0.9
        assert audit.respected

    def test_parameter_mismatch_rejected(self, preset_run):
        scenario, traj = preset_run("fo-hybrid-poly")
        other = apply_overrides(scenario.config, {"gains.0.outer.k1": 1.6})
        report = scenario_bounds(other, "rederived")
        with pytest.raises(AuditError, match="gain parameters"):
            audit_bounds(traj, report, 0.08)
        mismatched_x0 = scenario_bounds(
            apply_overrides(scenario.config, {"x0": 4.0}), "rederived")
        with pytest.raises(AuditError, match="initial condition"):
            audit_bounds(traj, mismatched_x0, 0.08)

    def test_two_link_audit_reports_honest_violation(self, preset_run):
        # the per-joint bound ignores inertia scaling and the unmodeled
        # friction, so the manipulator run misses it; the audit must say so
        scenario, traj = preset_run("el-hybrid-poly")
        report = scenario_bounds(scenario.config, "rederived")
        audit = audit_bounds(traj, report, scenario.config.audit_radius)
        assert audit.t_entry_measured is not None
        assert not audit.respected
        assert audit.lyapunov_violations is None

    def test_lyapunov_counter_flags_synthetic_stall(self):
        t = np.linspace(0.0, 1.0, 101)
        x = np.full_like(t, 3.0)  # no decrease at all
        traj = _series_traj(t, x)
        assert lyapunov_violations(traj, rate=0.3, eps=0.08) == 100

    def test_sato_slope_none_when_no_pre_entry_segment(self):
        t = np.linspace(0.0, 1.0, 101)
        traj = _series_traj(t, np.full_like(t, 0.01))
        assert sato_slope(traj, eps=0.08) is None


class TestSkewSymmetryCheck:
    def test_residual_within_finite_difference_budget(self, two_link):
        assert check_skew_symmetry(two_link, samples=2000) <= 1e-6

    def test_corrupted_coriolis_detected(self, two_link, monkeypatch):
        import smclab.analysis as analysis_mod
        true_c = analysis_mod.coriolis_matrix
        monkeypatch.setattr(analysis_mod, "coriolis_matrix",
                            lambda q, qd, p: -true_c(q, qd, p))
        assert check_skew_symmetry(two_link, samples=200) > 0.1

    def test_sample_count_validated(self, two_link):
        with pytest.raises(ValueError):
            check_skew_symmetry(two_link, samples=0)


class TestSerialization:
    def test_metrics_json_keys_and_null_encoding(self, preset_run):
        _, traj = preset_run("fo-hybrid-poly")
        doc = json.loads(metrics_report(traj).to_json())
        assert set(doc) == {"rms", "iae", "mean_u", "t_entry", "t_settle",
                            "horizon", "residual_sup"}
        assert doc["t_settle"] is None

    def test_audit_json_keys(self, preset_run):
        scenario, traj = preset_run("fo-hybrid-poly")
        report = scenario_bounds(scenario.config, "rederived")
        doc = json.loads(audit_bounds(traj, report, 0.08).to_json())
        assert set(doc) == {"bound_mode", "t_entry_measured", "t_out_bound",
                            "respected", "lyapunov_violations", "sato_slope_fit"}
        assert doc["bound_mode"] == "rederived"
