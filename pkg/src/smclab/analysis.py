"""Performance metrics, entry/settling measurement and bound audits.

All integrals use the trapezoidal rule on the uniform sample grid.
Entry and settling times use the last-entry convention (the first
sample time after which the trajectory never again leaves the ball);
chattering makes a first-crossing convention meaningless here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .bounds import BoundReport, gains_signature
from .dynamics import TwoLinkParams, coriolis_matrix, mass_matrix
from .errors import AuditError
from .simengine import Trajectory


@dataclass(frozen=True)
class MetricsReport:
    rms: float
    iae: float
    mean_u: float
    t_entry: Optional[float]
    t_settle: Optional[float]
    horizon: float
    residual_sup: float

    def to_dict(self) -> dict:
        return {
            "rms": self.rms,
            "iae": self.iae,
            "mean_u": self.mean_u,
            "t_entry": self.t_entry,
            "t_settle": self.t_settle,
            "horizon": self.horizon,
            "residual_sup": self.residual_sup,
        }

    def to_json(self) -> str:
        # None serializes as null, covering the "not reached" case
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class AuditReport:
    """``lyapunov_violations`` is None for two-link runs: the per-step
    decrease inequality is a scalar-plant property and inertia scaling
    invalidates it for the manipulator."""

    bound_mode: str
    t_entry_measured: Optional[float]
    t_out_bound: float
    respected: bool
    lyapunov_violations: Optional[int]
    sato_slope_fit: Optional[float]

    def to_dict(self) -> dict:
        return {
            "bound_mode": self.bound_mode,
            "t_entry_measured": self.t_entry_measured,
            "t_out_bound": float(self.t_out_bound),
            "respected": self.respected,
            "lyapunov_violations": self.lyapunov_violations,
            "sato_slope_fit": self.sato_slope_fit,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def rms_error(traj: Trajectory) -> float:
    """Square root of the time-averaged squared 2-norm of the state."""
    t = traj.t
    sq = np.sum(traj.state ** 2, axis=1)
    return math.sqrt(np.trapezoid(sq, t) / (t[-1] - t[0]))


def iae(traj: Trajectory) -> float:
    """Integral of the summed absolute state components."""
    return float(np.trapezoid(np.sum(np.abs(traj.state), axis=1), traj.t))


def mean_control(traj: Trajectory) -> float:
    """Time average of the control 2-norm."""
    t = traj.t
    norm = np.sqrt(np.sum(traj.u ** 2, axis=1))
    return float(np.trapezoid(norm, t) / (t[-1] - t[0]))


def _last_entry(t: np.ndarray, series: np.ndarray, radius: float,
                hysteresis: float = 0.0) -> Optional[float]:
    """First sample time after which the sup-norm never exceeds
    radius + hysteresis again; None when the final sample is outside."""
    sup = np.max(np.abs(series), axis=1)
    outside = sup > radius + hysteresis
    if outside[-1]:
        return None
    idx = np.flatnonzero(outside)
    return float(t[0]) if idx.size == 0 else float(t[idx[-1] + 1])


def entry_and_settle(traj: Trajectory, eps: float, delta: float,
                     hysteresis: float = 0.0) -> Tuple[Optional[float], Optional[float]]:
    """Layer-entry and settling times of the state under the last-entry
    convention; either is None when not reached by the horizon end."""
    if not eps > delta > 0:
        raise ValueError(f"radii must satisfy eps > delta > 0 (eps={eps}, delta={delta})")
    t_entry = _last_entry(traj.t, traj.state, eps, hysteresis)
    t_settle = _last_entry(traj.t, traj.state, delta, hysteresis)
    return t_entry, t_settle


def residual_sup(traj: Trajectory, tail_fraction: float = 0.2) -> float:
    """Supremum of the state sup-norm over the final fraction of the run."""
    t = traj.t
    cut = t[0] + (1.0 - tail_fraction) * (t[-1] - t[0])
    tail = traj.state[t >= cut]
    return float(np.max(np.abs(tail)))


def metrics_report(traj: Trajectory, eps: Optional[float] = None,
                   delta: Optional[float] = None) -> MetricsReport:
    """Full metrics bundle; radii default to the config's layer and
    settle radii."""
    cfg = traj.config
    eps = cfg.layer_radius if eps is None else eps
    delta = cfg.settle_radius if delta is None else delta
    t_entry, t_settle = entry_and_settle(traj, eps, delta)
    return MetricsReport(
        rms=rms_error(traj),
        iae=iae(traj),
        mean_u=mean_control(traj),
        t_entry=t_entry,
        t_settle=t_settle,
        horizon=float(traj.t[-1] - traj.t[0]),
        residual_sup=residual_sup(traj),
    )


def lyapunov_violations(traj: Trajectory, rate: float, eps: float,
                        slack: float = 0.05) -> int:
    """Count steps outside the layer whose sup-norm decrease falls short
    of (rate - slack) * dt.

    ``rate`` is the guaranteed decay k0 - dbar (or K - dbar for the
    norm-normalized law). Steps that start or end inside the layer are
    excluded so the crossing step cannot be miscounted.
    """
    dt = float(traj.t[1] - traj.t[0])
    sup = np.max(np.abs(traj.s), axis=1)
    outside = (sup[:-1] > eps) & (sup[1:] > eps)
    decrease = sup[1:] - sup[:-1]
    return int(np.sum(decrease[outside] > -(rate - slack) * dt))


def sato_slope(traj: Trajectory, eps: float) -> Optional[float]:
    """Least-squares slope of |x(t)| over the pre-entry segment."""
    t_entry = _last_entry(traj.t, traj.s, eps)
    if t_entry is None or t_entry <= traj.t[0]:
        return None
    mask = traj.t <= t_entry
    if np.sum(mask) < 2:
        return None
    sup = np.max(np.abs(traj.s), axis=1)
    return float(np.polyfit(traj.t[mask], sup[mask], 1)[0])


def audit_bounds(traj: Trajectory, report: BoundReport, eps: float) -> AuditReport:
    """Compare the measured layer-entry time of the sliding variable
    against the analytic bound.

    Raises AuditError when the trajectory's parameters do not match the
    ones the bound was computed from. ``respected`` is exactly
    ``t_entry_measured <= t_out_bound`` (False when entry never happens).
    """
    cfg = traj.config
    key = dict(report.params_key)
    if "gains" in key:
        if cfg.gains is None or gains_signature(cfg.gains) != key["gains"]:
            raise AuditError("bound report was computed from different gain parameters "
                             "than the trajectory config")
    if "sato" in key:
        if cfg.sato is None or (cfg.sato.K,) != tuple(key["sato"]):
            raise AuditError("bound report was computed for a different baseline gain")
    if "dbar" in key and tuple(cfg.disturbance.bound) != tuple(key["dbar"]):
        raise AuditError("bound report was computed for a different disturbance bound")
    if "x0" in key:
        x0 = (tuple(abs(v) for v in np.atleast_1d(traj.s[0])))
        if any(abs(a - b) > 1e-12 for a, b in zip(x0, key["x0"])):
            raise AuditError("bound report was computed for a different initial condition")

    t_entry = _last_entry(traj.t, traj.s, eps)
    respected = t_entry is not None and t_entry <= report.t_out

    slope = None
    viol: Optional[int] = None
    if cfg.plant == "first-order":
        if cfg.controller == "sato" and cfg.sato is not None:
            slope = sato_slope(traj, eps)
            rate = cfg.sato.K - max(cfg.disturbance.bound)
            viol = lyapunov_violations(traj, rate, eps)
        elif cfg.gains is not None:
            rate = cfg.gains[0].outer.k0 - cfg.disturbance.bound[0]
            viol = lyapunov_violations(traj, rate, eps)
    return AuditReport(
        bound_mode=report.mode,
        t_entry_measured=t_entry,
        t_out_bound=report.t_out,
        respected=respected,
        lyapunov_violations=viol,
        sato_slope_fit=slope,
    )


def check_skew_symmetry(p: TwoLinkParams, samples: int = 10_000,
                        h: float = 1e-6, seed: int = 0) -> float:
    """Max |v^T (Mdot_fd - 2C) v| / ||v||^2 over random draws.

    Mdot_fd is a central finite difference of the mass matrix along the
    velocity direction with step h, so the residual is bounded by the
    O(h^2) truncation plus rounding noise when C is consistent with M.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        q = rng.uniform(-math.pi, math.pi, size=2)
        qdot = rng.uniform(-5.0, 5.0, size=2)
        v = rng.normal(size=2)
        v /= np.linalg.norm(v)
        m_plus = mass_matrix(q + h * qdot, p)
        m_minus = mass_matrix(q - h * qdot, p)
        mdot = (m_plus - m_minus) / (2.0 * h)
        resid = abs(float(v @ (mdot - 2.0 * coriolis_matrix(q, qdot, p)) @ v))
        worst = max(worst, resid)
    return worst
