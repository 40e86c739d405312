"""Deterministic fixed-step closed-loop simulation.

The control is computed once per step from the pre-step state and held
over the step (zero-order hold), which models a discrete controller and
keeps sign evaluations unambiguous; with rk4 the disturbance is still
evaluated at all four stage times. No event detection is performed at
the switching surface; crossings happen between samples. Identical
configs produce bit-identical output.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, fields, is_dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .controllers import (HybridGainParams, SatoParams, SlidingSurface,
                          hybrid_gain, sgn)
from .dynamics import (DisturbanceSpec, TwoLinkParams, coriolis_matrix,
                       disturbance_eval, gravity_vector, integrator_rhs,
                       mass_matrix)
from .errors import ConfigurationError, DivergenceError

PLANTS = ("first-order", "two-link")
CONTROLLERS = ("hybrid-poly", "hybrid-erf", "sato", "el-hybrid-poly",
               "el-hybrid-erf", "zero")
INTEGRATORS = ("euler", "rk4")
MAX_STEPS = 10 ** 8


@dataclass(frozen=True)
class ReferenceSpec:
    """Desired joint trajectory q_d,i(t) = A_i sin(w_i t + phi_i)."""

    amplitudes: tuple = (0.0,)
    frequencies: tuple = (0.0,)
    phases: tuple = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(float(v) for v in self.amplitudes))
        object.__setattr__(self, "frequencies", tuple(float(v) for v in self.frequencies))
        object.__setattr__(self, "phases", tuple(float(v) for v in self.phases))
        n = len(self.amplitudes)
        if len(self.frequencies) != n or len(self.phases) != n:
            raise ConfigurationError("reference amplitude/frequency/phase lengths differ")

    def eval(self, t: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        a = np.asarray(self.amplitudes)
        w = np.asarray(self.frequencies)
        ph = w * t + np.asarray(self.phases)
        qd = a * np.sin(ph)
        return qd, a * w * np.cos(ph), -a * w * w * np.sin(ph)


@dataclass(frozen=True)
class SimConfig:
    """Complete description of one closed-loop run."""

    plant: str = "first-order"
    controller: str = "hybrid-poly"
    integrator: str = "euler"
    dt: float = 1e-3
    horizon: float = 8.0
    x0: float = 0.0
    q0: tuple = (0.0, 0.0)
    qdot0: tuple = (0.0, 0.0)
    disturbance: DisturbanceSpec = field(default_factory=DisturbanceSpec)
    gains: Optional[tuple] = None          # HybridGainParams per channel
    sato: Optional[SatoParams] = None
    surface: Optional[SlidingSurface] = None
    reference: Optional[ReferenceSpec] = None
    two_link: Optional[TwoLinkParams] = None
    entry_radius: Optional[float] = None   # metrics layer radius; defaults to gain eps
    settle_radius: float = 1e-3
    label: str = ""

    def __post_init__(self):
        if self.plant not in PLANTS:
            raise ConfigurationError(f"plant must be one of {PLANTS} (got {self.plant!r})")
        if self.controller not in CONTROLLERS:
            raise ConfigurationError(
                f"controller must be one of {CONTROLLERS} (got {self.controller!r})")
        if self.integrator not in INTEGRATORS:
            raise ConfigurationError(
                f"integrator must be one of {INTEGRATORS} (got {self.integrator!r})")
        if self.dt <= 0:
            raise ConfigurationError(f"dt must be positive (got {self.dt})")
        if self.horizon < self.dt:
            raise ConfigurationError(
                f"horizon must be at least one step (horizon={self.horizon}, dt={self.dt})")
        if self.horizon / self.dt > MAX_STEPS:
            raise ConfigurationError(
                f"horizon/dt = {self.horizon / self.dt:.3g} exceeds the {MAX_STEPS:.0e} "
                "step guard")
        if self.gains is not None:
            object.__setattr__(self, "gains", tuple(self.gains))
        first_order_ctrl = self.controller in ("hybrid-poly", "hybrid-erf", "sato", "zero")
        if self.plant == "first-order" and not first_order_ctrl:
            raise ConfigurationError(
                f"controller {self.controller!r} does not drive the first-order plant")
        if self.plant == "two-link" and first_order_ctrl:
            raise ConfigurationError(
                f"controller {self.controller!r} does not drive the two-link plant")
        self._validate_blocks()

    def _validate_blocks(self):
        dim = self.disturbance.dim
        if self.plant == "first-order":
            if dim != 1:
                raise ConfigurationError(
                    f"first-order plant needs a one-channel disturbance (got {dim})")
            if self.controller in ("hybrid-poly", "hybrid-erf"):
                if not self.gains or len(self.gains) != 1:
                    raise ConfigurationError("first-order hybrid controller needs one gain block")
                self._check_inner_law(self.gains[0], self.controller == "hybrid-poly")
                self.gains[0].outer.require_floor(self.disturbance.bound[0])
                self.gains[0].inner.require_erf_floor(self.disturbance.bound[0])
            elif self.controller == "sato":
                if self.sato is None:
                    raise ConfigurationError("sato controller needs a sato parameter block")
                self.sato.require_floor(max(self.disturbance.bound))
        else:
            if dim != 2:
                raise ConfigurationError(
                    f"two-link plant needs a two-channel disturbance (got {dim})")
            missing = [name for name, blk in (("gains", self.gains),
                                              ("surface", self.surface),
                                              ("reference", self.reference),
                                              ("two_link", self.two_link)) if blk is None]
            if missing:
                raise ConfigurationError(
                    f"two-link controller needs parameter blocks: {', '.join(missing)}")
            if len(self.gains) != 2:
                raise ConfigurationError("two-link controller needs one gain block per joint")
            if len(self.surface.lam) != 2 or len(self.reference.amplitudes) != 2:
                raise ConfigurationError("surface and reference blocks must be two-joint")
            poly = self.controller == "el-hybrid-poly"
            for i, g in enumerate(self.gains):
                self._check_inner_law(g, poly)
                g.outer.require_floor(self.disturbance.bound[i])
                g.inner.require_erf_floor(self.disturbance.bound[i])

    @staticmethod
    def _check_inner_law(g: HybridGainParams, expect_poly: bool):
        want = "poly" if expect_poly else "erf"
        if g.inner.law != want:
            raise ConfigurationError(
                f"controller expects the {want!r} inner law (gain block has "
                f"{g.inner.law!r})")

    @property
    def n_steps(self) -> int:
        # epsilon guard: horizon/dt can land just below an integer in floats
        return int(math.floor(self.horizon / self.dt + 1e-9))

    @property
    def layer_radius(self) -> float:
        """Radius used by the entry metric."""
        if self.entry_radius is not None:
            return self.entry_radius
        if self.gains:
            return self.gains[0].eps
        return 0.08

    @property
    def audit_radius(self) -> float:
        """Radius the bound audit measures sliding-layer entry at: the
        controller's own switch radius when one exists."""
        if self.gains:
            return self.gains[0].eps
        return self.layer_radius


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled run: states, controls, sliding variables and
    disturbances all share length n_steps + 1.

    For the two-link plant ``state`` holds the per-joint tracking error
    (the convergence quantity all metrics act on) and ``s`` the sliding
    variable; for the first-order plant the two coincide.
    """

    t: np.ndarray
    state: np.ndarray
    u: np.ndarray
    s: np.ndarray
    d: np.ndarray
    config: SimConfig

    def __post_init__(self):
        n = len(self.t)
        for name in ("state", "u", "s", "d"):
            arr = getattr(self, name)
            if arr.shape[0] != n:
                raise ConfigurationError(f"trajectory series {name} has mismatched length")

    def csv_text(self) -> str:
        """Decimal text with 17 significant digits; round-trip exact for
        64-bit floats."""
        n_x = self.state.shape[1]
        n_u = self.u.shape[1]
        cols = (["t"]
                + [f"x_{i + 1}" for i in range(n_x)]
                + [f"u_{i + 1}" for i in range(n_u)]
                + [f"s_{i + 1}" for i in range(n_x)]
                + [f"d_{i + 1}" for i in range(n_x)])
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        for k in range(len(self.t)):
            row = [self.t[k], *self.state[k], *self.u[k], *self.s[k], *self.d[k]]
            buf.write(",".join(format(v, ".17g") for v in row) + "\n")
        return buf.getvalue()


def _first_order_controller(cfg: SimConfig) -> Callable[[float], float]:
    if cfg.controller == "zero":
        return lambda x: 0.0
    if cfg.controller == "sato":
        p = cfg.sato
        return lambda x: -p.K * x / (abs(x) + p.sigma)
    g = cfg.gains[0]
    return lambda x: -hybrid_gain(x, g) * sgn(x)


def _simulate_first_order(cfg: SimConfig) -> Trajectory:
    n = cfg.n_steps
    dt = cfg.dt
    control = _first_order_controller(cfg)
    spec = cfg.disturbance
    t = np.arange(n + 1) * dt
    x_arr = np.empty(n + 1)
    u_arr = np.empty(n + 1)
    d_arr = np.empty(n + 1)
    rk4 = cfg.integrator == "rk4"
    x = float(cfg.x0)
    for k in range(n + 1):
        tk = t[k]
        u = control(x)
        d = float(disturbance_eval(spec, tk)[0])
        x_arr[k] = x
        u_arr[k] = u
        d_arr[k] = d
        if not (math.isfinite(x) and math.isfinite(u)):
            raise DivergenceError("non-finite first-order state or control", step=k)
        if k == n:
            break
        if rk4:
            d2 = float(disturbance_eval(spec, tk + 0.5 * dt)[0])
            d4 = float(disturbance_eval(spec, tk + dt)[0])
            # u held across stages; only d varies, so the four stage
            # slopes collapse to a Simpson weighting of the disturbance
            k1 = integrator_rhs(x, u, d)
            k24 = integrator_rhs(x, u, d2)
            k4 = integrator_rhs(x, u, d4)
            x = x + dt / 6.0 * (k1 + 4.0 * k24 + k4)
        else:
            x = x + dt * integrator_rhs(x, u, d)
    col = x_arr.reshape(-1, 1)
    return Trajectory(t=t, state=col, u=u_arr.reshape(-1, 1), s=col.copy(),
                      d=d_arr.reshape(-1, 1), config=cfg)


def _simulate_two_link(cfg: SimConfig) -> Trajectory:
    n = cfg.n_steps
    dt = cfg.dt
    spec = cfg.disturbance
    ref = cfg.reference
    surf = cfg.surface
    gains = cfg.gains
    p = cfg.two_link
    lam = np.asarray(surf.lam)
    fd = np.array([p.fd1, p.fd2])

    def plant_rhs(tstage: float, q: np.ndarray, dq: np.ndarray, tau: np.ndarray):
        M = mass_matrix(q, p)
        C = coriolis_matrix(q, dq, p)
        g = gravity_vector(q, p)
        d = disturbance_eval(spec, tstage)
        ddq = np.linalg.solve(M, tau + d - C @ dq - g - fd * dq)
        return dq, ddq

    t = np.arange(n + 1) * dt
    err = np.empty((n + 1, 2))
    u_arr = np.empty((n + 1, 2))
    s_arr = np.empty((n + 1, 2))
    d_arr = np.empty((n + 1, 2))
    q = np.asarray(cfg.q0, dtype=float)
    dq = np.asarray(cfg.qdot0, dtype=float)
    for k in range(n + 1):
        tk = t[k]
        qd, qd_dot, qd_ddot = ref.eval(tk)
        e = q - qd
        edot = dq - qd_dot
        s = edot + lam * e
        qr_dot = qd_dot - lam * e
        qr_ddot = qd_ddot - lam * edot
        M = mass_matrix(q, p)
        C = coriolis_matrix(q, dq, p)
        gvec = gravity_vector(q, p)
        switching = np.array([hybrid_gain(s[i], gains[i]) * sgn(s[i]) for i in range(2)])
        tau = M @ qr_ddot + C @ qr_dot + gvec - switching
        err[k] = e
        u_arr[k] = tau
        s_arr[k] = s
        d_arr[k] = disturbance_eval(spec, tk)
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(dq))
                and np.all(np.isfinite(tau))):
            raise DivergenceError("non-finite two-link state or torque", step=k)
        if k == n:
            break
        if cfg.integrator == "rk4":
            k1q, k1v = plant_rhs(tk, q, dq, tau)
            k2q, k2v = plant_rhs(tk + 0.5 * dt, q + 0.5 * dt * k1q, dq + 0.5 * dt * k1v, tau)
            k3q, k3v = plant_rhs(tk + 0.5 * dt, q + 0.5 * dt * k2q, dq + 0.5 * dt * k2v, tau)
            k4q, k4v = plant_rhs(tk + dt, q + dt * k3q, dq + dt * k3v, tau)
            q = q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
            dq = dq + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        else:
            dq_new = dq + dt * plant_rhs(tk, q, dq, tau)[1]
            q = q + dt * dq
            dq = dq_new
    return Trajectory(t=t, state=err, u=u_arr, s=s_arr, d=d_arr, config=cfg)


def simulate(cfg: SimConfig) -> Trajectory:
    """Run one closed-loop simulation; deterministic in the config."""
    # divergence is detected by the explicit per-step finiteness check,
    # so IEEE overflow warnings on the way there are suppressed
    with np.errstate(over="ignore", invalid="ignore"):
        if cfg.plant == "first-order":
            return _simulate_first_order(cfg)
        return _simulate_two_link(cfg)


# --- parameter-path overrides and sweeps ------------------------------------

def _apply_override(obj, path: Sequence[str], value):
    head, rest = path[0], path[1:]
    if isinstance(obj, tuple):
        try:
            idx = int(head)
        except ValueError:
            raise ConfigurationError(f"expected a numeric index into a sequence, got {head!r}")
        if not 0 <= idx < len(obj):
            raise ConfigurationError(f"index {idx} out of range for sequence of {len(obj)}")
        items = list(obj)
        items[idx] = _apply_override(obj[idx], rest, value) if rest else value
        return tuple(items)
    if not is_dataclass(obj):
        raise ConfigurationError(f"cannot descend into {type(obj).__name__} at {head!r}")
    names = {f.name for f in fields(obj)}
    if head not in names:
        raise ConfigurationError(
            f"unknown config field {head!r} on {type(obj).__name__}")
    if rest:
        new_value = _apply_override(getattr(obj, head), rest, value)
    else:
        new_value = value
    return replace(obj, **{head: new_value})


def apply_overrides(cfg: SimConfig, overrides: dict) -> SimConfig:
    """Return a new config with dotted-path overrides applied.

    Paths address nested blocks and sequence indices, e.g. ``x0``,
    ``dt`` or ``gains.0.outer.k0``. Unknown paths raise a
    ConfigurationError (dataclass validation re-runs on the result).
    """
    out = cfg
    for path, value in overrides.items():
        out = _apply_override(out, str(path).split("."), value)
    return out


@dataclass(frozen=True)
class SweepOutcome:
    config_id: str
    overrides: dict
    config: SimConfig
    trajectory: Optional[Trajectory]
    error: Optional[Exception]


def sweep(base: SimConfig, variants: Sequence[dict]) -> List[SweepOutcome]:
    """Run one simulation per override mapping, in order.

    All override paths are validated (by building every variant config)
    before any run starts; a variant that fails at runtime is recorded
    in its outcome without aborting the others. An empty variant list
    runs the base config once.
    """
    specs = list(variants) if variants else [{}]
    configs = [apply_overrides(base, ov) for ov in specs]  # validates paths up front
    results = []
    for i, (ov, cfg) in enumerate(zip(specs, configs)):
        config_id = f"v{i:03d}"
        try:
            results.append(SweepOutcome(config_id, dict(ov), cfg, simulate(cfg), None))
        except (ConfigurationError, DivergenceError) as exc:
            results.append(SweepOutcome(config_id, dict(ov), cfg, None, exc))
    return results
