"""Plant models and disturbance signals.

Two plants are provided: a scalar perturbed integrator (xdot = u + d)
and a planar two-link manipulator in standard form

    M(q) qddot + C(q, qdot) qdot + g(q) + F_d qdot = tau + d(t),

with F_d = diag(fd1, fd2) viscous friction. Friction lives in the plant
only; controllers treat it as unmodeled mismatch. Disturbances are
analytic functions of time so that runs are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DivergenceError

GRAVITY = 9.81


@dataclass(frozen=True)
class DisturbanceSpec:
    """Bounded time signal with a declared per-component bound.

    kind:
      * ``sinusoid-scaled``: d_i(t) = amplitudes[i] * bound[i] * sin(w_i t + phi_i),
        amplitudes are relative scales in [-1, 1].
      * ``per-channel-list``: d_i(t) = amplitudes[i] * sin(w_i t + phi_i),
        amplitudes are absolute and must not exceed the bound.
      * ``zero``: identically zero.
    """

    kind: str = "zero"
    amplitudes: tuple = ()
    frequencies: tuple = ()
    phases: tuple = ()
    bound: tuple = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))
        object.__setattr__(self, "frequencies", tuple(float(w) for w in self.frequencies))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        object.__setattr__(self, "bound", tuple(float(b) for b in self.bound))
        if self.kind not in ("sinusoid-scaled", "per-channel-list", "zero"):
            raise ConfigurationError(f"unknown disturbance kind {self.kind!r}")
        n = len(self.bound)
        if self.kind == "zero":
            if any(b < 0 for b in self.bound):
                raise ConfigurationError("disturbance bound components must be non-negative")
            return
        if any(b <= 0 for b in self.bound):
            raise ConfigurationError("disturbance bound components must be strictly positive")
        for name, v in (("amplitudes", self.amplitudes),
                        ("frequencies", self.frequencies),
                        ("phases", self.phases)):
            if len(v) != n:
                raise ConfigurationError(
                    f"disturbance {name} has length {len(v)}, expected {n} to match bound")
        if self.kind == "sinusoid-scaled":
            if any(abs(a) > 1.0 for a in self.amplitudes):
                raise ConfigurationError(
                    "sinusoid-scaled amplitudes are relative scales and must lie in [-1, 1]")
        else:
            for i, (a, b) in enumerate(zip(self.amplitudes, self.bound)):
                if abs(a) > b:
                    raise ConfigurationError(
                        f"per-channel amplitude |{a}| exceeds bound {b} in component {i}")

    @property
    def dim(self) -> int:
        return len(self.bound)


def disturbance_eval(spec: DisturbanceSpec, t: float) -> np.ndarray:
    """Evaluate d(t); every component stays within +/- the declared bound."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if spec.kind == "zero":
        return np.zeros(spec.dim)
    out = np.empty(spec.dim)
    for i in range(spec.dim):
        s = math.sin(spec.frequencies[i] * t + spec.phases[i])
        if spec.kind == "sinusoid-scaled":
            out[i] = spec.amplitudes[i] * spec.bound[i] * s
        else:
            out[i] = spec.amplitudes[i] * s
    return out


def integrator_rhs(x: float, u: float, d: float) -> float:
    """Scalar perturbed integrator: xdot = u + d (state does not enter)."""
    return u + d


@dataclass(frozen=True)
class TwoLinkParams:
    """Inertia constants (kg m^2), viscous friction (N m s), gravity toggle.

    The mass matrix is positive definite for all q iff p1 > 0, p2 > 0 and
    p1 * p2 > p3^2; this is checked at construction.
    """

    p1: float = 3.473
    p2: float = 0.196
    p3: float = 0.242
    fd1: float = 1.1
    fd2: float = 1.1
    gravity_enabled: bool = False
    # lever terms used only when gravity is enabled (horizontal-plane
    # benchmark runs keep it off)
    g1: float = 0.0
    g2: float = 0.0

    def __post_init__(self):
        if self.p1 <= 0 or self.p2 <= 0:
            raise ConfigurationError("inertia constants p1, p2 must be positive")
        if self.p1 * self.p2 - self.p3 ** 2 <= 0:
            raise ConfigurationError(
                f"p1*p2 - p3^2 = {self.p1 * self.p2 - self.p3 ** 2:.6g} must be positive "
                "for the mass matrix to stay positive definite")
        if self.fd1 < 0 or self.fd2 < 0:
            raise ConfigurationError("friction coefficients must be non-negative")


@dataclass(frozen=True)
class ManipulatorState:
    """Joint angles (rad) and velocities (rad/s). Finiteness is enforced
    per accepted step by the simulation engine, not here."""

    q: tuple
    qdot: tuple

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        qd = tuple(float(v) for v in self.qdot)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qd)
        if len(q) != 2 or len(qd) != 2:
            raise ConfigurationError("two-link state needs exactly two joints")


def mass_matrix(q: Sequence[float], p: TwoLinkParams) -> np.ndarray:
    """Symmetric positive-definite inertia matrix M(q) of the planar two-link arm."""
    c2 = math.cos(q[1])
    m12 = p.p2 + p.p3 * c2
    return np.array([[p.p1 + 2.0 * p.p3 * c2, m12],
                     [m12, p.p2]])


def coriolis_matrix(q: Sequence[float], qdot: Sequence[float], p: TwoLinkParams) -> np.ndarray:
    """Coriolis/centrifugal matrix; Mdot - 2C is skew-symmetric for this choice."""
    s2 = math.sin(q[1])
    dq1, dq2 = qdot[0], qdot[1]
    return np.array([[-p.p3 * dq2 * s2, -p.p3 * (dq1 + dq2) * s2],
                     [p.p3 * dq1 * s2, 0.0]])


def gravity_vector(q: Sequence[float], p: TwoLinkParams) -> np.ndarray:
    """Gravity torque g(q); zero when gravity is disabled (the default)."""
    if not p.gravity_enabled:
        return np.zeros(2)
    g12 = p.g2 * GRAVITY * math.cos(q[0] + q[1])
    return np.array([p.g1 * GRAVITY * math.cos(q[0]) + g12, g12])


def manipulator_rhs(state: ManipulatorState, tau: Sequence[float],
                    d: Sequence[float], p: TwoLinkParams) -> tuple:
    """State derivative (qdot, qddot) of the two-link plant.

    qddot = M(q)^-1 (tau + d - C qdot - g - F_d qdot). The friction term
    belongs to the plant, not to any controller model.
    """
    tau = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(tau)):
        raise DivergenceError("non-finite torque command", step=-1)
    q = np.asarray(state.q, dtype=float)
    qdot = np.asarray(state.qdot, dtype=float)
    M = mass_matrix(q, p)
    C = coriolis_matrix(q, qdot, p)
    g = gravity_vector(q, p)
    fric = np.array([p.fd1, p.fd2]) * qdot
    qddot = np.linalg.solve(M, tau + np.asarray(d, dtype=float) - C @ qdot - g - fric)
    return qdot, qddot


def inertia_eigenvalue_range(p: TwoLinkParams, samples: int = 360) -> tuple:
    """Diagnostic: (min, max) eigenvalue of M(q) over a sweep of q2.

    Reported only; never asserted, since declared inertia bounds in the
    benchmark literature do not always hold for the quoted parameters.
    """
    lo, hi = math.inf, -math.inf
    for k in range(samples):
        q2 = -math.pi + 2.0 * math.pi * k / samples
        M = mass_matrix((0.0, q2), p)
        w = np.linalg.eigvalsh(M)
        lo = min(lo, float(w[0]))
        hi = max(hi, float(w[-1]))
    return lo, hi
