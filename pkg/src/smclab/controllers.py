"""Control laws.

The central object is a two-region gain: away from the boundary layer a
bounded, saturating outer gain drives the state in at a guaranteed rate;
inside the layer either a mixed-power polynomial gain or an exponential
(erf-type) gain takes over. The switch at |x| = eps is strict and the
inner branch owns the boundary point; the gain value may jump across the
switch (the jump is surfaced as a diagnostic by the bounds module, no
blending is applied).

Also provided: a norm-normalized constant-magnitude baseline law and the
computed-torque sliding controller for the two-link plant.

Convention: sgn(0) = 0, so every law returns exactly zero control at the
origin (no spurious dither).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .dynamics import (ManipulatorState, TwoLinkParams, coriolis_matrix,
                       gravity_vector, mass_matrix)
from .errors import ConfigurationError, DivergenceError

ERF_PREFACTOR = math.sqrt(math.pi) / 2.0


def sgn(x: float) -> float:
    """Sign with sgn(0) = 0."""
    return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)


@dataclass(frozen=True)
class OuterGainParams:
    """Outer-region gain constants.

    k0 is the robustness floor and must exceed the disturbance bound of
    the loop it is used in (checked where the bound is known), k1 weights
    the saturating nonlinear term, eps0 sets its half-rise radius and
    gamma in (0, 1) its curvature.
    """

    k0: float
    k1: float
    eps0: float
    gamma: float

    def __post_init__(self):
        if self.k0 <= 0:
            raise ConfigurationError(f"k0 must be positive (got {self.k0})")
        if self.k1 <= 0:
            raise ConfigurationError(f"k1 must be positive (got {self.k1})")
        if self.eps0 <= 0:
            raise ConfigurationError(f"eps0 must be positive (got {self.eps0})")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigurationError(
                f"gamma must satisfy 0 < gamma < 1 (got {self.gamma})")

    def require_floor(self, dbar: float) -> None:
        if self.k0 <= dbar:
            raise ConfigurationError(
                f"k0 must exceed disturbance bound (k0={self.k0} <= dbar={dbar})")


@dataclass(frozen=True)
class InnerLawParams:
    """Inner-region law: ``poly`` uses a|x|^gamma + b|x|^alpha with
    gamma shared with the outer params and alpha > 1; ``erf`` uses
    (sqrt(pi)/2) U exp(x^2)."""

    law: str = "poly"
    a: float = 0.0
    b: float = 0.0
    alpha: float = 2.0
    U: float = 0.0

    def __post_init__(self):
        if self.law not in ("poly", "erf"):
            raise ConfigurationError(f"inner law must be 'poly' or 'erf' (got {self.law!r})")
        if self.law == "poly":
            if self.a <= 0 or self.b <= 0:
                raise ConfigurationError(
                    f"poly inner law needs a > 0 and b > 0 (got a={self.a}, b={self.b})")
            if self.alpha <= 1.0:
                raise ConfigurationError(
                    f"alpha must satisfy alpha > 1 (got {self.alpha})")
        else:
            if self.U <= 0:
                raise ConfigurationError(f"erf inner law needs U > 0 (got {self.U})")

    def require_erf_floor(self, dbar: float) -> None:
        if self.law == "erf" and self.U <= 2.0 / math.sqrt(math.pi) * dbar:
            raise ConfigurationError(
                f"erf magnitude must satisfy U > (2/sqrt(pi))*dbar "
                f"(U={self.U}, dbar={dbar})")


@dataclass(frozen=True)
class HybridGainParams:
    """Outer and inner gain blocks plus the switch radius eps in (0, eps0]."""

    outer: OuterGainParams
    inner: InnerLawParams
    eps: float

    def __post_init__(self):
        if not 0.0 < self.eps <= self.outer.eps0:
            raise ConfigurationError(
                f"switch radius eps must lie in (0, eps0] (eps={self.eps}, "
                f"eps0={self.outer.eps0})")


@dataclass(frozen=True)
class SatoParams:
    """Constant gain K and norm regularization sigma for the
    norm-normalized baseline law -K s / (||s|| + sigma)."""

    K: float
    sigma: float = 1e-9

    def __post_init__(self):
        if self.K <= 0:
            raise ConfigurationError(f"K must be positive (got {self.K})")
        if self.sigma < 0:
            raise ConfigurationError(f"sigma must be non-negative (got {self.sigma})")

    def require_floor(self, dbar: float) -> None:
        if self.K <= dbar:
            raise ConfigurationError(
                f"K must exceed disturbance bound (K={self.K} <= dbar={dbar})")


@dataclass(frozen=True)
class SlidingSurface:
    """Diagonal slope matrix: s = edot + diag(lambda) e."""

    lam: tuple

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lam)
        object.__setattr__(self, "lam", lam)
        if not lam or any(v <= 0 for v in lam):
            raise ConfigurationError("all surface slopes must be positive")


ArrayLike = Union[float, np.ndarray]


def gain_outer(abs_x: ArrayLike, p: OuterGainParams) -> ArrayLike:
    """Saturating outer gain, strictly increasing from k0 toward k0 + k1.

    Accepts scalars or arrays; the value stays in [k0, k0 + k1) for any
    non-negative input.
    """
    r = abs_x ** p.gamma
    return p.k0 + p.k1 * r / (p.eps0 ** p.gamma + r)


def gain_inner_poly(abs_x: ArrayLike, gamma: float, p: InnerLawParams) -> ArrayLike:
    """Mixed-power inner gain a|x|^gamma + b|x|^alpha; zero only at zero."""
    return p.a * abs_x ** gamma + p.b * abs_x ** p.alpha


def gain_inner_erf(x: float, U: float) -> float:
    """Exponential inner gain (sqrt(pi)/2) U exp(x^2); even in x."""
    return ERF_PREFACTOR * U * math.exp(x * x)


def hybrid_gain(x: float, p: HybridGainParams) -> float:
    """Two-region gain magnitude at x; the inner branch owns |x| = eps."""
    ax = abs(x)
    if ax > p.eps:
        return gain_outer(ax, p.outer)
    if p.inner.law == "poly":
        return gain_inner_poly(ax, p.outer.gamma, p.inner)
    return gain_inner_erf(x, p.inner.U)


def control_first_order(x: float, p: HybridGainParams) -> float:
    """u = -G(x) sgn(x) for the scalar plant; zero at the origin under
    the poly inner law."""
    return -hybrid_gain(x, p) * sgn(x)


def control_sato(s: Sequence[float], p: SatoParams) -> np.ndarray:
    """Norm-normalized law -K s / (||s||_2 + sigma).

    The sigma regularization replaces a conditional at s = 0, keeping the
    law smooth there; for ||s|| >> sigma the magnitude is K.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return -p.K * s / (np.linalg.norm(s) + p.sigma)


def sliding_variable(e: Sequence[float], edot: Sequence[float],
                     surf: SlidingSurface) -> np.ndarray:
    """s = edot + diag(lambda) e, componentwise."""
    e = np.atleast_1d(np.asarray(e, dtype=float))
    edot = np.atleast_1d(np.asarray(edot, dtype=float))
    lam = np.asarray(surf.lam)
    if e.shape != edot.shape or e.shape != lam.shape:
        raise ConfigurationError(
            f"dimension mismatch: e{e.shape}, edot{edot.shape}, lambda{lam.shape}")
    return edot + lam * e


def validate_joint_gains(gains: Sequence[HybridGainParams]) -> None:
    """Per-joint gain blocks must share eps, eps0, gamma, alpha and law."""
    first = gains[0]
    for i, g in enumerate(gains[1:], start=1):
        shared_ok = (g.eps == first.eps
                     and g.outer.eps0 == first.outer.eps0
                     and g.outer.gamma == first.outer.gamma
                     and g.inner.law == first.inner.law
                     and (g.inner.law == "erf" or g.inner.alpha == first.inner.alpha))
        if not shared_ok:
            raise ConfigurationError(
                f"joint {i} gain block must share eps, eps0, gamma, alpha and "
                "inner law with joint 0")


def control_el(state: ManipulatorState,
               qd: Sequence[float], qd_dot: Sequence[float], qd_ddot: Sequence[float],
               surf: SlidingSurface, gains: Sequence[HybridGainParams],
               p: TwoLinkParams) -> np.ndarray:
    """Computed-torque sliding law for the two-link plant.

    With e = q - qd, reference velocity qr_dot = qd_dot - diag(lambda) e
    and qr_ddot = qd_ddot - diag(lambda) edot, s = edot + diag(lambda) e,
    the torque is

        tau = M qr_ddot + C qr_dot + g - diag(K_i(s_i)) sgn(s),

    where each K_i applies the two-region gain to |s_i|. Model terms use
    the true plant constants; friction and d(t) stay unmodeled.
    """
    validate_joint_gains(gains)
    q = np.asarray(state.q, dtype=float)
    qdot = np.asarray(state.qdot, dtype=float)
    e = q - np.asarray(qd, dtype=float)
    edot = qdot - np.asarray(qd_dot, dtype=float)
    s = sliding_variable(e, edot, surf)
    lam = np.asarray(surf.lam)
    qr_dot = np.asarray(qd_dot, dtype=float) - lam * e
    qr_ddot = np.asarray(qd_ddot, dtype=float) - lam * edot

    M = mass_matrix(q, p)
    C = coriolis_matrix(q, qdot, p)
    g = gravity_vector(q, p)
    switching = np.array([hybrid_gain(s[i], gains[i]) * sgn(s[i]) for i in range(len(s))])
    tau = M @ qr_ddot + C @ qr_dot + g - switching
    if not np.all(np.isfinite(tau)):
        raise DivergenceError("non-finite torque in computed-torque law", step=-1)
    return tau
