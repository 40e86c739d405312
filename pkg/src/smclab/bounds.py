"""Closed-form layer-entry and settling-time bounds, in two modes.

``literal`` evaluates the originally stated closed forms verbatim,
including a clamped term that zeroes out whenever the switch radius lies
below the shaping radius. ``rederived`` re-integrates the two ranges of
the underlying differential inequality and is the conservative form the
simulations are audited against:

  * range 1 (constant-rate segment) integrates to a linear time
    (V0 - Vf) / (k0 - dbar), not a logarithm;
  * range 2 keeps the factor 2 from the comparison rate k1 V^gamma /
    (2 eps0^gamma) and uses the positively oriented difference of the
    fractional powers.

Audits record which mode the simulated entry times respect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .controllers import (ERF_PREFACTOR, HybridGainParams, InnerLawParams,
                          gain_inner_erf, gain_inner_poly, gain_outer)
from .errors import ConfigurationError, InfeasibilityError

LITERAL = "literal"
REDERIVED = "rederived"
MODES = (LITERAL, REDERIVED)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ConfigurationError(f"bound mode must be one of {MODES} (got {mode!r})")


@dataclass(frozen=True)
class ComponentBound:
    joint: int
    t_out: float
    t_in: float
    gain_jump_at_eps: float

    def to_dict(self) -> dict:
        return {"joint": int(self.joint), "t_out": float(self.t_out),
                "t_in": float(self.t_in),
                "gain_jump_at_eps": float(self.gain_jump_at_eps)}


@dataclass(frozen=True)
class BoundReport:
    """Analytic times for one configuration under one mode.

    t_total is always t_out + t_in and every entry is non-negative:
    ``gain_jump_at_eps`` stores the switch discontinuity's magnitude
    (the signed value is available from the module function of the same
    name). ``per_component`` carries the per-joint breakdown for
    multi-joint configurations. ``params_key`` fingerprints the inputs
    so audits can refuse to compare a bound against a trajectory
    produced from different parameters.
    """

    t_out: float
    t_in: float
    mode: str
    gain_jump_at_eps: float
    per_component: Optional[tuple] = None
    params_key: tuple = ()

    @property
    def t_total(self) -> float:
        return self.t_out + self.t_in

    def to_dict(self) -> dict:
        doc = {
            "t_out": float(self.t_out),
            "t_in": float(self.t_in),
            "t_total": float(self.t_total),
            "mode": self.mode,
            "gain_jump_at_eps": float(self.gain_jump_at_eps),
        }
        if self.per_component is not None:
            doc["per_component"] = [c.to_dict() for c in self.per_component]
        return doc


def gain_jump_at_eps(p: HybridGainParams) -> float:
    """Outer minus inner gain at the switch radius (signed jump)."""
    outer = gain_outer(p.eps, p.outer)
    if p.inner.law == "poly":
        inner = gain_inner_poly(p.eps, p.outer.gamma, p.inner)
    else:
        inner = gain_inner_erf(p.eps, p.inner.U)
    return outer - inner


def t_out_bound(x0: float, p: HybridGainParams, dbar: float, mode: str = REDERIVED) -> float:
    """Layer-entry time bound from initial state x0.

    Requires k0 > dbar, otherwise reaching is not guaranteed and an
    InfeasibilityError is raised. Zero in rederived mode when x0 starts
    inside the layer.
    """
    _check_mode(mode)
    if p.outer.k0 <= dbar:
        raise InfeasibilityError(
            f"k0 must exceed disturbance bound (k0={p.outer.k0} <= dbar={dbar})")
    ax0 = abs(x0)
    k0, k1 = p.outer.k0, p.outer.k1
    eps0, gamma = p.outer.eps0, p.outer.gamma
    eps = p.eps
    if mode == LITERAL:
        term1 = math.log(max(ax0, eps0) / max(eps, eps0)) / (k0 - dbar)
        diff = eps ** (1.0 - gamma) - min(ax0, eps0) ** (1.0 - gamma)
        term2 = eps0 ** gamma / (k1 * (1.0 - gamma)) * max(diff, 0.0)
    else:
        term1 = (max(ax0, eps0) - max(eps, eps0)) / (k0 - dbar)
        diff = min(ax0, eps0) ** (1.0 - gamma) - eps ** (1.0 - gamma)
        term2 = 2.0 * eps0 ** gamma / (k1 * (1.0 - gamma)) * max(diff, 0.0)
    return term1 + term2


def t_in_poly_bound(p: InnerLawParams, gamma):
    """State-independent in-layer convergence constant
    1/(a(1-gamma)) + 1/(b(alpha-1)).

    Plain arithmetic on the operand types, so Fraction inputs give an
    exact rational result.
    """
    if p.law != "poly":
        raise ConfigurationError("t_in_poly_bound applies to the poly inner law only")
    if not 0 < gamma < 1:
        raise ConfigurationError(f"gamma must satisfy 0 < gamma < 1 (got {gamma})")
    if not p.alpha > 1:
        raise ConfigurationError(f"alpha must satisfy alpha > 1 (got {p.alpha})")
    return 1 / (p.a * (1 - gamma)) + 1 / (p.b * (p.alpha - 1))


def t_in_erf_bound(U: float, dbar: float, eps: float) -> float:
    """In-layer bound eps / ((sqrt(pi)/2) U - dbar) for the erf law."""
    denom = ERF_PREFACTOR * U - dbar
    if denom <= 0:
        raise InfeasibilityError(
            f"erf magnitude too small: need (sqrt(pi)/2)*U > dbar "
            f"(U={U}, dbar={dbar})")
    return eps / denom


def t_sato_bound(r0: float, eps: float, K: float, dbar: float) -> float:
    """Entry time (r0 - eps)/(K - dbar) for the constant-rate baseline;
    zero when already inside."""
    if K <= dbar:
        raise InfeasibilityError(
            f"K must exceed disturbance bound (K={K} <= dbar={dbar})")
    return max(r0 - eps, 0.0) / (K - dbar)


def t_in_bound(p: HybridGainParams, dbar: float, mode: str = REDERIVED) -> float:
    """In-layer bound for either inner law of a single-channel gain block.

    The poly constant is mode-independent. For the erf law the literal
    mode exposes the unscaled per-joint form 1/(U - (2/sqrt(pi)) dbar)
    and the rederived mode the eps-scaled form shared with the scalar
    plant; the two agree up to the sqrt(pi)/2 normalization and the eps
    factor.
    """
    _check_mode(mode)
    if p.inner.law == "poly":
        return t_in_poly_bound(p.inner, p.outer.gamma)
    if mode == LITERAL:
        denom = p.inner.U - 2.0 / math.sqrt(math.pi) * dbar
        if denom <= 0:
            raise InfeasibilityError(
                f"erf magnitude too small: need U > (2/sqrt(pi))*dbar "
                f"(U={p.inner.U}, dbar={dbar})")
        return 1.0 / denom
    return t_in_erf_bound(p.inner.U, dbar, p.eps)


def gains_signature(gains: Sequence[HybridGainParams]) -> tuple:
    sig = []
    for g in gains:
        inner = (g.inner.law, g.inner.a, g.inner.b, g.inner.alpha, g.inner.U)
        sig.append((g.outer.k0, g.outer.k1, g.outer.eps0, g.outer.gamma, g.eps) + inner)
    return tuple(sig)


def first_order_bounds(x0: float, p: HybridGainParams, dbar: float,
                       mode: str = REDERIVED) -> BoundReport:
    """BoundReport for the scalar plant."""
    return BoundReport(
        t_out=t_out_bound(x0, p, dbar, mode),
        t_in=t_in_bound(p, dbar, mode),
        mode=mode,
        gain_jump_at_eps=abs(gain_jump_at_eps(p)),
        params_key=(("x0", (abs(x0),)), ("dbar", (dbar,)),
                    ("gains", gains_signature([p]))),
    )


def sato_bounds(r0: float, eps: float, K: float, dbar: float,
                mode: str = REDERIVED) -> BoundReport:
    """BoundReport for the norm-normalized baseline; the law has no inner
    phase, so t_in is zero and there is no gain jump."""
    _check_mode(mode)
    return BoundReport(
        t_out=t_sato_bound(r0, eps, K, dbar),
        t_in=0.0,
        mode=mode,
        gain_jump_at_eps=0.0,
        params_key=(("x0", (abs(r0),)), ("dbar", (dbar,)), ("sato", (K,))),
    )


def el_bounds(s0: Sequence[float], gains: Sequence[HybridGainParams],
              dbar: Sequence[float], mode: str = REDERIVED) -> BoundReport:
    """Per-joint bounds; t_out and t_in are the maxima over joints.

    Any infeasible joint raises an InfeasibilityError naming the joint.
    """
    _check_mode(mode)
    if not (len(s0) == len(gains) == len(dbar)):
        raise ConfigurationError(
            f"dimension mismatch: s0({len(s0)}), gains({len(gains)}), dbar({len(dbar)})")
    per = []
    for i, (s0i, g, db) in enumerate(zip(s0, gains, dbar)):
        try:
            per.append(ComponentBound(
                joint=i,
                t_out=t_out_bound(s0i, g, db, mode),
                t_in=t_in_bound(g, db, mode),
                gain_jump_at_eps=abs(gain_jump_at_eps(g)),
            ))
        except InfeasibilityError as exc:
            raise InfeasibilityError(f"joint {i}: {exc}") from exc
    worst_jump = max(c.gain_jump_at_eps for c in per)
    return BoundReport(
        t_out=max(c.t_out for c in per),
        t_in=max(c.t_in for c in per),
        mode=mode,
        gain_jump_at_eps=worst_jump,
        per_component=tuple(per),
        params_key=(("x0", tuple(abs(v) for v in s0)), ("dbar", tuple(dbar)),
                    ("gains", gains_signature(gains))),
    )


def residual_radius(p: InnerLawParams, gamma: float, dbar: float) -> float:
    """Radius (dbar/a)^(1/gamma) inside which the poly gain's dominant
    term falls below the disturbance bound (b-term ignored, conservative)."""
    if p.law != "poly":
        raise ConfigurationError("residual_radius applies to the poly inner law only")
    if dbar == 0:
        return 0.0
    return (dbar / p.a) ** (1.0 / gamma)


def refined_residual_radius(p: InnerLawParams, gamma: float, dbar: float,
                            tol: float = 1e-12) -> float:
    """Bisection root of a r^gamma + b r^alpha = dbar (both terms kept).

    The left side is strictly increasing in r, so the root is unique and
    lies at or below the coarse (dbar/a)^(1/gamma) radius.
    """
    hi = residual_radius(p, gamma, dbar)
    if hi == 0.0:
        return 0.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if p.a * mid ** gamma + p.b * mid ** p.alpha > dbar:
            hi = mid
        else:
            lo = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)
