"""Scenario files and bundled presets.

A scenario is one INI file whose sections mirror the parameter blocks:
``[run]``, ``[initial]``, ``[disturbance]``, ``[outer]``, ``[inner]``,
``[layer]``, ``[sato]``, ``[surface]``, ``[two-link]``, ``[reference]``,
``[metrics]`` and an optional ``[expected]`` block of reference metric
targets with tolerances (informational: runs report whether targets were
met, they never fail on a miss).

Vector-valued keys are comma-separated. Scalar outer/inner keys are
broadcast per joint for the two-link controllers.
"""

from __future__ import annotations

import configparser
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Optional, Union

from .bounds import (REDERIVED, BoundReport, el_bounds, first_order_bounds,
                     sato_bounds)
from .controllers import (HybridGainParams, InnerLawParams, OuterGainParams,
                          SatoParams, SlidingSurface)
from .dynamics import DisturbanceSpec, TwoLinkParams
from .errors import ConfigurationError
from .simengine import ReferenceSpec, SimConfig


@dataclass(frozen=True)
class ExpectedMetrics:
    """Reference metric targets bundled with a preset."""

    targets: tuple  # of (name, value, rel_tol)

    def evaluate(self, measured: dict) -> dict:
        out = {}
        for name, value, tol in self.targets:
            got = measured.get(name)
            within = got is not None and abs(got - value) <= tol * abs(value)
            out[name] = {"expected": value, "rel_tol": tol,
                         "measured": got, "within": bool(within)}
        return out


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    config: SimConfig
    expected: Optional[ExpectedMetrics] = None


class _SectionReader:
    """configparser access with errors that name section and key."""

    def __init__(self, parser: configparser.ConfigParser, section: str):
        self.section = section
        self.raw = dict(parser[section]) if parser.has_section(section) else None

    def __bool__(self):
        return self.raw is not None

    def _get(self, key, default=...):
        if self.raw is None or key not in self.raw:
            if default is ...:
                raise ConfigurationError(
                    f"missing required field [{self.section}] {key}")
            return default
        return self.raw.pop(key)

    def text(self, key, default=...):
        return self._get(key, default)

    def number(self, key, default=...):
        raw = self._get(key, default)
        if raw is default and default is not ...:
            return default
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ConfigurationError(
                f"field [{self.section}] {key} must be a number (got {raw!r})")

    def vector(self, key, default=...):
        raw = self._get(key, default)
        if raw is default and default is not ...:
            return default
        try:
            return tuple(float(v) for v in str(raw).split(","))
        except ValueError:
            raise ConfigurationError(
                f"field [{self.section}] {key} must be a comma-separated "
                f"number list (got {raw!r})")

    def flag(self, key, default=...):
        raw = self._get(key, default)
        if raw is default and default is not ...:
            return default
        lowered = str(raw).strip().lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise ConfigurationError(
            f"field [{self.section}] {key} must be a boolean (got {raw!r})")

    def reject_unknown(self):
        if self.raw:
            unknown = ", ".join(sorted(self.raw))
            raise ConfigurationError(
                f"unknown field(s) in [{self.section}]: {unknown}")


def _broadcast(values: tuple, n: int, what: str) -> tuple:
    if len(values) == n:
        return values
    if len(values) == 1:
        return values * n
    raise ConfigurationError(f"{what} needs 1 or {n} values (got {len(values)})")


def _build_gains(parser: configparser.ConfigParser, n_joints: int,
                 law: str) -> tuple:
    outer = _SectionReader(parser, "outer")
    inner = _SectionReader(parser, "inner")
    layer = _SectionReader(parser, "layer")
    k0 = _broadcast(outer.vector("k0"), n_joints, "[outer] k0")
    k1 = _broadcast(outer.vector("k1"), n_joints, "[outer] k1")
    eps0 = outer.number("eps0")
    gamma = outer.number("gamma")
    outer.reject_unknown()
    declared_law = inner.text("law")
    if declared_law != law:
        raise ConfigurationError(
            f"[inner] law is {declared_law!r} but the controller requires {law!r}")
    if law == "poly":
        a = _broadcast(inner.vector("a"), n_joints, "[inner] a")
        b = _broadcast(inner.vector("b"), n_joints, "[inner] b")
        alpha = inner.number("alpha")
        U = (0.0,) * n_joints
    else:
        U = _broadcast(inner.vector("u"), n_joints, "[inner] U")
        a = b = (0.0,) * n_joints
        alpha = 2.0
    inner.reject_unknown()
    eps = layer.number("eps")
    layer.reject_unknown()
    gains = []
    for i in range(n_joints):
        if law == "poly":
            inner_params = InnerLawParams(law="poly", a=a[i], b=b[i], alpha=alpha)
        else:
            inner_params = InnerLawParams(law="erf", U=U[i])
        gains.append(HybridGainParams(
            outer=OuterGainParams(k0=k0[i], k1=k1[i], eps0=eps0, gamma=gamma),
            inner=inner_params,
            eps=eps,
        ))
    return tuple(gains)


def load_config(path: Union[str, Path], label: str = "") -> ScenarioPreset:
    """Parse and validate one scenario file."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    text = Path(path).read_text()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed scenario file {path}: {exc}") from exc
    return parse_scenario(parser, label or Path(path).stem)


def parse_scenario(parser: configparser.ConfigParser, label: str) -> ScenarioPreset:
    run = _SectionReader(parser, "run")
    plant = run.text("plant")
    controller = run.text("controller")
    integrator = run.text("integrator", "euler")
    dt = run.number("dt")
    horizon = run.number("horizon")
    run.reject_unknown()

    dist = _SectionReader(parser, "disturbance")
    kind = dist.text("kind", "zero")
    if kind == "zero":
        disturbance = DisturbanceSpec(kind="zero",
                                      bound=dist.vector("bound", (0.0,)))
    else:
        bound = dist.vector("bound")
        phases = dist.vector("phases", None)
        disturbance = DisturbanceSpec(
            kind=kind,
            amplitudes=dist.vector("amplitudes"),
            frequencies=dist.vector("frequencies"),
            phases=(0.0,) * len(bound) if phases is None else phases,
            bound=bound,
        )
    dist.reject_unknown()

    initial = _SectionReader(parser, "initial")
    metrics = _SectionReader(parser, "metrics")
    entry_radius = metrics.number("entry_radius", None) if metrics else None
    settle_radius = metrics.number("settle_radius", 1e-3) if metrics else 1e-3
    if metrics:
        metrics.reject_unknown()

    kwargs = dict(plant=plant, controller=controller, integrator=integrator,
                  dt=dt, horizon=horizon, disturbance=disturbance,
                  entry_radius=entry_radius, settle_radius=settle_radius,
                  label=label)

    if plant == "first-order":
        kwargs["x0"] = initial.number("x0")
        initial.reject_unknown()
        if controller in ("hybrid-poly", "hybrid-erf"):
            law = "poly" if controller == "hybrid-poly" else "erf"
            kwargs["gains"] = _build_gains(parser, 1, law)
        elif controller == "sato":
            sato = _SectionReader(parser, "sato")
            kwargs["sato"] = SatoParams(K=sato.number("k"),
                                        sigma=sato.number("sigma", 1e-9))
            sato.reject_unknown()
    elif plant == "two-link":
        kwargs["q0"] = initial.vector("q0")
        kwargs["qdot0"] = initial.vector("qdot0", (0.0, 0.0))
        initial.reject_unknown()
        law = "poly" if controller == "el-hybrid-poly" else "erf"
        kwargs["gains"] = _build_gains(parser, 2, law)
        surface = _SectionReader(parser, "surface")
        kwargs["surface"] = SlidingSurface(lam=_broadcast(
            surface.vector("lambda"), 2, "[surface] lambda"))
        surface.reject_unknown()
        ref = _SectionReader(parser, "reference")
        kwargs["reference"] = ReferenceSpec(
            amplitudes=ref.vector("amplitudes"),
            frequencies=ref.vector("frequencies"),
            phases=ref.vector("phases", (0.0, 0.0)),
        )
        ref.reject_unknown()
        plant_params = _SectionReader(parser, "two-link")
        kwargs["two_link"] = TwoLinkParams(
            p1=plant_params.number("p1"),
            p2=plant_params.number("p2"),
            p3=plant_params.number("p3"),
            fd1=plant_params.number("fd1", 0.0),
            fd2=plant_params.number("fd2", 0.0),
            gravity_enabled=plant_params.flag("gravity_enabled", False),
        )
        plant_params.reject_unknown()
    else:
        raise ConfigurationError(f"unknown plant {plant!r}")

    expected = None
    exp = _SectionReader(parser, "expected")
    if exp:
        targets = []
        for name in ("rms", "iae", "mean_u", "t_entry"):
            value = exp.number(name, None)
            if value is not None:
                targets.append((name, value, exp.number(f"{name}_tol", 0.10)))
        exp.reject_unknown()
        expected = ExpectedMetrics(targets=tuple(targets))

    return ScenarioPreset(name=label, config=SimConfig(**kwargs), expected=expected)


# --- bundled presets ---------------------------------------------------------

def _preset_dir():
    return resources.files("smclab") / "presets"


def list_presets() -> List[str]:
    names = [entry.name[:-4] for entry in _preset_dir().iterdir()
             if entry.name.endswith(".ini")]
    return sorted(names)


def load_preset(name: str) -> ScenarioPreset:
    entry = _preset_dir() / f"{name}.ini"
    if not entry.is_file():
        raise ConfigurationError(
            f"unknown preset {name!r}; available: {', '.join(list_presets())}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.read_string(entry.read_text())
    return parse_scenario(parser, name)


def load_scenario(preset: Optional[str] = None,
                  config_path: Optional[Union[str, Path]] = None) -> ScenarioPreset:
    if (preset is None) == (config_path is None):
        raise ConfigurationError("give exactly one of preset name or config path")
    if preset is not None:
        return load_preset(preset)
    return load_config(config_path)


def scenario_bounds(cfg: SimConfig, mode: str = REDERIVED) -> Optional[BoundReport]:
    """Analytic bound report for a config, or None for the zero controller."""
    dbar = cfg.disturbance.bound
    if cfg.controller in ("hybrid-poly", "hybrid-erf"):
        return first_order_bounds(cfg.x0, cfg.gains[0], dbar[0], mode)
    if cfg.controller == "sato":
        return sato_bounds(abs(cfg.x0), cfg.layer_radius, cfg.sato.K, max(dbar), mode)
    if cfg.controller in ("el-hybrid-poly", "el-hybrid-erf"):
        qd, qd_dot, _ = cfg.reference.eval(0.0)
        e0 = [float(q - qd_i) for q, qd_i in zip(cfg.q0, qd)]
        edot0 = [float(dq - v) for dq, v in zip(cfg.qdot0, qd_dot)]
        s0 = [de + lam * e for de, lam, e in zip(edot0, cfg.surface.lam, e0)]
        return el_bounds(s0, cfg.gains, dbar, mode)
    return None


def load_sweep_spec(path: Union[str, Path]) -> List[dict]:
    """Read a sweep spec: JSON list of override mappings (possibly under
    a top-level "variants" key)."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed sweep spec {path}: {exc}") from exc
    variants = doc.get("variants") if isinstance(doc, dict) else doc
    if not isinstance(variants, list) or not all(isinstance(v, dict) for v in variants):
        raise ConfigurationError(
            "sweep spec must be a list of override mappings "
            '(or {"variants": [...]})')
    return variants
