"""Command-line front end.

Subcommands: ``simulate`` (one scenario to CSV + JSON reports),
``compare`` (several presets on shared settings, percent table),
``sweep`` (one base config over an override grid), ``bounds`` (analytic
report only, no simulation).

Exit codes: 0 success, 2 configuration error, 3 numerical divergence.
Output files are written atomically (temp then rename) and depend only
on the scenario content.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import analysis, bounds as bounds_mod
from .config import (ScenarioPreset, list_presets, load_scenario,
                     load_sweep_spec, scenario_bounds)
from .errors import ConfigurationError, DivergenceError
from .simengine import SimConfig, apply_overrides, simulate, sweep

MODE_ALIASES = {"paper-literal": bounds_mod.LITERAL}


def _canonical_mode(mode: str) -> str:
    return MODE_ALIASES.get(mode, mode)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _apply_cli_overrides(cfg: SimConfig, args) -> SimConfig:
    overrides = {}
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.horizon is not None:
        overrides["horizon"] = args.horizon
    return apply_overrides(cfg, overrides) if overrides else cfg


def _run_scenario(scenario: ScenarioPreset, out_dir: Path, mode: str) -> dict:
    """Simulate one scenario and write its artifact set; returns a summary."""
    cfg = scenario.config
    out_dir.mkdir(parents=True, exist_ok=True)
    traj = simulate(cfg)
    metrics = analysis.metrics_report(traj)

    _write_atomic(out_dir / "trajectory.csv", traj.csv_text())
    _write_atomic(out_dir / "metrics.json", _dump_json(metrics.to_dict()))

    bounds_doc = {}
    audit = None
    for m in bounds_mod.MODES:
        report = scenario_bounds(cfg, m)
        if report is None:
            break
        bounds_doc[m] = report.to_dict()
        if m == mode:
            audit = analysis.audit_bounds(traj, report, cfg.audit_radius)
    if bounds_doc:
        _write_atomic(out_dir / "bounds.json", _dump_json(bounds_doc))
    if audit is not None:
        _write_atomic(out_dir / "audit.json", _dump_json(audit.to_dict()))

    if scenario.expected is not None:
        verdicts = scenario.expected.evaluate(metrics.to_dict())
        _write_atomic(out_dir / "expected.json", _dump_json(verdicts))

    return {
        "label": scenario.name,
        "metrics": metrics.to_dict(),
        "respected": None if audit is None else audit.respected,
    }


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.preset, args.config)
    cfg = _apply_cli_overrides(scenario.config, args)
    scenario = ScenarioPreset(scenario.name, cfg, scenario.expected)
    summary = _run_scenario(scenario, Path(args.out), _canonical_mode(args.mode))
    print(f"{scenario.name}: rms={summary['metrics']['rms']:.4f} "
          f"iae={summary['metrics']['iae']:.4f} "
          f"mean_u={summary['metrics']['mean_u']:.4f} -> {args.out}")
    return 0


_SHARED_FIELDS = ("plant", "x0", "q0", "qdot0", "horizon", "dt", "disturbance")


def _load_by_ref(ref: str) -> ScenarioPreset:
    """A compare argument is a preset name unless it looks like a file path."""
    if ref.endswith(".ini") or os.sep in ref:
        return load_scenario(None, ref)
    return load_scenario(ref, None)


def cmd_compare(args) -> int:
    if len(args.presets) < 2:
        raise ConfigurationError("compare needs at least two presets")
    scenarios = [_load_by_ref(name) for name in args.presets]
    base_cfg = scenarios[0].config
    for sc in scenarios[1:]:
        for fname in _SHARED_FIELDS:
            if getattr(sc.config, fname) != getattr(base_cfg, fname):
                raise ConfigurationError(
                    f"unfair comparison refused: preset {sc.name!r} differs from "
                    f"{scenarios[0].name!r} in shared field {fname!r}")
    out_dir = Path(args.out)
    mode = _canonical_mode(args.mode)
    rows = {}
    for sc in scenarios:
        summary = _run_scenario(sc, out_dir / sc.name, mode)
        rows[sc.name] = summary["metrics"]
    baseline = rows[scenarios[0].name]
    doc = {"baseline": scenarios[0].name, "rows": {}}
    for name, metrics in rows.items():
        entry = {k: metrics[k] for k in ("rms", "iae", "mean_u", "t_entry")}
        entry["pct_decrease"] = {
            k: (100.0 * (baseline[k] - metrics[k]) / baseline[k]
                if baseline[k] else None)
            for k in ("rms", "iae", "mean_u")
        }
        doc["rows"][name] = entry
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_atomic(out_dir / "comparison.json", _dump_json(doc))
    print(f"compared {len(rows)} presets against baseline "
          f"{scenarios[0].name!r} -> {out_dir / 'comparison.json'}")
    return 0


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.preset, args.config)
    cfg = _apply_cli_overrides(scenario.config, args)
    variants = load_sweep_spec(args.sweep) if args.sweep else [{}]
    mode = _canonical_mode(args.mode)
    out_dir = Path(args.out)
    outcomes = sweep(cfg, variants)
    entries = []
    n_respected = 0
    failures = []
    for outcome in outcomes:
        sub = out_dir / outcome.config_id
        entry = {"config_id": outcome.config_id, "overrides": outcome.overrides}
        if outcome.error is not None:
            failures.append(outcome.error)
            sub.mkdir(parents=True, exist_ok=True)
            _write_atomic(sub / "error.json", _dump_json(
                {"error": type(outcome.error).__name__, "message": str(outcome.error)}))
            entry.update(error=str(outcome.error), respected=None)
        else:
            summary = _run_scenario(
                ScenarioPreset(f"{scenario.name}/{outcome.config_id}",
                               outcome.config, None), sub, mode)
            entry.update(error=None, respected=summary["respected"])
            if summary["respected"]:
                n_respected += 1
        entries.append(entry)
    doc = {"total": len(outcomes), "failed": len(failures),
           "respected": n_respected, "mode": mode, "variants": entries}
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_atomic(out_dir / "summary.json", _dump_json(doc))
    print(f"sweep: {len(outcomes)} variants, {len(failures)} failed, "
          f"{n_respected} bound-respected -> {out_dir / 'summary.json'}")
    if not failures:
        return 0
    return 3 if any(isinstance(e, DivergenceError) for e in failures) else 2


def cmd_bounds(args) -> int:
    scenario = load_scenario(args.preset, args.config)
    cfg = _apply_cli_overrides(scenario.config, args)
    doc = {}
    for m in bounds_mod.MODES:
        report = scenario_bounds(cfg, m)
        if report is None:
            raise ConfigurationError(
                f"controller {cfg.controller!r} has no analytic bound report")
        doc[m] = report.to_dict()
    diagnostics = {}
    if cfg.gains is not None and cfg.gains[0].inner.law == "poly":
        worst = 0.0
        for g, db in zip(cfg.gains, cfg.disturbance.bound):
            worst = max(worst, bounds_mod.refined_residual_radius(
                g.inner, g.outer.gamma, db))
        diagnostics["refined_residual_radius"] = worst
        diagnostics["residual_radius"] = max(
            bounds_mod.residual_radius(g.inner, g.outer.gamma, db)
            for g, db in zip(cfg.gains, cfg.disturbance.bound))
    print(_dump_json({"bounds": doc, "diagnostics": diagnostics}), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smclab",
        description="Deterministic sliding-mode control runs, settling-time "
                    "bounds and bound audits.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out=True, scenario=True):
        if scenario:
            p.add_argument("--preset", help="bundled scenario name "
                                            f"(one of: {', '.join(list_presets())})")
            p.add_argument("--config", help="path to a scenario file")
        p.add_argument("--mode", default=bounds_mod.REDERIVED,
                       choices=[bounds_mod.LITERAL, bounds_mod.REDERIVED,
                                "paper-literal"],
                       help="bound mode used for the audit")
        p.add_argument("--dt", type=float, default=None, help="override step size")
        p.add_argument("--horizon", type=float, default=None,
                       help="override run length")
        if needs_out:
            p.add_argument("--out", required=True, help="output directory")

    p_sim = sub.add_parser("simulate", help="run one scenario")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="run several presets on shared settings")
    p_cmp.add_argument("presets", nargs="+", help="preset names; first is baseline")
    add_common(p_cmp, scenario=False)
    p_cmp.set_defaults(func=cmd_compare)

    p_swp = sub.add_parser("sweep", help="run a base scenario over overrides")
    add_common(p_swp)
    p_swp.add_argument("--sweep", help="JSON file with override mappings")
    p_swp.set_defaults(func=cmd_sweep)

    p_bnd = sub.add_parser("bounds", help="print the analytic bound report")
    add_common(p_bnd, needs_out=False)
    p_bnd.set_defaults(func=cmd_bounds)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"simulation diverged: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
