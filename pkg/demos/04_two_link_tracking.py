# Two-link manipulator tracking under matched disturbance and unmodeled
# friction.
#
# Runs the bundled two-link scenario: q(0) = [2, 2] tracking
# qd = [0.1 sin(pi t), 0.2 sin(pi t)] against d = [sin t, 0.1 cos t],
# with viscous friction living in the plant only. Prints the tracking
# summary, the per-joint bound audit (honestly failed: the per-component
# bound treats each sliding channel as a unit-inertia integrator, and
# the inertia matrix here is far from unity), the inertia eigenvalue
# range, and the finite-difference skew-symmetry residual.
#
# Run: python demos/04_two_link_tracking.py

import numpy as np

from smclab import (audit_bounds, check_skew_symmetry, entry_and_settle,
                    inertia_eigenvalue_range, load_preset, metrics_report,
                    scenario_bounds, simulate)

for name in ("el-hybrid-poly", "el-hybrid-erf"):
    scenario = load_preset(name)
    cfg = scenario.config
    traj = simulate(cfg)
    t_entry, _ = entry_and_settle(traj, eps=0.05, delta=1e-6)
    tail = float(np.max(np.abs(traj.state[traj.t >= 5.0])))
    peak_tau = float(np.max(np.abs(traj.u)))
    print(f"{name}:")
    print(f"  error below 0.05 rad from t = {t_entry:.3f} s; "
          f"max |e| after 5 s = {tail:.4f} rad; peak |tau| = {peak_tau:.1f} N m")

    report = scenario_bounds(cfg, "rederived")
    audit = audit_bounds(traj, report, cfg.audit_radius)
    print(f"  sliding layer entry measured {audit.t_entry_measured:.3f} s vs "
          f"bound {audit.t_out_bound:.3f} s -> respected = {audit.respected}")
    for comp in report.per_component:
        print(f"    joint {comp.joint}: t_out <= {comp.t_out:.3f}, "
              f"t_in <= {comp.t_in:.3f}, gain jump magnitude {comp.gain_jump_at_eps:.3f}")

p = load_preset("el-hybrid-poly").config.two_link
lo, hi = inertia_eigenvalue_range(p)
print(f"\ninertia eigenvalues over all elbow angles: [{lo:.3f}, {hi:.3f}]")
print("the per-component bound divides distances by (k0 - dbar) as if the "
      "inertia were unity; with\neigenvalues up to "
      f"{hi:.1f} (and friction unmodeled) the measured entry lands above "
      "the bound, and the\naudit reports that rather than hiding it.")

resid = check_skew_symmetry(p, samples=10_000)
print(f"\nskew-symmetry residual over 1e4 random draws: {resid:.3e} "
      "(finite-difference budget 1e-6)")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not available; skipping figure")
else:
    import os
    os.makedirs("demos/output", exist_ok=True)
    scenario = load_preset("el-hybrid-poly")
    traj = simulate(scenario.config)
    fig, axes = plt.subplots(3, 1, figsize=(8, 8), sharex=True)
    axes[0].plot(traj.t, traj.state[:, 0], label="e1")
    axes[0].plot(traj.t, traj.state[:, 1], label="e2")
    axes[0].axhline(0.05, color="gray", ls=":", lw=0.8)
    axes[0].axhline(-0.05, color="gray", ls=":", lw=0.8)
    axes[0].set_ylabel("tracking error [rad]")
    axes[0].legend()
    axes[1].plot(traj.t, traj.s[:, 0], label="s1")
    axes[1].plot(traj.t, traj.s[:, 1], label="s2")
    axes[1].set_ylabel("sliding variable")
    axes[1].legend()
    axes[2].plot(traj.t, traj.u[:, 0], label="tau1", lw=0.7)
    axes[2].plot(traj.t, traj.u[:, 1], label="tau2", lw=0.7)
    axes[2].set_ylabel("torque [N m]")
    axes[2].set_xlabel("time [s]")
    axes[2].legend()
    fig.tight_layout()
    fig.savefig("demos/output/two_link_tracking.png", dpi=120)
    print("\nwrote demos/output/two_link_tracking.png")
