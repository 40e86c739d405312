# The first-order benchmark: three controllers, one disturbance.
#
# Reruns the bundled comparison scenario (x0 = 3, d = 0.4 sin 5t,
# dt = 1e-3, 8 s) for the two-region law with each inner variant and the
# norm-normalized constant-magnitude baseline, then prints the metric
# table with percent decreases against the baseline.
#
# The last section reruns the poly controller with the switch radius
# shrunk below the discretization scale ("microlayer"). That variant
# reproduces the bundled reference effort value: with a micro layer the
# state chatters at the origin and the logged effort sits at the k0
# floor (~0.8), while the faithful 0.08 layer hands over to the poly
# inner gain (< 0.44 inside), cutting the effort average well below the
# reference. The comparison quantifies how much of the reported effort
# figure is a chatter artifact rather than a property of the inner law.
#
# Run: python demos/02_first_order_benchmark.py

import numpy as np

from smclab import load_preset, metrics_report, simulate

PRESETS = ("fo-sato", "fo-hybrid-poly", "fo-hybrid-erf", "fo-hybrid-poly-microlayer")

rows = {}
trajectories = {}
for name in PRESETS:
    scenario = load_preset(name)
    traj = simulate(scenario.config)
    rows[name] = metrics_report(traj)
    trajectories[name] = traj

base = rows["fo-sato"]
print(f"{'preset':30s} {'rms':>8s} {'iae':>8s} {'mean_u':>8s} "
      f"{'t_entry':>8s} {'t_settle':>9s} {'residual':>9s}")
for name, m in rows.items():
    settle = "none" if m.t_settle is None else f"{m.t_settle:.3f}"
    print(f"{name:30s} {m.rms:8.4f} {m.iae:8.4f} {m.mean_u:8.4f} "
          f"{m.t_entry:8.3f} {settle:>9s} {m.residual_sup:9.4f}")

print("\npercent decrease vs fo-sato:")
for name, m in rows.items():
    if name == "fo-sato":
        continue
    print(f"  {name:30s} rms {100 * (1 - m.rms / base.rms):5.1f}%"
          f"   iae {100 * (1 - m.iae / base.iae):5.1f}%"
          f"   mean_u {100 * (1 - m.mean_u / base.mean_u):5.1f}%")

# Reference-target verdicts bundled with each preset (informational).
print("\nbundled reference targets:")
for name in PRESETS:
    scenario = load_preset(name)
    if scenario.expected is None:
        continue
    verdict = scenario.expected.evaluate(rows[name].to_dict())
    flags = ", ".join(f"{k} {'met' if v['within'] else 'MISSED'}"
                      for k, v in sorted(verdict.items()))
    print(f"  {name:30s} {flags}")

print("\nreading: the faithful fo-hybrid-poly meets the rms/iae references "
      "but not the effort reference;\nthe microlayer variant reproduces all "
      "three, pinning the reference effort value to origin chatter at the "
      "k0 level.")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not available; skipping figure")
else:
    import os
    os.makedirs("demos/output", exist_ok=True)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for name in ("fo-sato", "fo-hybrid-poly", "fo-hybrid-erf"):
        traj = trajectories[name]
        ax1.plot(traj.t, traj.state[:, 0], label=name, lw=0.9)
        ax2.plot(traj.t, traj.u[:, 0], label=name, lw=0.6, alpha=0.8)
    ax1.set_ylabel("state")
    ax1.legend()
    ax2.set_ylabel("control")
    ax2.set_xlabel("time [s]")
    fig.tight_layout()
    fig.savefig("demos/output/first_order_benchmark.png", dpi=120)
    print("\nwrote demos/output/first_order_benchmark.png")
