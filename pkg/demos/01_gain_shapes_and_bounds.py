# Gain anatomy and analytic time bounds.
#
# Walks the two-region gain: a bounded outer law that saturates between
# k0 and k0 + k1, and two interchangeable inner laws (mixed-power and
# exponential) that take over inside the layer |x| <= eps. Prints the
# switch discontinuity and the entry/in-layer time bounds in both modes,
# then the practical-stability residual radii for the poly law.
#
# Run: python demos/01_gain_shapes_and_bounds.py

import numpy as np

from smclab import (HybridGainParams, InnerLawParams, OuterGainParams,
                    first_order_bounds, gain_inner_erf, gain_inner_poly,
                    gain_jump_at_eps, gain_outer, hybrid_gain,
                    refined_residual_radius, residual_radius)

DBAR = 0.5
outer = OuterGainParams(k0=0.8, k1=0.8, eps0=0.25, gamma=0.7)
poly = InnerLawParams(law="poly", a=2.5, b=1.2, alpha=1.8)
erf = InnerLawParams(law="erf", U=1.2)
hybrid_poly = HybridGainParams(outer=outer, inner=poly, eps=0.08)
hybrid_erf = HybridGainParams(outer=outer, inner=erf, eps=0.08)

# The outer gain is bounded: it rises from k0 through k0 + k1/2 at the
# shaping radius eps0 and saturates below k0 + k1, so large initial
# errors never provoke large control peaks.
print("outer gain profile:")
for x in (0.0, 0.08, 0.25, 1.0, 3.0, 1e3, 1e6):
    print(f"  |x| = {x:>10.2f}  ->  G_out = {gain_outer(x, outer):.6f}")

# Inside the layer the poly law vanishes at the origin while the erf law
# keeps a strictly positive floor, trading smoothness at zero for a
# disturbance-dominating magnitude.
print("\ninner gains across the layer:")
for x in (0.0, 0.02, 0.05, 0.08):
    print(f"  |x| = {x:.2f}  poly = {gain_inner_poly(x, 0.7, poly):>8.4f}"
          f"   erf = {gain_inner_erf(x, 1.2):>8.4f}")

# The switch at eps is strict (inner branch owns the boundary point) and
# generally discontinuous; the jump is a tuning diagnostic.
print(f"\ngain jump at eps (outer - inner): poly {gain_jump_at_eps(hybrid_poly):+.4f},"
      f" erf {gain_jump_at_eps(hybrid_erf):+.4f}")

# Entry-time bounds from x0 = 3 in both modes. The literal mode prints
# the originally stated closed form, whose second term clamps to zero
# whenever eps < eps0; the rederived mode re-integrates both ranges of
# the differential inequality and is the one audits use.
print("\nanalytic bounds from x0 = 3 (disturbance bound 0.5):")
for law_name, gains in (("poly", hybrid_poly), ("erf", hybrid_erf)):
    for mode in ("literal", "rederived"):
        rep = first_order_bounds(3.0, gains, DBAR, mode)
        print(f"  {law_name:4s} {mode:9s}: t_out <= {rep.t_out:7.4f}"
              f"   t_in <= {rep.t_in:6.4f}   t_total <= {rep.t_total:7.4f}")

# With a bounded disturbance the poly inner gain loses to the disturbance
# near the origin: trajectories stop at a residual set rather than zero.
coarse = residual_radius(poly, 0.7, DBAR)
refined = refined_residual_radius(poly, 0.7, DBAR)
print(f"\npoly-law residual radius: coarse (a-term only) {coarse:.4f},"
      f" refined (both terms) {refined:.4f}")

# Optional figure: the full two-region gain profile.
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not available; skipping figure")
else:
    x = np.linspace(-0.5, 0.5, 2001)
    fig, ax = plt.subplots(figsize=(7, 4))
    for gains, label in ((hybrid_poly, "poly inner"), (hybrid_erf, "erf inner")):
        ax.plot(x, [hybrid_gain(v, gains) for v in x], label=label)
    ax.axvline(0.08, color="gray", ls=":", lw=0.8)
    ax.axvline(-0.08, color="gray", ls=":", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("gain magnitude")
    ax.legend()
    fig.tight_layout()
    out = "demos/output"
    import os
    os.makedirs(out, exist_ok=True)
    fig.savefig(f"{out}/gain_profiles.png", dpi=120)
    print(f"\nwrote {out}/gain_profiles.png")
