"""smclab: a deterministic simulation lab for two-region sliding-mode
control laws, their settling-time bounds, and bound audits.

The package couples three layers: plants and disturbance signals
(``dynamics``), control laws (``controllers``), and closed-form entry
and in-layer time bounds (``bounds``). A fixed-step engine
(``simengine``) produces bit-reproducible trajectories, and ``analysis``
measures metrics and audits every run against the analytic bounds.
Benchmark scenarios ship as presets; see the ``smclab`` CLI.
"""

from .analysis import (AuditReport, MetricsReport, audit_bounds,
                       check_skew_symmetry, entry_and_settle, iae,
                       lyapunov_violations, mean_control, metrics_report,
                       residual_sup, rms_error, sato_slope)
from .bounds import (LITERAL, MODES, REDERIVED, BoundReport, el_bounds,
                     first_order_bounds, gain_jump_at_eps,
                     refined_residual_radius, residual_radius, sato_bounds,
                     t_in_erf_bound, t_in_poly_bound, t_out_bound,
                     t_sato_bound)
from .config import (ExpectedMetrics, ScenarioPreset, list_presets,
                     load_config, load_preset, load_scenario, load_sweep_spec,
                     scenario_bounds)
from .controllers import (HybridGainParams, InnerLawParams, OuterGainParams,
                          SatoParams, SlidingSurface, control_el,
                          control_first_order, control_sato, gain_inner_erf,
                          gain_inner_poly, gain_outer, hybrid_gain, sgn,
                          sliding_variable)
from .dynamics import (DisturbanceSpec, ManipulatorState, TwoLinkParams,
                       coriolis_matrix, disturbance_eval, gravity_vector,
                       inertia_eigenvalue_range, integrator_rhs,
                       manipulator_rhs, mass_matrix)
from .errors import (AuditError, ConfigurationError, DivergenceError,
                     InfeasibilityError)
from .simengine import (ReferenceSpec, SimConfig, SweepOutcome, Trajectory,
                        apply_overrides, simulate, sweep)

__version__ = "0.1.0"

__all__ = [
    "AuditError", "AuditReport", "BoundReport", "ConfigurationError",
    "DisturbanceSpec", "DivergenceError", "ExpectedMetrics",
    "HybridGainParams", "InfeasibilityError", "InnerLawParams", "LITERAL",
    "ManipulatorState", "MetricsReport", "MODES", "OuterGainParams",
    "REDERIVED", "ReferenceSpec", "SatoParams", "ScenarioPreset",
    "SimConfig", "SlidingSurface", "SweepOutcome", "Trajectory",
    "TwoLinkParams", "apply_overrides", "audit_bounds",
    "check_skew_symmetry", "control_el", "control_first_order",
    "control_sato", "coriolis_matrix", "disturbance_eval", "el_bounds",
    "entry_and_settle", "first_order_bounds", "gain_inner_erf",
    "gain_inner_poly", "gain_jump_at_eps", "gain_outer", "gravity_vector",
    "hybrid_gain", "iae", "inertia_eigenvalue_range", "integrator_rhs",
    "list_presets", "load_config", "load_preset", "load_scenario",
    "load_sweep_spec", "lyapunov_violations", "manipulator_rhs",
    "mass_matrix", "mean_control", "metrics_report", "refined_residual_radius",
    "residual_radius", "residual_sup", "rms_error", "sato_bounds",
    "sato_slope", "scenario_bounds", "sgn", "simulate", "sliding_variable",
    "sweep", "t_in_erf_bound", "t_in_poly_bound", "t_out_bound",
    "t_sato_bound",
]
