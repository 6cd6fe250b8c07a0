//! Upper and lower bounds, lattice sweeps and feasible regions.

mod baseline;
mod gap;
mod region;
mod report;
mod sweep;
mod weighted;

pub use baseline::{fekete_upper, lemniscate_tz, trigub_lower, UNION_CAPACITY_LEJA_LENGTH};
pub use gap::{neighborhood_invariance_check, GapEvaluator, NeighborhoodCheck, Verdict};
pub use region::{feasible_region, Region, RegionPoint, RegionSpec, RegionStrategy, DEFAULT_THRESHOLD};
pub use report::{BoundKind, BoundMethod, BoundReport};
pub use sweep::{
    simplex_lattice, sweep, sweep_lower_bound, sweep_report, unit_interval_scale, ClosedFormTwoFactor,
    ExponentConvention, Fidelity, LejaModel, Objective, PointValue, SweepConfig, SweepStrategy, SweepResult, WeightModel,
};
pub use weighted::{
    as_two_factor, constraint_value, rational_point_lower, rational_point_lower_alpha,
    rational_point_lower_closed_form, rational_point_lower_leja, robin_lower, robin_lower_closed_form,
    weighted_upper, CapacityMode, FORMULA_AGREEMENT_TOL,
};
