//! Moment-level similarity and distinguishability measures.

mod bounds;
mod chernoff;
mod overlap;
mod scalar;

pub use bounds::{bounds_report, BoundsReport, FvgCheck, CHAIN_SLACK, FVG_SLACK};
pub use chernoff::{chernoff_bound, chernoff_grid, ChernoffArgmin, ChernoffResult};
pub use overlap::{
    bhattacharyya, default_schedule, fidelity_limit_sweep, fidelity_mixed_pure, fidelity_report,
    s_overlap, schedule_from_exponents, LimitSweep, OverlapReport, SweepPoint, CONDITION_LIMIT,
    UNDERFLOW_QUAD_FORM,
};
pub use scalar::{
    angular_distance, bures_distance, fidelity_bounds_from_trace, fidelity_trace_bounds, g_p,
    helstrom_error, lambda_p, FidelityBounds, TraceDistanceBounds,
};
