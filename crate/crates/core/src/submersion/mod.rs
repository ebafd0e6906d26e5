//! Riemannian submersions given in charts: splittings, the O'Neill tensors
//! `𝒯` and `𝒜`, and the fiber invariants built from them.
//!
//! `𝒯` and `𝒜` are evaluated pointwise by extending each argument with
//! constant coordinate components and recombining with the smooth
//! projector fields `P_V`, `P_H`. Tensoriality makes the result independent
//! of that choice.

mod map;
mod oneill;
mod sample;
mod scenario;

pub use map::MapExpr;
pub use oneill::{
    check_anti_invariant, configuration_with_extension, oneill_a_at, oneill_t_at, split_at,
    AntiInvarianceReport, OneillContext, Projected, SplitFrames,
};
pub use sample::{
    assemble_sample, central_derivative, classify_fibers, mean_curvature_field, FiberFlags,
    FiberNorms, OneillSample, Table3,
};
pub use scenario::{builtin_scenario, builtin_scenario_names, ScenarioFlags, SubmersionScenario};
