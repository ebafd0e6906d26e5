//! Evaluators for the Chen-Ricci type inequalities of anti-invariant
//! submersions from quaternionic space forms, with equality-case checks.
//!
//! Every inequality is evaluated exactly as stated, from the pointwise
//! O'Neill data, the distribution curvatures and the space-form constant.
//! A verdict's `slack` is signed so that `slack ≥ 0` means the inequality
//! holds.

mod catalog;
mod evaluate;
mod report;

#[cfg(test)]
mod tests;

pub use catalog::{CatalogEntry, Direction, EqualityCondition, Requirement, TheoremCatalog, TheoremId};
pub use evaluate::{
    equality_flags_at, evaluate_theorem, evaluate_with, verdict_from_terms, AlternativeSlack, EqualityFlags,
    TheoremContext, TheoremVerdict, Terms, UnitChoice,
};
pub use report::{
    evaluate_point, point_seed, scenario_report, summarize, unit_choices, PointOutcome, ScenarioReport, Skipped,
    TheoremSummary,
};
