//! Numerical thresholds shared across the crate.
//!
//! Autodiff quantities are exact up to rounding, so their thresholds sit
//! close to machine precision. Anything built from finite-difference
//! fields uses the relaxed `FIELD_IDENTITY`.

/// Orthonormality defect allowed in a frame.
pub const TAU_FRAME: f64 = 1e-9;
/// Smallest admissible metric eigenvalue.
pub const EPS_PD: f64 = 1e-12;
/// Residual norm below which Gram-Schmidt drops a vector.
pub const TAU_RANK: f64 = 1e-9;
/// Smallest admissible Gram determinant of a plane.
pub const EPS_PLANE: f64 = 1e-12;
/// Relative residual for curvature identities evaluated by autodiff.
pub const IDENTITY_REL: f64 = 1e-7;
/// Quaternionic structure axioms.
pub const STRUCTURE: f64 = 1e-9;
/// Flags such as "totally geodesic" or "𝒜 = 0".
pub const TAU_FLAG: f64 = 1e-7;
/// Equality detection on inequality slack.
pub const TAU_EQ: f64 = 1e-7;
/// Allowed negative slack for purely algebraic inequalities.
pub const TAU_SLACK_ALGEBRAIC: f64 = 1e-7;
/// Allowed negative slack where δ(N) enters.
pub const TAU_SLACK_FIELD: f64 = 1e-4;
/// Step for central differences of tensor-built fields.
pub const H_FIELD: f64 = 1e-4;
/// Identities that involve ∇𝒯, ∇𝒜 or δ(N).
pub const FIELD_IDENTITY: f64 = 1e-4;
/// Allowed isometry defect of the differential on horizontal vectors.
pub const ISOMETRY: f64 = 1e-6;
/// Singular value below which the differential counts as rank deficient.
pub const RANK_SINGULAR: f64 = 1e-9;
