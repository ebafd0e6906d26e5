//! Numerical differential geometry of Riemannian submersions from
//! quaternionic space forms.
//!
//! The crate builds chart-based Riemannian manifolds with exact
//! (autodiff) curvature, quaternionic Hermitian triples, submersion
//! scenarios with their O'Neill tensors `𝒯` and `𝒜`, the
//! Gauss-Codazzi type identities, and evaluators for the Chen-Ricci
//! type inequalities together with their equality cases.

pub mod autodiff;
pub mod error;
pub mod geom;
pub mod identities;
pub mod inequalities;
pub mod linalg;
pub mod quat;
pub mod quaternion;
pub mod submersion;
pub mod tolerances;

pub use error::{GeomError, GeomResult};
