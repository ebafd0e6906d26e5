use thiserror::Error;

/// Every failure the geometry pipeline can report. Degenerate input is
/// surfaced as a typed error, never as a sentinel value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point {coords:?} is outside the domain of chart `{chart}`")]
    OutOfDomain { chart: String, coords: Vec<f64> },

    #[error("metric of chart `{chart}` is degenerate (smallest eigenvalue {min_eigenvalue:e})")]
    DegenerateMetric { chart: String, min_eigenvalue: f64 },

    #[error("non-finite value produced while evaluating {what}")]
    NonFinite { what: &'static str },

    #[error("plane is degenerate (Gram determinant {gram:e})")]
    DegeneratePlane { gram: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("submersion differential has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("differential is not an isometry on the horizontal space (defect {defect:e})")]
    NotRiemannian { defect: f64 },

    #[error("scenario `{scenario}` has no {what}")]
    MissingStructure { scenario: String, what: &'static str },

    #[error("scenario `{scenario}` declares no space-form constant c")]
    MissingC { scenario: String },

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("{theorem} does not apply: {reason}")]
    NotApplicable { theorem: String, reason: String },

    #[error("array shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type GeomResult<T> = Result<T, GeomError>;
