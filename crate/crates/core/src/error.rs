use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report. Domain errors carry a stable
/// machine-readable code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("half-plane intersection is unbounded")]
    UnboundedRegion,
    #[error("origin is not strictly interior to the polygon")]
    OriginNotInterior,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("marks are not in strictly convex position (not Fano)")]
    NotFano,
    #[error("polygon is not antipodally symmetric")]
    NotSpecialSymmetric,
    #[error("not a convex polygon: {0}")]
    NotConvex(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate weight matrix: {0}")]
    DegenerateMatrix(String),
    #[error("weight matrix is not admissible")]
    NotAdmissible,
    #[error("weight matrix is not in reduced form: {0}")]
    NotReduced(String),
    #[error("cannot normalize kernel columns: {0}")]
    NormalizationImpossible(String),
    #[error("k = {k} exceeds the brute-force limit {limit}")]
    TooLarge { k: usize, limit: usize },
    #[error("point is within {eps:e} of facet {facet}")]
    BoundaryProximity { facet: usize, eps: f64 },
    #[error("Newton iteration did not converge (residual {residual:e})")]
    NonConvergence { residual: f64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DEGENERATE_INPUT",
            Error::UnboundedRegion => "UNBOUNDED_REGION",
            Error::OriginNotInterior => "ORIGIN_NOT_INTERIOR",
            Error::InvalidFan(_) => "INVALID_FAN",
            Error::NotFano => "NOT_FANO",
            Error::NotSpecialSymmetric => "NOT_SPECIAL_SYMMETRIC",
            Error::NotConvex(_) => "NOT_CONVEX",
            Error::PreconditionFailed(_) => "PRECONDITION_FAILED",
            Error::InvalidWeights(_) => "INVALID_WEIGHTS",
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::DegenerateMatrix(_) => "DEGENERATE_MATRIX",
            Error::NotAdmissible => "NOT_ADMISSIBLE",
            Error::NotReduced(_) => "NOT_REDUCED",
            Error::NormalizationImpossible(_) => "NORMALIZATION_IMPOSSIBLE",
            Error::TooLarge { .. } => "TOO_LARGE",
            Error::BoundaryProximity { .. } => "BOUNDARY_PROXIMITY",
            Error::NonConvergence { .. } => "NON_CONVERGENCE",
            Error::InternalInconsistency(_) => "INTERNAL_INCONSISTENCY",
        }
    }
}
