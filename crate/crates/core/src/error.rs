use thiserror::Error;

/// Failure modes of the library. Each variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("curve passes through the origin (|sample| = {modulus:e})")]
    CurveThroughOrigin { modulus: f64 },
    #[error("curve undersampled: argument increment {increment} >= pi")]
    UndersampledCurve { increment: f64 },
    #[error("planes are not transverse (|det| = {det:e})")]
    NotTransverse { det: f64 },
    #[error("plane is not totally real (|det| = {det:e})")]
    NotTotallyReal { det: f64 },
    #[error("eigenvalues not distinct and real (discriminant = {discriminant:e})")]
    EigenvalueDegenerate { discriminant: f64 },
    #[error("commutator determinant not positive ({det_commutator:e})")]
    CommutatorNotPositive { det_commutator: f64 },
    #[error("cubic is not factorable (residual {residual:e})")]
    NotFactorable { residual: f64 },
    #[error("branch undefined at this point: {0}")]
    BranchUndefined(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index polynomial has a root {distance:e} from the unit circle")]
    RootOnCircle { distance: f64 },
    #[error("the dbar-derivative vanishes off the origin (root {distance:e} from the unit circle)")]
    NotIsolatedSingularity { distance: f64 },
    #[error("undersampled: {0}")]
    Undersampled(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "NonFinite",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::CurveThroughOrigin { .. } => "CurveThroughOrigin",
            Error::UndersampledCurve { .. } => "UndersampledCurve",
            Error::NotTransverse { .. } => "NotTransverse",
            Error::NotTotallyReal { .. } => "NotTotallyReal",
            Error::EigenvalueDegenerate { .. } => "EigenvalueDegenerate",
            Error::CommutatorNotPositive { .. } => "CommutatorNotPositive",
            Error::NotFactorable { .. } => "NotFactorable",
            Error::BranchUndefined(_) => "BranchUndefined",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::RootOnCircle { .. } => "RootOnCircle",
            Error::NotIsolatedSingularity { .. } => "NotIsolatedSingularity",
            Error::Undersampled(_) => "Undersampled",
            Error::HypothesisViolated(_) => "HypothesisViolated",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
