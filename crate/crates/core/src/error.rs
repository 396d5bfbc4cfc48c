use thiserror::Error;

use crate::report::VerificationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "input vector {index} is linearly dependent on its predecessors (residual {residual:e})"
    )]
    DependentInput { index: usize, residual: f64 },

    #[error("matrix is not Hermitian (max deviation {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("linear map is singular")]
    SingularMap,

    #[error("linear map is too ill-conditioned (condition estimate {estimate:e} > {limit:e})")]
    IllConditioned { estimate: f64, limit: f64 },

    #[error("metric is not symmetric positive definite")]
    DegenerateMetric,

    #[error("dimension {0} is even, an almost contact structure needs odd dimension")]
    EvenDimension(usize),

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("almost contact axioms violated")]
    AlmostContactViolation(Box<VerificationReport>),

    #[error("Kahler conditions on the Reeb complement violated ({check}: residual {residual:e})")]
    KahlerViolation { check: &'static str, residual: f64 },

    #[error("Reeb complement is not abelian (residual {residual:e})")]
    NonAbelianComplement { residual: f64 },

    #[error("reconstruction from normal form does not match the input (residual {residual:e})")]
    ReconstructionMismatch { residual: f64 },
}

impl Error {
    /// Short variant name used in CLI reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DependentInput { .. } => "DependentInput",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SingularMap => "SingularMap",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::DegenerateMetric => "DegenerateMetric",
            Error::EvenDimension(_) => "EvenDimension",
            Error::TooLarge { .. } => "TooLarge",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidStructure(_) => "InvalidStructure",
            Error::AlmostContactViolation(_) => "AlmostContactViolation",
            Error::KahlerViolation { .. } => "KahlerViolation",
            Error::NonAbelianComplement { .. } => "NonAbelianComplement",
            Error::ReconstructionMismatch { .. } => "ReconstructionMismatch",
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
