use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("every polynomial coefficient vanishes")]
    AllCoefficientsZero,

    #[error("matrix is not Hermitian (max |H - H^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("solid angle undefined: antipodal or degenerate vertex configuration")]
    UndefinedSolidAngle,

    #[error("pre- and postselected states are orthogonal (|<f|i>| = {overlap:e})")]
    OrthogonalSelection { overlap: f64 },

    #[error("final-state parameter eta = {eta} exceeds pi/2, no real canonicalizing rotation")]
    EtaOutOfRange { eta: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("projector context is not a complete orthogonal set: {0}")]
    IncompleteContext(String),

    #[error("ABL denominator vanishes: no postselection is possible in this context")]
    ZeroDenominator,

    #[error("state is not in canonical product form: {0}")]
    NotCanonical(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors that signal a physical singularity of the
    /// pre/postselection rather than malformed input.
    pub fn is_physical_singularity(&self) -> bool {
        matches!(
            self,
            Error::OrthogonalSelection { .. }
                | Error::EtaOutOfRange { .. }
                | Error::UndefinedSolidAngle
                | Error::ZeroDenominator
        )
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AllCoefficientsZero => "AllCoefficientsZero",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::UndefinedSolidAngle => "UndefinedSolidAngle",
            Error::OrthogonalSelection { .. } => "OrthogonalSelection",
            Error::EtaOutOfRange { .. } => "EtaOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidState(_) => "InvalidState",
            Error::IncompleteContext(_) => "IncompleteContext",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::NotCanonical(_) => "NotCanonical",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
