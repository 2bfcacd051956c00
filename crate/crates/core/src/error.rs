use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two ordinal-sum summand intervals intersect.
    #[error("ordinal-sum summands ({0}, {1}) and ({2}, {3}) overlap")]
    OverlappingSummands(f64, f64, f64, f64),

    /// An ordinal-sum summand has `lo >= hi`.
    #[error("degenerate ordinal-sum summand ({0}, {1}): lo must be < hi")]
    DegenerateSummand(f64, f64),

    /// A constructor's ordering constraint was violated.
    #[error("bad shape: {0}")]
    BadShape(String),

    /// Interval image is only defined for continuous t-norms.
    #[error("t-norm `{0}` is not continuous; interval images may not be intervals")]
    NotContinuous(String),

    /// A function is outside L_u: some alpha-cut is empty or disconnected.
    #[error("function is not in L_u: {0}")]
    NotInLu(String),

    /// A cut family violates the nesting invariant.
    #[error("cut family is not nested at level index {0}")]
    NotNested(usize),

    /// Two cut families are indexed by different alpha grids.
    #[error("cut families use different alpha grids")]
    GridMismatch,

    /// The cut engine was invoked outside its correctness contract.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// The requested necessity demo cannot certify a violation.
    #[error("not a counterexample: {0}")]
    NotACounterexample(String),

    /// A field of a parsed document failed validation.
    #[error("invalid field `{field}`: {reason}")]
    InvalidField { field: String, reason: String },
}

impl Error {
    pub fn invalid_field(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
