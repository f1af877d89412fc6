use thiserror::Error;

use crate::complex::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// The variants fall into three classes that the command line maps onto
/// distinct exit codes: hypothesis violations (the caller asked for
/// something the statement being checked does not cover), assertion
/// failures (a checked identity did not hold, which means a bug), and
/// input errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a unit of the valuation ring: {value} has valuation {valuation}")]
    NotAUnit { value: String, valuation: String },

    #[error("cannot divide in the valuation ring: numerator valuation {numerator} < pivot valuation {pivot}")]
    ValuationOrder { numerator: String, pivot: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("inverse of {value} is an infinite series; supply a finite precision")]
    InfinitePrecision { value: String },

    #[error("precision exhausted at {precision}: {detail}")]
    PrecisionExhausted { precision: String, detail: String },

    #[error("map is not filtered: {witness}")]
    NotFiltered { witness: String },

    #[error("not a chain map: {witness}")]
    NotChainMap { witness: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid complex: {}", .0.summary())]
    Validation(Box<ValidationReport>),

    #[error("hypothesis failure: {what} ({witness})")]
    HypothesisFailure { what: String, witness: String },

    #[error("separation failure: {0}")]
    SeparationFailure(String),

    #[error("assertion failure: {what} ({detail})")]
    AssertionFailure { what: String, detail: String },

    #[error("spectral filtration not realizable: {witness}")]
    NonFiltered { witness: String },

    #[error("factors have different minimal Maslov numbers: {0:?}")]
    MismatchedMaslov(Vec<u32>),

    #[error("format error at {location}: {message}")]
    Format { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Hypothesis,
    Assertion,
    Input,
}

impl Error {
    pub fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn hypothesis(what: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::HypothesisFailure {
            what: what.into(),
            witness: witness.into(),
        }
    }

    pub fn assertion(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::AssertionFailure {
            what: what.into(),
            detail: detail.into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::HypothesisFailure { .. }
            | Error::NonFiltered { .. }
            | Error::MismatchedMaslov(_)
            | Error::NotFiltered { .. }
            | Error::NotChainMap { .. }
            | Error::PrecisionExhausted { .. } => ErrorClass::Hypothesis,
            Error::AssertionFailure { .. }
            | Error::SeparationFailure(_)
            | Error::NotAUnit { .. }
            | Error::ValuationOrder { .. }
            | Error::DivisionByZero
            | Error::InfinitePrecision { .. } => ErrorClass::Assertion,
            Error::Format { .. }
            | Error::Validation(_)
            | Error::DimensionMismatch(_)
            | Error::Io(_) => ErrorClass::Input,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Hypothesis => 1,
            ErrorClass::Assertion => 2,
            ErrorClass::Input => 3,
        }
    }
}
