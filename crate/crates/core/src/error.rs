use thiserror::Error;

/// Errors raised by the analysis, construction and certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero input: the zero polynomial is not accepted here")]
    ZeroPolynomial,

    #[error("degree constraint d>n violated (d = {d}, n = {n})")]
    DegreeConstraint { d: usize, n: usize },

    #[error("not self-inversive: {reason} (first failing index {index})")]
    NotSelfInversive { index: usize, reason: String },

    #[error("|lambda| = {modulus} is not on the unit circle")]
    NotUnimodular { modulus: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("identity hypothesis violated: {0}")]
    IdentityHypothesis(String),

    #[error("reconstruction mismatch for {what}: relative error {error:e} exceeds {tol:e}")]
    ReconstructionMismatch { what: String, error: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
