use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite result while evaluating {context} at {at:?}")]
    NumericEvaluation { context: String, at: Vec<f64> },

    #[error("r = {r} outside the open domain ({lo}, {hi})")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    #[error("invalid warp function: {0}")]
    InvalidWarp(String),

    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureFailure {
        a: f64,
        b: f64,
        estimate: f64,
        error_bound: f64,
    },

    #[error("ill-conditioned comparison: {0}")]
    IllConditioned(String),

    #[error("point is not on the unit sphere (|x| = {norm})")]
    NotUnit { norm: f64 },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("integration blew up at r = {at}; valid on [{valid_lo}, {valid_hi}]")]
    IntegrationBlowUp { at: f64, valid_lo: f64, valid_hi: f64 },

    #[error("too many singular samples: {excluded} of {total} excluded")]
    Sampling { excluded: usize, total: usize },

    #[error("constraint violation: {0}")]
    Constraint(String),

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
