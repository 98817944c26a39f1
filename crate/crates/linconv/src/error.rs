//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator {operator} not applicable: {reason}")]
    OperatorNotApplicable { operator: String, reason: String },

    /// A point outside `dom ∂φ`; the least-norm subgradient does not exist
    /// there (the convention `‖∂⁰φ(x)‖ = +∞` is surfaced as this error).
    #[error("point outside the subdifferential domain (coordinate {index})")]
    OutsideDomain { index: usize },

    #[error("empty effective sample set ({rejected} candidates rejected)")]
    EmptySampleSet { rejected: usize },

    #[error(
        "solver diverged at iteration {iteration}: objective gap {gap:.6e} exceeded the guard"
    )]
    Diverged { iteration: usize, gap: f64 },

    #[error("necessity not applicable: observed rate {tau} shows no linear convergence")]
    NecessityNotApplicable { tau: f64 },

    #[error("unsupported composite structure: {0}")]
    UnsupportedComposite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
