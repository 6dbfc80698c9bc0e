use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spin j = {0} is not a non-negative half-integer")]
    InvalidSpin(f64),

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("annealing ratio undefined at Gamma = {0} (needs 0 < Gamma < 1)")]
    UndefinedRatio(f64),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("matrix does not commute with the m -> -m reflection (defect {defect:.3e})")]
    NotParitySymmetric { defect: f64 },

    #[error("negative inverse mass on the interior grid; crossings at {crossings:?}")]
    NegativeMass { crossings: Vec<f64> },

    #[error("minimum over Gamma hit the grid boundary at Gamma = {gamma} (kappa = {kappa})")]
    BoundaryMinimum { gamma: f64, kappa: f64 },

    #[error("no minimum: {0}")]
    NoMinimum(String),

    #[error("no bracketing solution for {what} in [{lo}, {hi}]")]
    NoBracket {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("point (Gamma = {gamma}, kappa = {kappa}) failed: {source}")]
    AtPoint {
        gamma: f64,
        kappa: f64,
        source: Box<Error>,
    },

    #[error("argument outside supported envelope: {0}")]
    OutOfEnvelope(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("grid not converged: {0}")]
    GridConvergence(String),

    #[error("goal unreachable from start")]
    Unreachable,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for errors caused by bad input rather than numerical trouble.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::InvalidSpin(_)
            | Error::InvalidParameter { .. }
            | Error::UndefinedRatio(_)
            | Error::OutOfEnvelope(_)
            | Error::Empty(_) => true,
            Error::AtPoint { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
