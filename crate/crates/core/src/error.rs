use thiserror::Error;

use crate::graph::GraphError;
use crate::linalg::LinalgError;
use crate::model::ModelError;
use crate::solver::SolveError;

/// Top-level error for end-to-end operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigenvalues are not distinct: minimum gap {gap:.3e} ≤ {tol:.3e}")]
    RepeatedEigenvalues { gap: f64, tol: f64 },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or invalid input.
    BadInput,
    /// Well-formed input outside the construction's hypotheses.
    Infeasible,
    /// The numerics gave up.
    Numerical,
}

fn linalg_kind(e: &LinalgError) -> ErrorKind {
    match e {
        LinalgError::NonSquare { .. } | LinalgError::NonFinite { .. } => ErrorKind::BadInput,
        LinalgError::DimensionMismatch(_) => ErrorKind::BadInput,
        _ => ErrorKind::Numerical,
    }
}

fn model_kind(e: &ModelError) -> ErrorKind {
    match e {
        ModelError::DiscViolation(_) => ErrorKind::Numerical,
        ModelError::DimensionMismatch(_) => ErrorKind::Infeasible,
        ModelError::DegenerateSpectrum => ErrorKind::BadInput,
        _ => ErrorKind::BadInput,
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Graph(GraphError::MatchingTooSmall { .. }) => ErrorKind::Infeasible,
            Error::Graph(_) => ErrorKind::BadInput,
            Error::Model(e) => model_kind(e),
            Error::Linalg(e) => linalg_kind(e),
            Error::Solve(e) => match e {
                SolveError::Linalg(e) => linalg_kind(e),
                SolveError::Model(e) => model_kind(e),
                SolveError::ModeUnsupported(_) => ErrorKind::Infeasible,
                SolveError::InvalidTargets(_) => ErrorKind::BadInput,
                SolveError::NoConvergence { .. }
                | SolveError::StepUnderflow { .. }
                | SolveError::MaxSteps { .. }
                | SolveError::AtHomotopy { .. } => ErrorKind::Numerical,
            },
            Error::DimensionMismatch(_) | Error::RepeatedEigenvalues { .. } => ErrorKind::Infeasible,
            Error::InvalidRequest(_) => ErrorKind::BadInput,
        }
    }

    pub fn is_step_underflow(&self) -> bool {
        matches!(self, Error::Solve(SolveError::StepUnderflow { .. }))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
