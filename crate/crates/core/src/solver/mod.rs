//! Eigenvalue derivatives, the `(x, y, z)` Jacobian, Newton correction, and
//! the continuation driver.

mod continuation;
mod derivative;
mod jacobian;
mod newton;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::model::ModelError;

pub use continuation::{
    check_mode, continuation_solve, ContinuationState, FillTargets, Mode, SolveConfig,
    SolveReport, StepRecord,
};
pub use derivative::{derivative_along, eigen_derivative, BasisDirection};
pub use jacobian::{evaluate, evaluate_f, jacobian_xyz, triples_at, EigenTriples, Evaluation};
pub use newton::{newton_correct, NewtonOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("Newton correction did not converge in {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("continuation step underflow at t = {t_reached} (step {step:.3e}); last failure: {last}")]
    StepUnderflow {
        t_reached: f64,
        step: f64,
        last: String,
    },
    #[error("continuation exceeded {steps} steps at t = {t_reached}")]
    MaxSteps { steps: usize, t_reached: f64 },
    #[error("mode not applicable: {0}")]
    ModeUnsupported(String),
    #[error("invalid fill targets: {0}")]
    InvalidTargets(String),
    #[error("at t = {t}: {source}")]
    AtHomotopy {
        t: f64,
        #[source]
        source: LinalgError,
    },
}

impl SolveError {
    pub(crate) fn at(t: f64, source: LinalgError) -> Self {
        SolveError::AtHomotopy { t, source }
    }
}
