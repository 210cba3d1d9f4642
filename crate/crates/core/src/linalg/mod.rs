//! Dense real linear algebra: eigenvalues, eigenvectors of simple
//! eigenvalues, and linear solves.

mod complex;
mod eig;
mod eigvec;
pub mod lu;
mod matrix;

use thiserror::Error;

pub use complex::{dot_t, norm2, Complex};
pub use eig::{eig_all, SWEEPS_PER_ORDER};
pub use eigvec::{eigen_triple, EigenTriple, MAX_INVERSE_ITERS, RESIDUAL_RTOL, TOL_ORTHO};
pub use lu::{determinant, solve_linear, LuFactors};
pub use matrix::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("ill-conditioned eigenvalue: |wᵀv| = {w_dot_v:.3e}")]
    IllConditioned { w_dot_v: f64 },
    #[error("singular system: pivot {pivot:.3e} at column {index}")]
    SingularSystem { index: usize, pivot: f64 },
}
