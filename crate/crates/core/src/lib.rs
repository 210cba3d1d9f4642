//! Real matrices with a prescribed spectrum and a prescribed graph.
//!
//! Starting from a block-diagonal seed whose eigenvalues are the targets, a
//! continuation in the off-block entries drives the matrix onto the requested
//! sparsity pattern while Newton steps on the block entries keep the spectrum
//! fixed.

mod error;

pub mod apps;
pub mod batch;
pub mod graph;
pub mod instance;
pub mod linalg;
pub mod model;
pub mod solver;

pub use error::{Error, ErrorKind, Result};
