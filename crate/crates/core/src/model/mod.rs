//! Problem data: target spectrum, the parameterized matrix family, the seed
//! matrix, and the disc system that labels eigenvalues.

mod disc;
pub mod io;
mod pattern;
mod spectrum;

use thiserror::Error;

pub use disc::{disc_radius, label_eigenvalues, DiscOccupancy, DiscSystem, LabeledValue};
pub use pattern::{assemble, build_seed, ParameterPoint, Pattern, Slot};
pub use spectrum::Spectrum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("degenerate spectrum: repeated values leave no room for disjoint discs")]
    DegenerateSpectrum,
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("disc violation: {0}")]
    DiscViolation(String),
    #[error("bad format: {0}")]
    BadFormat(String),
}
