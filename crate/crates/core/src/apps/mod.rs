//! End-to-end operations built on the solver.

mod verify;

use crate::graph::{max_matching, plan_relabeling, Graph, GraphError};
use crate::linalg::{eig_all, DenseMatrix};
use crate::model::{disc_radius, Spectrum};
use crate::solver::{continuation_solve, FillTargets, Mode, SolveConfig, SolveReport};
use crate::{Error, Result};

pub use verify::{verify, PatternViolation, VerificationReport, VerifyTolerances, NONZERO_FLOOR};

/// Relative eigenvalue gap below which a matrix counts as having repeated
/// eigenvalues, scaled by `1 + ‖m‖_F`.
pub const GAP_RTOL: f64 = 1e-8;

/// Build a matrix with spectrum `s` whose graph is `g`.
///
/// Finds a maximum matching, relabels so `k` matched pairs sit on the leading
/// 2x2 blocks, runs the continuation, and maps the result back to the
/// original vertex labels.
pub fn solve_instance(s: &Spectrum, g: &Graph, mode: Mode, cfg: &SolveConfig) -> Result<SolveReport> {
    if g.n() != s.n() {
        return Err(Error::DimensionMismatch(format!(
            "graph has {} vertices, spectrum needs 2k + l = {}",
            g.n(),
            s.n()
        )));
    }
    let matching = max_matching(g);
    if matching.len() < s.k() {
        return Err(GraphError::MatchingTooSmall {
            k: s.k(),
            nu: matching.len(),
        }
        .into());
    }
    let (relabel, pattern) = plan_relabeling(g, &matching, s.k())?;
    let d = disc_radius(s)?;
    let fill = FillTargets::default_for(&pattern, &d, mode, cfg);
    let mut report = continuation_solve(s, &pattern, &fill, mode, cfg)?;
    report.matrix = relabel.restore_matrix(&report.matrix);
    Ok(report)
}

/// Smallest distance between two eigenvalues (infinite for fewer than two).
pub fn min_eigen_gap(eigs: &[crate::linalg::Complex]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            gap = gap.min((eigs[i] - eigs[j]).abs());
        }
    }
    gap
}

/// A real irreducible tridiagonal matrix with the same (distinct) eigenvalues
/// as `m`, hence similar to it.
pub fn tridiagonalize(m: &DenseMatrix, cfg: &SolveConfig) -> Result<SolveReport> {
    let eigs = eig_all(m)?;
    let tol = GAP_RTOL * (1.0 + m.frobenius_norm());
    let gap = min_eigen_gap(&eigs);
    if gap <= tol {
        return Err(Error::RepeatedEigenvalues { gap, tol });
    }
    let s = Spectrum::from_eigenvalues(&eigs)?;
    solve_instance(&s, &Graph::path(m.rows()), Mode::Generic, cfg)
}
