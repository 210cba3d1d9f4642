use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::linalg::{eig_all, DenseMatrix};
use crate::model::Spectrum;

/// Smallest magnitude that counts as a written (nonzero) entry.
pub const NONZERO_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerances {
    pub nonzero_floor: f64,
    /// Maximum greedy-matched distance between computed and target eigenvalues.
    pub spectrum_tol: f64,
}

impl VerifyTolerances {
    /// `nonzero_floor = 1e-12`, `spectrum_tol = 1e-8 (1 + ‖Λ‖∞)`.
    pub fn for_spectrum(s: &Spectrum) -> Self {
        Self::with_rtol(s, 1e-8)
    }

    pub fn with_rtol(s: &Spectrum, rtol: f64) -> Self {
        VerifyTolerances {
            nonzero_floor: NONZERO_FLOOR,
            spectrum_tol: rtol * (1.0 + s.inf_norm()),
        }
    }
}

/// An off-diagonal entry that disagrees with the graph (zero-based indices).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternViolation {
    pub row: usize,
    pub col: usize,
    pub value: f64,
    pub edge_present: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub dimensions_ok: bool,
    pub pattern_ok: bool,
    pub spectrum_ok: bool,
    pub pattern_violations: Vec<PatternViolation>,
    /// `None` when the eigenvalues could not be computed or compared.
    pub spectrum_error: Option<f64>,
    pub tolerances: VerifyTolerances,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Check that `m` has graph `g` and spectrum `s`.
///
/// Edge present requires `|m_ij| ≥ nonzero_floor`; edge absent requires
/// `m_ij` to be exactly zero. The diagonal is unconstrained. Failures are
/// reported, never raised.
pub fn verify(m: &DenseMatrix, s: &Spectrum, g: &Graph, tols: &VerifyTolerances) -> VerificationReport {
    let mut report = VerificationReport {
        passed: false,
        dimensions_ok: true,
        pattern_ok: false,
        spectrum_ok: false,
        pattern_violations: Vec::new(),
        spectrum_error: None,
        tolerances: tols.clone(),
        notes: Vec::new(),
    };
    let n = m.rows();
    if !m.is_square() || n != s.n() || n != g.n() {
        report.dimensions_ok = false;
        report.notes.push(format!(
            "matrix is {}x{}, spectrum has {} values, graph has {} vertices",
            m.rows(),
            m.cols(),
            s.n(),
            g.n()
        ));
        return report;
    }

    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = m[(i, j)];
            let edge = g.has_edge(i, j);
            let ok = if edge { v.abs() >= tols.nonzero_floor } else { v == 0.0 };
            if !ok {
                report.pattern_violations.push(PatternViolation {
                    row: i,
                    col: j,
                    value: v,
                    edge_present: edge,
                });
            }
        }
    }
    report.pattern_ok = report.pattern_violations.is_empty();

    match eig_all(m) {
        Ok(eigs) => {
            let err = s.matching_error(&eigs);
            report.spectrum_error = Some(err);
            report.spectrum_ok = err <= tols.spectrum_tol;
        }
        Err(e) => report.notes.push(format!("eigenvalue computation failed: {e}")),
    }
    report.passed = report.pattern_ok && report.spectrum_ok;
    report
}
