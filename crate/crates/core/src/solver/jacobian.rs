use serde::{Deserialize, Serialize};

use super::derivative::{derivative_along, BasisDirection};
use super::SolveError;
use crate::linalg::{eig_all, eigen_triple, Complex, DenseMatrix, EigenTriple, LinalgError};
use crate::model::{assemble, label_eigenvalues, DiscSystem, LabeledValue, ParameterPoint, Pattern};

/// Eigen triples for the tracked eigenvalues: one per plus disc, one per real
/// interval, in label order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenTriples {
    pub plus: Vec<EigenTriple>,
    pub real: Vec<EigenTriple>,
}

/// The matrix at a parameter point, all its eigenvalues, and their labels.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub matrix: DenseMatrix,
    pub eigenvalues: Vec<Complex>,
    pub labels: LabeledValue,
}

/// The labeling function: assemble `M(θ)`, compute its eigenvalues, and read
/// off `(λ, μ, γ)` from the discs.
pub fn evaluate_f(p: &Pattern, theta: &ParameterPoint, d: &DiscSystem) -> Result<LabeledValue, SolveError> {
    Ok(evaluate(p, theta, d)?.labels)
}

/// [`evaluate_f`], keeping the intermediate matrix and eigenvalues.
pub fn evaluate(p: &Pattern, theta: &ParameterPoint, d: &DiscSystem) -> Result<Evaluation, SolveError> {
    let matrix = assemble(p, theta)?;
    let eigenvalues = eig_all(&matrix)?;
    let labels = label_eigenvalues(&eigenvalues, d)?;
    Ok(Evaluation {
        matrix,
        eigenvalues,
        labels,
    })
}

/// Triples for the labeled eigenvalues of `m`, using the labeled values as
/// inverse-iteration shifts.
pub fn triples_at(m: &DenseMatrix, labels: &LabeledValue) -> Result<EigenTriples, LinalgError> {
    let plus = labels
        .lambda
        .iter()
        .zip(&labels.mu)
        .map(|(&l, &mu)| eigen_triple(m, Complex::new(l, mu)))
        .collect::<Result<Vec<_>, _>>()?;
    let real = labels
        .gamma
        .iter()
        .map(|&g| eigen_triple(m, Complex::real(g)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EigenTriples { plus, real })
}

/// Jacobian of the labeling function restricted to the `(x, y, z)` columns.
///
/// Rows are `(λ_1..λ_k, μ_1..μ_k, γ_1..γ_l)`, columns `X(1..k), Y(1..k),
/// Z(1..l)`.
pub fn jacobian_xyz(
    m: &DenseMatrix,
    p: &Pattern,
    triples: &EigenTriples,
) -> Result<DenseMatrix, LinalgError> {
    let (k, l) = (p.k(), p.l());
    if triples.plus.len() != k || triples.real.len() != l {
        return Err(LinalgError::DimensionMismatch(format!(
            "need {k} pair and {l} real triples, got {} and {}",
            triples.plus.len(),
            triples.real.len()
        )));
    }
    if m.rows() != p.n() || triples.plus.iter().chain(&triples.real).any(|t| t.dim() != p.n()) {
        return Err(LinalgError::DimensionMismatch(
            "triples do not match the matrix order".into(),
        ));
    }
    let size = 2 * k + l;
    let mut jac = DenseMatrix::zeros(size, size);
    for (c, dir) in BasisDirection::xyz_columns(p).iter().enumerate() {
        let entries = dir.entries(p);
        for (r, t) in triples.plus.iter().enumerate() {
            let z = derivative_along(t, &entries)?;
            jac[(r, c)] = z.re;
            jac[(k + r, c)] = z.im;
        }
        for (r, t) in triples.real.iter().enumerate() {
            jac[(2 * k + r, c)] = derivative_along(t, &entries)?.re;
        }
    }
    Ok(jac)
}
