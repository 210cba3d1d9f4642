use serde::{Deserialize, Serialize};

use crate::linalg::{Complex, DenseMatrix, EigenTriple, LinalgError, TOL_ORTHO};
use crate::model::Pattern;

/// A coordinate direction of the parameter space and the matrix it perturbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisDirection {
    /// `E_{2j,2j} + E_{2j+1,2j+1}` (zero-based).
    X(usize),
    /// `E_{2j,2j+1} - E_{2j+1,2j}`.
    Y(usize),
    /// `E_{2k+j,2k+j}`.
    Z(usize),
    /// `E_{row,col}` of slot `r`.
    U(usize),
    /// `E_{col,row}` of slot `r`. For a one-directional slot this position is
    /// a structural zero and the direction is never varied.
    Omega(usize),
}

impl BasisDirection {
    /// Nonzero entries `(i, j, value)` of the perturbation matrix.
    pub fn entries(&self, p: &Pattern) -> Vec<(usize, usize, f64)> {
        match *self {
            BasisDirection::X(j) => vec![(2 * j, 2 * j, 1.0), (2 * j + 1, 2 * j + 1, 1.0)],
            BasisDirection::Y(j) => vec![(2 * j, 2 * j + 1, 1.0), (2 * j + 1, 2 * j, -1.0)],
            BasisDirection::Z(j) => {
                let d = 2 * p.k() + j;
                vec![(d, d, 1.0)]
            }
            BasisDirection::U(r) => {
                let s = p.slots()[r];
                vec![(s.row, s.col, 1.0)]
            }
            BasisDirection::Omega(r) => {
                let s = p.slots()[r];
                vec![(s.col, s.row, 1.0)]
            }
        }
    }

    pub fn matrix(&self, p: &Pattern) -> DenseMatrix {
        let mut b = DenseMatrix::zeros(p.n(), p.n());
        for (i, j, v) in self.entries(p) {
            b[(i, j)] += v;
        }
        b
    }

    /// The `(x, y, z)` directions in Jacobian column order.
    pub fn xyz_columns(p: &Pattern) -> Vec<BasisDirection> {
        let k = p.k();
        (0..k)
            .map(BasisDirection::X)
            .chain((0..k).map(BasisDirection::Y))
            .chain((0..p.l()).map(BasisDirection::Z))
            .collect()
    }
}

fn check_conditioning(t: &EigenTriple) -> Result<(), LinalgError> {
    let c = t.w_dot_v.abs();
    if c < TOL_ORTHO || !c.is_finite() {
        return Err(LinalgError::IllConditioned { w_dot_v: c });
    }
    Ok(())
}

/// Rate of change `ζ = wᵀBv / wᵀv` of the eigenvalue along `A + tB`.
/// `Re ζ` is the rate of the real part and `Im ζ` that of the imaginary part.
pub fn eigen_derivative(triple: &EigenTriple, b: &DenseMatrix) -> Result<Complex, LinalgError> {
    check_conditioning(triple)?;
    let n = triple.dim();
    if b.rows() != n || b.cols() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "direction is {}x{}, eigenvectors have length {n}",
            b.rows(),
            b.cols()
        )));
    }
    let mut wbv = Complex::ZERO;
    for i in 0..n {
        let bv = b
            .row(i)
            .iter()
            .zip(&triple.right)
            .fold(Complex::ZERO, |acc, (&bij, &vj)| acc + vj.scale(bij));
        wbv += triple.left[i] * bv;
    }
    Ok(wbv / triple.w_dot_v)
}

/// [`eigen_derivative`] for a sparse direction given by its entries.
pub fn derivative_along(
    triple: &EigenTriple,
    entries: &[(usize, usize, f64)],
) -> Result<Complex, LinalgError> {
    check_conditioning(triple)?;
    let wbv = entries.iter().fold(Complex::ZERO, |acc, &(i, j, b)| {
        acc + (triple.left[i] * triple.right[j]).scale(b)
    });
    Ok(wbv / triple.w_dot_v)
}
