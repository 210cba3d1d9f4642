//! LU factorization with partial pivoting.

use super::{DenseMatrix, LinalgError};

/// Relative pivot threshold: a pivot below `PIVOT_RTOL * max|a_ij|` is singular.
pub const PIVOT_RTOL: f64 = 1e-13;
/// Relative residual target for [`solve_linear`].
pub const TOL_LIN: f64 = 1e-12;

/// Packed `PA = LU` factors. `L` is unit lower triangular and stored below the
/// diagonal; `U` on and above it.
#[derive(Clone, Debug)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let floor = PIVOT_RTOL * a.max_abs();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if pmax <= floor || pmax == 0.0 {
                return Err(LinalgError::SingularSystem {
                    index: k,
                    pivot: pmax,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= l * lu[k * n + j];
                    }
                }
            }
        }
        Ok(LuFactors { n, lu, perm, swaps })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(rhs.len(), n, "right-hand side length mismatch");
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    pub fn determinant(&self) -> f64 {
        let d: f64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.swaps.is_multiple_of(2) {
            d
        } else {
            -d
        }
    }
}

/// Solve `a s = rhs`.
///
/// Up to two steps of iterative refinement are applied when the residual is
/// above `TOL_LIN * ‖rhs‖`.
pub fn solve_linear(a: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if rhs.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "rhs has length {}, matrix has {} rows",
            rhs.len(),
            a.rows()
        )));
    }
    let lu = LuFactors::factor(a)?;
    let mut s = lu.solve(rhs);
    let target = TOL_LIN * norm(rhs);
    for _ in 0..2 {
        let r: Vec<f64> = a.matvec(&s).iter().zip(rhs).map(|(x, b)| b - x).collect();
        if norm(&r) <= target {
            break;
        }
        let ds = lu.solve(&r);
        s.iter_mut().zip(&ds).for_each(|(x, d)| *x += d);
    }
    Ok(s)
}

/// Determinant via LU; returns 0 for matrices the factorization deems singular.
pub fn determinant(a: &DenseMatrix) -> Result<f64, LinalgError> {
    match LuFactors::factor(a) {
        Ok(lu) => Ok(lu.determinant()),
        Err(LinalgError::SingularSystem { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
