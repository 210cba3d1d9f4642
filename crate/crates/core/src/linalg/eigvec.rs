//! Right and left eigenvectors of simple eigenvalues by inverse iteration.

use serde::{Deserialize, Serialize};

use super::complex::{dot_t, norm2};
use super::{Complex, DenseMatrix, LinalgError};

/// Residual tolerance factor, scaled by `‖m‖_F`.
pub const RESIDUAL_RTOL: f64 = 1e-10;
/// Minimum admissible `|wᵀv|` for unit `v`, `w`.
pub const TOL_ORTHO: f64 = 1e-8;
/// Inverse-iteration sweeps before giving up.
pub const MAX_INVERSE_ITERS: usize = 8;

/// A simple eigenvalue with unit right eigenvector `v` (`m v = λ v`) and unit
/// left eigenvector `w` (`wᵀ m = λ wᵀ`, unconjugated transpose).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenTriple {
    pub value: Complex,
    pub right: Vec<Complex>,
    pub left: Vec<Complex>,
    /// `wᵀ v`; its modulus is the reciprocal condition number of the eigenvalue.
    pub w_dot_v: Complex,
}

impl EigenTriple {
    pub fn dim(&self) -> usize {
        self.right.len()
    }
}

/// Complex LU of `m - shift I` with partial pivoting. Tiny pivots are replaced
/// by `eps * ‖m‖_F` so that an exact shift still yields a usable factorization.
struct ShiftedLu {
    n: usize,
    lu: Vec<Complex>,
    perm: Vec<usize>,
}

impl ShiftedLu {
    fn factor(m: &DenseMatrix, shift: Complex) -> Self {
        let n = m.rows();
        let mut lu: Vec<Complex> = m.as_slice().iter().map(|&x| Complex::real(x)).collect();
        for i in 0..n {
            lu[i * n + i] -= shift;
        }
        let floor = f64::EPSILON * m.frobenius_norm().max(shift.abs()).max(f64::MIN_POSITIVE);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| lu[a * n + k].abs().total_cmp(&lu[b * n + k].abs()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            if lu[k * n + k].abs() < floor {
                lu[k * n + k] = Complex::real(floor);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= l * u;
                }
            }
        }
        ShiftedLu { n, lu, perm }
    }

    /// Solve `(m - σI) x = b`.
    fn solve(&self, b: &[Complex]) -> Vec<Complex> {
        let n = self.n;
        let mut x: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[i * n + j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[i * n + j] * x[j];
                x[i] -= t;
            }
            x[i] = x[i] / self.lu[i * n + i];
        }
        x
    }

    /// Solve `(m - σI)ᵀ x = b` using `(m - σI)ᵀ = Uᵀ Lᵀ P`.
    fn solve_transpose(&self, b: &[Complex]) -> Vec<Complex> {
        let n = self.n;
        let mut z = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[j * n + i] * z[j];
                z[i] -= t;
            }
            z[i] = z[i] / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[j * n + i] * z[j];
                z[i] -= t;
            }
        }
        let mut x = vec![Complex::ZERO; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }
}

fn seed_vector(n: usize) -> Vec<Complex> {
    // Low-discrepancy fill; deterministic and unlikely to be deficient in any
    // eigendirection.
    const PLASTIC: f64 = 0.754_877_666_246_692_7;
    (0..n)
        .map(|i| Complex::real(0.5 + ((i as f64 + 1.0) * PLASTIC).fract()))
        .collect()
}

/// Scale to unit length and rotate so that the first component with modulus
/// above `1 / (2√n)` is real and positive.
fn normalize_with_phase(v: &mut [Complex]) -> bool {
    let nrm = norm2(v);
    if nrm == 0.0 || !nrm.is_finite() {
        return false;
    }
    for c in v.iter_mut() {
        *c = c.scale(1.0 / nrm);
    }
    let threshold = 0.5 / (v.len() as f64).sqrt();
    if let Some(&c) = v.iter().find(|c| c.abs() > threshold) {
        let phase = c.conj().scale(1.0 / c.abs());
        for x in v.iter_mut() {
            *x = *x * phase;
        }
        // Remove rounding residue on the anchor component.
        if let Some(x) = v.iter_mut().find(|x| x.abs() > threshold) {
            *x = Complex::real(x.abs());
        }
    }
    true
}

fn real_matvec(m: &DenseMatrix, x: &[Complex]) -> Vec<Complex> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(x)
                .fold(Complex::ZERO, |acc, (&a, &b)| acc + b.scale(a))
        })
        .collect()
}

fn real_matvec_t(m: &DenseMatrix, x: &[Complex]) -> Vec<Complex> {
    let mut out = vec![Complex::ZERO; m.cols()];
    for (i, &xi) in x.iter().enumerate() {
        for (j, &a) in m.row(i).iter().enumerate() {
            out[j] += xi.scale(a);
        }
    }
    out
}

fn residual(mv: &[Complex], v: &[Complex], lambda: Complex) -> f64 {
    let r: Vec<Complex> = mv.iter().zip(v).map(|(&a, &b)| a - lambda * b).collect();
    norm2(&r)
}

/// Eigenvalue of `m` nearest `approx`, with its unit right and left
/// eigenvectors.
///
/// `approx` must lie in the basin of a simple eigenvalue; normally it is the
/// value returned by [`eig_all`](super::eig_all). When `approx` is real the
/// computation stays real and so do the vectors.
pub fn eigen_triple(m: &DenseMatrix, approx: Complex) -> Result<EigenTriple, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !approx.is_finite() {
        return Err(LinalgError::NonConvergence(format!(
            "non-finite shift {approx}"
        )));
    }
    let n = m.rows();
    let tol_res = RESIDUAL_RTOL * m.frobenius_norm();
    let lu = ShiftedLu::factor(m, approx);

    let mut v = seed_vector(n);
    let mut w = seed_vector(n);
    let mut best = f64::INFINITY;
    for _ in 0..MAX_INVERSE_ITERS {
        v = lu.solve(&v);
        w = lu.solve_transpose(&w);
        if !normalize_with_phase(&mut v) || !normalize_with_phase(&mut w) {
            return Err(LinalgError::NonConvergence(
                "inverse iteration produced a degenerate vector".into(),
            ));
        }
        let w_dot_v = dot_t(&w, &v);
        let mv = real_matvec(m, &v);
        if w_dot_v.abs() < TOL_ORTHO {
            // Either a defective eigenvalue or an unconverged pair; decide
            // after the iteration budget is spent.
            best = best.min(residual(&mv, &v, approx));
            continue;
        }
        let lambda = if approx.is_real() {
            Complex::real((dot_t(&w, &mv) / w_dot_v).re)
        } else {
            dot_t(&w, &mv) / w_dot_v
        };
        let mtw = real_matvec_t(m, &w);
        let r_right = residual(&mv, &v, lambda);
        let r_left = residual(&mtw, &w, lambda);
        best = best.min(r_right.max(r_left));
        if r_right <= tol_res && r_left <= tol_res {
            return Ok(EigenTriple {
                value: lambda,
                right: v,
                left: w,
                w_dot_v,
            });
        }
    }
    let w_dot_v = dot_t(&w, &v);
    if w_dot_v.abs() < TOL_ORTHO {
        return Err(LinalgError::IllConditioned {
            w_dot_v: w_dot_v.abs(),
        });
    }
    Err(LinalgError::NonConvergence(format!(
        "inverse iteration near {approx} stalled at residual {best:.3e} (target {tol_res:.3e})"
    )))
}
