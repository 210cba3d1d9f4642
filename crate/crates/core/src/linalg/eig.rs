//! All eigenvalues of a dense real matrix.
//!
//! The matrix is pre-scaled by a power of two, reduced to upper Hessenberg
//! form with Householder reflections, and then driven to real Schur form by
//! Francis double-shift QR sweeps. Only real arithmetic is used, so complex
//! eigenvalues come out of 2x2 blocks as exact conjugate pairs.

use super::{Complex, DenseMatrix, LinalgError};

/// QR sweeps allowed per unit of matrix order.
pub const SWEEPS_PER_ORDER: usize = 30;

/// Every eigenvalue of `m`, counted with multiplicity.
///
/// Real eigenvalues have an imaginary part of exactly `0.0`; each complex
/// eigenvalue is accompanied by its conjugate with the imaginary part negated
/// bit-for-bit.
pub fn eig_all(m: &DenseMatrix) -> Result<Vec<Complex>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let amax = m.max_abs();
    if amax == 0.0 {
        return Ok(vec![Complex::ZERO; n]);
    }
    // Power-of-two scaling is exact, so undoing it cannot break conjugate pairs.
    let scale = 2f64.powi(amax.log2().round() as i32);
    let mut h: Vec<f64> = m.as_slice().iter().map(|x| x / scale).collect();
    hessenberg_in_place(&mut h, n);
    let mut eigs = hessenberg_qr(&mut h, n)?;
    for e in &mut eigs {
        *e = e.scale(scale);
    }
    Ok(eigs)
}

/// Householder reduction of a row-major `n x n` matrix to upper Hessenberg form.
pub(crate) fn hessenberg_in_place(a: &mut [f64], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let xnorm = (k + 1..n)
            .map(|i| a[i * n + k] * a[i * n + k])
            .sum::<f64>()
            .sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let alpha = if x0 >= 0.0 { -xnorm } else { xnorm };
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = a[i * n + k];
        }
        v[0] -= alpha;
        let vtv: f64 = v[..len].iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;

        // Left application: rows k+1..n, columns k..n.
        for j in k..n {
            let s: f64 = (0..len).map(|t| v[t] * a[(k + 1 + t) * n + j]).sum();
            let s = s * beta;
            for t in 0..len {
                a[(k + 1 + t) * n + j] -= s * v[t];
            }
        }
        // Right application: all rows, columns k+1..n.
        for i in 0..n {
            let s: f64 = (0..len).map(|t| a[i * n + k + 1 + t] * v[t]).sum();
            let s = s * beta;
            for t in 0..len {
                a[i * n + k + 1 + t] -= s * v[t];
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = 0.0;
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn hessenberg_qr(a: &mut [f64], n: usize) -> Result<Vec<Complex>, LinalgError> {
    let budget = SWEEPS_PER_ORDER * n;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let idx = |i: usize, j: usize| i * n + j;

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[idx(i, j)].abs();
        }
    }

    let mut total_sweeps = 0usize;
    let mut nn = n as isize - 1;
    let mut shift = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // Find the lowest negligible subdiagonal element.
            let mut l = nu;
            while l >= 1 {
                let mut s = a[idx(l - 1, l - 1)].abs() + a[idx(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[idx(l, l - 1)].abs() + s == s {
                    a[idx(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = a[idx(nu, nu)];
            if l == nu {
                wr[nu] = x + shift;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[idx(nu - 1, nu - 1)];
            let mut w = a[idx(nu, nu - 1)] * a[idx(nu - 1, nu)];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += shift;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = z;
                    wi[nu] = -z;
                }
                nn -= 2;
                break;
            }

            if total_sweeps >= budget {
                return Err(LinalgError::NonConvergence(format!(
                    "QR iteration exceeded {budget} sweeps with {} eigenvalues unresolved",
                    nu + 1
                )));
            }
            if its > 0 && its.is_multiple_of(10) {
                // Exceptional shift.
                shift += x;
                for i in 0..=nu {
                    a[idx(i, i)] -= x;
                }
                let s = a[idx(nu, nu - 1)].abs() + a[idx(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total_sweeps += 1;

            // Look for two consecutive small subdiagonal elements.
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[idx(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[idx(m + 1, m)] + a[idx(m, m + 1)];
                q = a[idx(m + 1, m + 1)] - z - rr - ss;
                r = a[idx(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[idx(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[idx(m - 1, m - 1)].abs() + z.abs() + a[idx(m + 1, m + 1)].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[idx(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[idx(i, i - 3)] = 0.0;
                }
            }

            // Double-shift QR step on rows l..=nu and columns m..=nu.
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[idx(k, k - 1)];
                    q = a[idx(k + 1, k - 1)];
                    r = if k != nu - 1 { a[idx(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[idx(k, k - 1)] = -a[idx(k, k - 1)];
                        }
                    } else {
                        a[idx(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[idx(k, j)] + q * a[idx(k + 1, j)];
                        if k != nu - 1 {
                            pp += r * a[idx(k + 2, j)];
                            a[idx(k + 2, j)] -= pp * z;
                        }
                        a[idx(k + 1, j)] -= pp * y;
                        a[idx(k, j)] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[idx(i, k)] + y * a[idx(i, k + 1)];
                        if k != nu - 1 {
                            pp += z * a[idx(i, k + 2)];
                            a[idx(i, k + 2)] -= pp * r;
                        }
                        a[idx(i, k + 1)] -= pp * q;
                        a[idx(i, k)] -= pp;
                    }
                }
                k += 1;
            }
        }
    }

    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex::new(re, im))
        .collect())
}
