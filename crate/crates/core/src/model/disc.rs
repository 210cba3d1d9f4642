//! Disjoint discs around the target eigenvalues and the labeling of computed
//! eigenvalues against them.

use serde::{Deserialize, Serialize};

use super::{ModelError, Spectrum};
use crate::linalg::Complex;

/// Discs of common radius `ε` about `λ_j ± μ_j i` and `γ_j`. The minus discs
/// are implied by conjugation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscSystem {
    pub radius: f64,
    pub plus_centers: Vec<Complex>,
    pub real_centers: Vec<f64>,
}

/// `(λ, μ, γ)`: real and imaginary parts of the eigenvalues in the plus discs,
/// and the real eigenvalues in the real intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledValue {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl LabeledValue {
    /// `(λ, μ, γ)` concatenated, the row order of the Jacobian.
    pub fn to_vec(&self) -> Vec<f64> {
        [self.lambda.as_slice(), &self.mu, &self.gamma].concat()
    }

    pub fn max_abs_diff(&self, other: &LabeledValue) -> f64 {
        self.to_vec()
            .iter()
            .zip(other.to_vec())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// How many eigenvalues fell into each disc, plus those in none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscOccupancy {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub real: Vec<usize>,
    pub stray: usize,
}

impl DiscOccupancy {
    /// Exactly one eigenvalue per disc and none outside.
    pub fn is_exact(&self) -> bool {
        self.stray == 0
            && self
                .plus
                .iter()
                .chain(&self.minus)
                .chain(&self.real)
                .all(|&c| c == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Disc {
    Plus(usize),
    Minus(usize),
    Real(usize),
}

/// `ε = min(g / 3, μ_min / 2)` with `g` the smallest distance between spectrum
/// points; the `μ` term is dropped when there are no pairs.
pub fn disc_radius(s: &Spectrum) -> Result<DiscSystem, ModelError> {
    let g = s.min_gap();
    if g == 0.0 || g.is_nan() {
        return Err(ModelError::DegenerateSpectrum);
    }
    let mut eps = g / 3.0;
    if let Some(mu_min) = s.pairs().iter().map(|p| p.1).reduce(f64::min) {
        eps = eps.min(mu_min / 2.0);
    }
    if !eps.is_finite() {
        // A single real eigenvalue: any radius isolates it.
        eps = 1.0f64.max(s.inf_norm());
    }
    let d = DiscSystem {
        radius: eps,
        plus_centers: s.pairs().iter().map(|&(l, m)| Complex::new(l, m)).collect(),
        real_centers: s.reals().to_vec(),
    };
    debug_assert!(d.is_disjoint());
    Ok(d)
}

impl DiscSystem {
    pub fn k(&self) -> usize {
        self.plus_centers.len()
    }

    pub fn l(&self) -> usize {
        self.real_centers.len()
    }

    fn centers(&self) -> Vec<(Disc, Complex)> {
        let plus = self.plus_centers.iter().enumerate().map(|(j, &c)| (Disc::Plus(j), c));
        let minus = self
            .plus_centers
            .iter()
            .enumerate()
            .map(|(j, &c)| (Disc::Minus(j), c.conj()));
        let real = self
            .real_centers
            .iter()
            .enumerate()
            .map(|(j, &g)| (Disc::Real(j), Complex::real(g)));
        plus.chain(minus).chain(real).collect()
    }

    /// Pairwise center distances exceed `2ε` and no complex disc meets the
    /// real axis.
    pub fn is_disjoint(&self) -> bool {
        let c = self.centers();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                if (c[i].1 - c[j].1).abs() <= 2.0 * self.radius {
                    return false;
                }
            }
        }
        self.plus_centers.iter().all(|z| z.im > self.radius)
    }

    /// Assign each eigenvalue to the disc with the nearest center. A value
    /// that is farther than `ε` from every center, equidistant from two
    /// centers, or non-real but nearest a real center is stray.
    fn assign(&self, eigs: &[Complex]) -> Vec<Option<Disc>> {
        let centers = self.centers();
        eigs.iter()
            .map(|&z| {
                let mut best: Option<(Disc, f64)> = None;
                let mut tie = false;
                for &(disc, c) in &centers {
                    let d = (z - c).abs();
                    match best {
                        Some((_, bd)) if d > bd => {}
                        Some((_, bd)) if d == bd => tie = true,
                        _ => {
                            best = Some((disc, d));
                            tie = false;
                        }
                    }
                }
                match best {
                    Some((disc, d)) if !tie && d < self.radius => match disc {
                        Disc::Real(_) if z.im != 0.0 => None,
                        _ => Some(disc),
                    },
                    _ => None,
                }
            })
            .collect()
    }

    pub fn occupancy(&self, eigs: &[Complex]) -> DiscOccupancy {
        let mut occ = DiscOccupancy {
            plus: vec![0; self.k()],
            minus: vec![0; self.k()],
            real: vec![0; self.l()],
            stray: 0,
        };
        for a in self.assign(eigs) {
            match a {
                Some(Disc::Plus(j)) => occ.plus[j] += 1,
                Some(Disc::Minus(j)) => occ.minus[j] += 1,
                Some(Disc::Real(j)) => occ.real[j] += 1,
                None => occ.stray += 1,
            }
        }
        occ
    }
}

/// Label a full set of eigenvalues against the disc system.
///
/// Fails with `DiscViolation` unless every disc holds exactly one eigenvalue,
/// every real interval holds exactly one real eigenvalue, and nothing lies
/// outside the discs.
pub fn label_eigenvalues(eigs: &[Complex], d: &DiscSystem) -> Result<LabeledValue, ModelError> {
    let n = 2 * d.k() + d.l();
    if eigs.len() != n {
        return Err(ModelError::DimensionMismatch(format!(
            "{} eigenvalues for {n} discs",
            eigs.len()
        )));
    }
    let assignment = d.assign(eigs);
    let mut plus: Vec<Option<Complex>> = vec![None; d.k()];
    let mut minus = vec![0usize; d.k()];
    let mut real: Vec<Option<f64>> = vec![None; d.l()];
    for (&z, a) in eigs.iter().zip(&assignment) {
        let clash = match *a {
            None => {
                return Err(ModelError::DiscViolation(format!(
                    "eigenvalue {z} lies in no disc of radius {:.3e}",
                    d.radius
                )))
            }
            Some(Disc::Plus(j)) => plus[j].replace(z).is_some(),
            Some(Disc::Minus(j)) => {
                minus[j] += 1;
                minus[j] > 1
            }
            Some(Disc::Real(j)) => real[j].replace(z.re).is_some(),
        };
        if clash {
            return Err(ModelError::DiscViolation(format!(
                "two eigenvalues share the disc containing {z}"
            )));
        }
    }
    let lambda_mu: Vec<Complex> = plus
        .into_iter()
        .enumerate()
        .map(|(j, z)| {
            z.ok_or_else(|| {
                ModelError::DiscViolation(format!("plus disc {j} about {} is empty", d.plus_centers[j]))
            })
        })
        .collect::<Result<_, _>>()?;
    let gamma: Vec<f64> = real
        .into_iter()
        .enumerate()
        .map(|(j, g)| {
            g.ok_or_else(|| {
                ModelError::DiscViolation(format!(
                    "real interval {j} about {} is empty",
                    d.real_centers[j]
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(LabeledValue {
        lambda: lambda_mu.iter().map(|z| z.re).collect(),
        mu: lambda_mu.iter().map(|z| z.im).collect(),
        gamma,
    })
}
