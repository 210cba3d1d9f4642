use serde::{Deserialize, Serialize};

use super::{LabeledValue, ModelError};
use crate::linalg::Complex;

/// Target spectrum: `k` conjugate pairs `λ ± μi` (`μ > 0`) and `l` real values,
/// all `2k + l` of them distinct.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pairs: Vec<(f64, f64)>,
    reals: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSpectrum {
    #[serde(default)]
    pairs: Vec<(f64, f64)>,
    #[serde(default)]
    reals: Vec<f64>,
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawSpectrum::deserialize(d)?;
        Spectrum::new(raw.pairs, raw.reals).map_err(serde::de::Error::custom)
    }
}

impl Spectrum {
    pub fn new(pairs: Vec<(f64, f64)>, reals: Vec<f64>) -> Result<Self, ModelError> {
        if pairs.is_empty() && reals.is_empty() {
            return Err(ModelError::InvalidSpectrum("spectrum is empty".into()));
        }
        let finite = pairs.iter().all(|(a, b)| a.is_finite() && b.is_finite())
            && reals.iter().all(|g| g.is_finite());
        if !finite {
            return Err(ModelError::InvalidSpectrum("non-finite value".into()));
        }
        if let Some(&(l, m)) = pairs.iter().find(|(_, m)| *m <= 0.0) {
            return Err(ModelError::InvalidSpectrum(format!(
                "pair ({l}, {m}) needs a positive imaginary part"
            )));
        }
        let s = Spectrum { pairs, reals };
        let pts = s.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i] == pts[j] {
                    return Err(ModelError::InvalidSpectrum(format!(
                        "repeated eigenvalue {}",
                        pts[i]
                    )));
                }
            }
        }
        Ok(s)
    }

    /// Build from computed eigenvalues: values with positive imaginary part
    /// become pairs, exactly real ones become reals, negative-imaginary
    /// values are taken as the implied conjugates.
    pub fn from_eigenvalues(eigs: &[Complex]) -> Result<Self, ModelError> {
        let mut pairs: Vec<(f64, f64)> = eigs
            .iter()
            .filter(|z| z.im > 0.0)
            .map(|z| (z.re, z.im))
            .collect();
        let mut reals: Vec<f64> = eigs.iter().filter(|z| z.im == 0.0).map(|z| z.re).collect();
        let negatives = eigs.iter().filter(|z| z.im < 0.0).count();
        if negatives != pairs.len() {
            return Err(ModelError::InvalidSpectrum(
                "eigenvalues are not closed under conjugation".into(),
            ));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        reals.sort_by(f64::total_cmp);
        Spectrum::new(pairs, reals)
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::BadFormat(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn reals(&self) -> &[f64] {
        &self.reals
    }

    /// Number of conjugate pairs.
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// Number of real eigenvalues.
    pub fn l(&self) -> usize {
        self.reals.len()
    }

    /// Matrix order `2k + l`.
    pub fn n(&self) -> usize {
        2 * self.k() + self.l()
    }

    /// All `2k + l` values: `λ_j + μ_j i`, then `λ_j - μ_j i`, then the reals.
    pub fn points(&self) -> Vec<Complex> {
        let plus = self.pairs.iter().map(|&(l, m)| Complex::new(l, m));
        let minus = self.pairs.iter().map(|&(l, m)| Complex::new(l, -m));
        let reals = self.reals.iter().map(|&g| Complex::real(g));
        plus.chain(minus).chain(reals).collect()
    }

    /// `max |z|` over the spectrum.
    pub fn inf_norm(&self) -> f64 {
        self.points().iter().fold(0.0, |m, z| m.max(z.abs()))
    }

    /// Smallest distance between two distinct spectrum points (infinite for a
    /// single point).
    pub fn min_gap(&self) -> f64 {
        let pts = self.points();
        let mut g = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                g = g.min((pts[i] - pts[j]).abs());
            }
        }
        g
    }

    /// Greedy nearest-neighbor distance between computed eigenvalues and the
    /// spectrum: each target point in turn claims the closest unclaimed
    /// eigenvalue; the result is the largest claimed distance. Infinite when
    /// the counts differ.
    pub fn matching_error(&self, eigs: &[Complex]) -> f64 {
        let targets = self.points();
        if targets.len() != eigs.len() {
            return f64::INFINITY;
        }
        let mut free = vec![true; eigs.len()];
        let mut worst = 0.0f64;
        for t in targets {
            let (idx, d) = eigs
                .iter()
                .enumerate()
                .filter(|(i, _)| free[*i])
                .map(|(i, &z)| (i, (z - t).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("as many eigenvalues as targets");
            free[idx] = false;
            worst = worst.max(d);
        }
        worst
    }

    /// The labeled coordinates `(λ, μ, γ)` of the spectrum itself.
    pub fn coordinates(&self) -> LabeledValue {
        LabeledValue {
            lambda: self.pairs.iter().map(|p| p.0).collect(),
            mu: self.pairs.iter().map(|p| p.1).collect(),
            gamma: self.reals.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0, -0.5]).unwrap();
        assert_eq!(Spectrum::from_json(&s.to_json()).unwrap(), s);
        let t = Spectrum::from_json(r#"{"pairs": [[0, 1.5]], "reals": []}"#).unwrap();
        assert_eq!(t.k(), 1);
        assert_eq!(t.l(), 0);
    }

    #[test]
    fn rejects_invalid() {
        assert!(Spectrum::new(vec![], vec![]).is_err());
        assert!(Spectrum::new(vec![(1.0, 0.0)], vec![]).is_err());
        assert!(Spectrum::new(vec![(1.0, -1.0)], vec![]).is_err());
        assert!(Spectrum::new(vec![(1.0, 1.0), (1.0, 1.0)], vec![]).is_err());
        assert!(Spectrum::new(vec![], vec![2.0, 2.0]).is_err());
        assert!(Spectrum::new(vec![], vec![f64::NAN]).is_err());
        assert!(Spectrum::from_json(r#"{"pairs": [[1, -2]]}"#).is_err());
        assert!(Spectrum::from_json("not json").is_err());
    }

    #[test]
    fn from_eigenvalues_splits_pairs_and_reals() {
        let eigs = [
            Complex::new(1.0, -2.0),
            Complex::real(3.0),
            Complex::new(1.0, 2.0),
        ];
        let s = Spectrum::from_eigenvalues(&eigs).unwrap();
        assert_eq!(s.pairs(), &[(1.0, 2.0)]);
        assert_eq!(s.reals(), &[3.0]);
        assert!(Spectrum::from_eigenvalues(&[Complex::new(0.0, 1.0)]).is_err());
    }

    #[test]
    fn norms_and_gaps() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        assert_eq!(s.n(), 3);
        assert!((s.inf_norm() - 3.0).abs() < 1e-15);
        assert!((s.min_gap() - 8f64.sqrt()).abs() < 1e-15);
    }
}
