use serde::{Deserialize, Serialize};

use super::{ModelError, Spectrum};
use crate::linalg::DenseMatrix;

/// A free off-diagonal position. `u` lives at `(row, col)`; when the edge is
/// bidirected, `ω` lives at `(col, row)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub row: usize,
    pub col: usize,
    pub bidirected: bool,
}

/// Zero/nonzero structure of the parameterized family on `n = 2k + l`
/// vertices: `k` matched 2x2 blocks on `(2j, 2j+1)`, `l` trailing diagonal
/// entries, and `m` slots for the remaining edges (all zero-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    n: usize,
    k: usize,
    slots: Vec<Slot>,
}

impl Pattern {
    pub fn new(n: usize, k: usize, slots: Vec<Slot>) -> Result<Self, ModelError> {
        if 2 * k > n {
            return Err(ModelError::InvalidPattern(format!(
                "{k} matched blocks do not fit in order {n}"
            )));
        }
        let mut taken = std::collections::BTreeSet::new();
        for s in &slots {
            if s.row >= n || s.col >= n {
                return Err(ModelError::InvalidPattern(format!(
                    "slot ({}, {}) out of range",
                    s.row, s.col
                )));
            }
            if s.row == s.col {
                return Err(ModelError::InvalidPattern(format!(
                    "slot ({}, {}) is on the diagonal",
                    s.row, s.col
                )));
            }
            if s.row / 2 == s.col / 2 && s.row < 2 * k && s.col < 2 * k {
                return Err(ModelError::InvalidPattern(format!(
                    "slot ({}, {}) lies inside a matched block",
                    s.row, s.col
                )));
            }
            let mut positions = vec![(s.row, s.col)];
            if s.bidirected {
                positions.push((s.col, s.row));
            }
            for p in positions {
                if !taken.insert(p) {
                    return Err(ModelError::InvalidPattern(format!(
                        "position {p:?} used by two slots"
                    )));
                }
            }
        }
        Ok(Pattern { n, k, slots })
    }

    /// Pattern with no slots: just the blocks of the seed matrix.
    pub fn blocks_only(s: &Spectrum) -> Self {
        Pattern {
            n: s.n(),
            k: s.k(),
            slots: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.n - 2 * self.k
    }

    /// Number of slots.
    pub fn m(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn all_bidirected(&self) -> bool {
        self.slots.iter().all(|s| s.bidirected)
    }

    /// Off-diagonal positions that may be nonzero: matched blocks and slots.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.k {
            out.push((2 * j, 2 * j + 1));
            out.push((2 * j + 1, 2 * j));
        }
        for s in &self.slots {
            out.push((s.row, s.col));
            if s.bidirected {
                out.push((s.col, s.row));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn matches_spectrum(&self, s: &Spectrum) -> bool {
        self.n == s.n() && self.k == s.k()
    }
}

/// Coordinates `(x, y, z, u, ω)` of the family: block diagonals `x`, block
/// off-diagonals `±y`, trailing diagonal `z`, slot entries `u` and `ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    pub omega: Vec<f64>,
}

impl ParameterPoint {
    /// The seed point `(λ, μ, γ, 0, 0)` for a pattern with `m` slots.
    pub fn seed(s: &Spectrum, m: usize) -> Self {
        let c = s.coordinates();
        ParameterPoint {
            x: c.lambda,
            y: c.mu,
            z: c.gamma,
            u: vec![0.0; m],
            omega: vec![0.0; m],
        }
    }

    /// `(x, y, z)` concatenated.
    pub fn xyz(&self) -> Vec<f64> {
        [self.x.as_slice(), &self.y, &self.z].concat()
    }

    pub fn set_xyz(&mut self, v: &[f64]) {
        let (k, l) = (self.x.len(), self.z.len());
        assert_eq!(v.len(), 2 * k + l, "xyz length mismatch");
        self.x.copy_from_slice(&v[..k]);
        self.y.copy_from_slice(&v[k..2 * k]);
        self.z.copy_from_slice(&v[2 * k..]);
    }

    pub fn is_finite(&self) -> bool {
        [&self.x, &self.y, &self.z, &self.u, &self.omega]
            .iter()
            .all(|v| v.iter().all(|a| a.is_finite()))
    }

    fn check(&self, p: &Pattern) -> Result<(), ModelError> {
        let dims = [self.x.len(), self.y.len(), self.z.len(), self.u.len(), self.omega.len()];
        let want = [p.k(), p.k(), p.l(), p.m(), p.m()];
        if dims != want {
            return Err(ModelError::DimensionMismatch(format!(
                "parameter lengths (x,y,z,u,ω) = {dims:?}, pattern needs {want:?}"
            )));
        }
        if !self.is_finite() {
            return Err(ModelError::DimensionMismatch(
                "parameter point has non-finite components".into(),
            ));
        }
        Ok(())
    }
}

/// The matrix `M(x, y, z, u, ω)`. Every position outside the pattern's
/// support and diagonal is exactly zero; `ω_r` of a one-directional slot is
/// not placed.
pub fn assemble(p: &Pattern, theta: &ParameterPoint) -> Result<DenseMatrix, ModelError> {
    theta.check(p)?;
    let mut m = DenseMatrix::zeros(p.n(), p.n());
    for j in 0..p.k() {
        let (a, b) = (2 * j, 2 * j + 1);
        m[(a, a)] = theta.x[j];
        m[(b, b)] = theta.x[j];
        m[(a, b)] = theta.y[j];
        m[(b, a)] = -theta.y[j];
    }
    for (j, &z) in theta.z.iter().enumerate() {
        let d = 2 * p.k() + j;
        m[(d, d)] = z;
    }
    for (r, s) in p.slots().iter().enumerate() {
        m[(s.row, s.col)] = theta.u[r];
        if s.bidirected {
            m[(s.col, s.row)] = theta.omega[r];
        }
    }
    Ok(m)
}

/// Block-diagonal matrix `⊕ [[λ_j, μ_j], [-μ_j, λ_j]] ⊕ diag(γ)` whose
/// eigenvalues are exactly the spectrum.
pub fn build_seed(s: &Spectrum) -> DenseMatrix {
    assemble(&Pattern::blocks_only(s), &ParameterPoint::seed(s, 0)).expect("seed dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_with_one_pair_and_one_real() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        let a = build_seed(&s);
        assert_eq!(
            a.to_rows(),
            vec![vec![1.0, 2.0, 0.0], vec![-2.0, 1.0, 0.0], vec![0.0, 0.0, 3.0]]
        );
    }

    #[test]
    fn seed_with_single_real() {
        let s = Spectrum::new(vec![], vec![5.0]).unwrap();
        assert_eq!(build_seed(&s).to_rows(), vec![vec![5.0]]);
    }

    #[test]
    fn assemble_places_every_parameter() {
        let p = Pattern::new(3, 1, vec![Slot { row: 1, col: 2, bidirected: true }]).unwrap();
        let theta = ParameterPoint {
            x: vec![1.0],
            y: vec![2.0],
            z: vec![3.0],
            u: vec![0.1],
            omega: vec![0.2],
        };
        let m = assemble(&p, &theta).unwrap();
        assert_eq!(
            m.to_rows(),
            vec![vec![1.0, 2.0, 0.0], vec![-2.0, 1.0, 0.1], vec![0.0, 0.2, 3.0]]
        );
    }

    #[test]
    fn zero_fill_reproduces_seed() {
        let s = Spectrum::new(vec![(1.0, 2.0)], vec![3.0]).unwrap();
        let p = Pattern::new(3, 1, vec![Slot { row: 1, col: 2, bidirected: true }]).unwrap();
        let m = assemble(&p, &ParameterPoint::seed(&s, 1)).unwrap();
        assert_eq!(m, build_seed(&s));
    }

    #[test]
    fn one_directional_slot_leaves_reverse_zero() {
        let p = Pattern::new(3, 1, vec![Slot { row: 0, col: 2, bidirected: false }]).unwrap();
        let theta = ParameterPoint {
            x: vec![1.0],
            y: vec![2.0],
            z: vec![3.0],
            u: vec![0.5],
            omega: vec![0.7],
        };
        let m = assemble(&p, &theta).unwrap();
        assert_eq!(m[(0, 2)], 0.5);
        assert_eq!(m[(2, 0)], 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let p = Pattern::new(3, 1, vec![]).unwrap();
        let theta = ParameterPoint {
            x: vec![1.0],
            y: vec![],
            z: vec![3.0],
            u: vec![],
            omega: vec![],
        };
        assert!(matches!(assemble(&p, &theta), Err(ModelError::DimensionMismatch(_))));
    }

    #[test]
    fn invalid_slots_rejected() {
        let slot = |row, col| Slot { row, col, bidirected: true };
        assert!(Pattern::new(3, 1, vec![slot(0, 1)]).is_err());
        assert!(Pattern::new(3, 1, vec![slot(2, 2)]).is_err());
        assert!(Pattern::new(3, 1, vec![slot(0, 3)]).is_err());
        assert!(Pattern::new(3, 1, vec![slot(0, 2), slot(2, 0)]).is_err());
        assert!(Pattern::new(3, 2, vec![]).is_err());
        // Across two different blocks is fine.
        assert!(Pattern::new(4, 2, vec![slot(1, 2)]).is_ok());
    }
}
