//! Seeded random instances: a spectrum plus a graph with a planted matching.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::model::Spectrum;
use crate::{Error, Result};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Real parts and real eigenvalues are drawn from `[-BOX, BOX]`,
/// imaginary parts from `[MIN_GAP, BOX]`.
pub const BOX: f64 = 5.0;

/// Minimum distance between any two eigenvalues (conjugates included).
pub const MIN_GAP: f64 = 0.5;

const MAX_REJECTIONS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct Instance {
    pub spectrum: Spectrum,
    pub graph: Graph,
}

/// `k` conjugate pairs and `l` reals, distinct to within [`MIN_GAP`].
pub fn random_spectrum<R: Rng + ?Sized>(rng: &mut R, k: usize, l: usize) -> Result<Spectrum> {
    if k + l == 0 {
        return Err(Error::InvalidRequest("spectrum needs at least one eigenvalue".into()));
    }
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(k);
    let mut reals: Vec<f64> = Vec::with_capacity(l);
    let far = |a: (f64, f64), pairs: &[(f64, f64)], reals: &[f64]| {
        let close = |b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() < MIN_GAP;
        pairs.iter().all(|&(x, y)| !close((x, y)) && !close((x, -y)))
            && reals.iter().all(|&g| !close((g, 0.0)))
    };
    let mut rejections = 0;
    while pairs.len() < k || reals.len() < l {
        let candidate = if pairs.len() < k {
            (rng.gen_range(-BOX..=BOX), rng.gen_range(MIN_GAP..=BOX))
        } else {
            (rng.gen_range(-BOX..=BOX), 0.0)
        };
        let ok = far(candidate, &pairs, &reals)
            && (candidate.1 == 0.0 || far((candidate.0, -candidate.1), &pairs, &reals));
        if ok {
            if candidate.1 == 0.0 {
                reals.push(candidate.0);
            } else {
                pairs.push(candidate);
            }
        } else {
            rejections += 1;
            if rejections > MAX_REJECTIONS {
                return Err(Error::InvalidRequest(format!(
                    "cannot place {k} pairs and {l} reals {MIN_GAP} apart in the sampling box"
                )));
            }
        }
    }
    Ok(Spectrum::new(pairs, reals)?)
}

/// Graph on `n` vertices with `k` disjoint bidirected edges on shuffled
/// vertices, plus every other edge independently with probability `edge_prob`.
/// Directed graphs draw each ordered pair separately.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    edge_prob: f64,
    directed: bool,
) -> Result<Graph> {
    if 2 * k > n {
        return Err(Error::InvalidRequest(format!("2k = {} exceeds n = {n}", 2 * k)));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidRequest(format!("edge probability {edge_prob} not in [0, 1]")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let planted: Vec<(usize, usize)> = order[..2 * k]
        .chunks(2)
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .collect();
    let is_planted = |a: usize, b: usize| planted.contains(&(a.min(b), a.max(b)));

    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            if is_planted(a, b) {
                if directed || a < b {
                    edges.push((a, b));
                }
            } else if (directed || a < b) && rng.gen_bool(edge_prob) {
                edges.push((a, b));
            }
        }
    }
    let g = if directed { Graph::directed(n, edges) } else { Graph::undirected(n, edges) };
    Ok(g?)
}

/// A feasible instance: `k` pairs, `n − 2k` reals, and a graph whose
/// maximum matching has size at least `k`. Deterministic in `seed`.
pub fn random_instance(n: usize, k: usize, edge_prob: f64, seed: u64, directed: bool) -> Result<Instance> {
    if 2 * k > n {
        return Err(Error::InvalidRequest(format!("2k = {} exceeds n = {n}", 2 * k)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spectrum = random_spectrum(&mut rng, k, n - 2 * k)?;
    let graph = random_graph(&mut rng, n, k, edge_prob, directed)?;
    Ok(Instance { spectrum, graph })
}
