use super::{Graph, GraphError, Matching};
use crate::linalg::DenseMatrix;
use crate::model::{Pattern, Slot};

/// Vertex bijection, old label to new label, with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl Relabeling {
    pub fn new(perm: Vec<usize>) -> Result<Self, GraphError> {
        let n = perm.len();
        let mut inverse = vec![usize::MAX; n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || inverse[new] != usize::MAX {
                return Err(GraphError::Invalid("relabeling is not a bijection".into()));
            }
            inverse[new] = old;
        }
        Ok(Relabeling { perm, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Relabeling {
            perm: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    /// New label of old vertex `v`.
    pub fn forward(&self, v: usize) -> usize {
        self.perm[v]
    }

    /// Old label of new vertex `v`.
    pub fn backward(&self, v: usize) -> usize {
        self.inverse[v]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    /// Rewrite a matrix indexed by old labels into new labels.
    pub fn apply_to_matrix(&self, m: &DenseMatrix) -> DenseMatrix {
        m.permute_symmetric(&self.perm)
    }

    /// Rewrite a matrix indexed by new labels back into old labels.
    pub fn restore_matrix(&self, m: &DenseMatrix) -> DenseMatrix {
        m.permute_symmetric(&self.inverse)
    }
}

/// Relabel `g` so that `k` pairs of `matching` occupy `(0,1), ..., (2k-2, 2k-1)`.
///
/// Pairs are taken in order of their smaller vertex, and within a pair the
/// smaller vertex gets the even label. The remaining vertices follow in
/// ascending order. Every other edge becomes a slot in new labels: one slot
/// `(i, j)` with `i < j` for a bidirected edge, or a one-directional slot for
/// an edge whose reverse is absent. Slots are sorted.
pub fn plan_relabeling(
    g: &Graph,
    matching: &Matching,
    k: usize,
) -> Result<(Relabeling, Pattern), GraphError> {
    if matching.len() < k {
        return Err(GraphError::MatchingTooSmall {
            k,
            nu: matching.len(),
        });
    }
    let n = g.n();
    if 2 * k > n {
        return Err(GraphError::MatchingTooSmall { k, nu: n / 2 });
    }
    if !matching.is_valid_for(g) {
        return Err(GraphError::Invalid("matching is not valid for the graph".into()));
    }
    let chosen = &matching.pairs()[..k];

    let mut perm = vec![usize::MAX; n];
    for (j, &(a, b)) in chosen.iter().enumerate() {
        perm[a] = 2 * j;
        perm[b] = 2 * j + 1;
    }
    for (next, p) in (2 * k..).zip(perm.iter_mut().filter(|p| **p == usize::MAX)) {
        *p = next;
    }
    let relabel = Relabeling::new(perm)?;

    let is_chosen = |a: usize, b: usize| chosen.contains(&(a.min(b), a.max(b)));
    let mut slots = Vec::new();
    for (a, b) in g.edges() {
        if is_chosen(a, b) {
            continue;
        }
        let (na, nb) = (relabel.forward(a), relabel.forward(b));
        if g.has_edge(b, a) {
            if na < nb {
                slots.push(Slot {
                    row: na,
                    col: nb,
                    bidirected: true,
                });
            }
        } else {
            slots.push(Slot {
                row: na,
                col: nb,
                bidirected: false,
            });
        }
    }
    slots.sort_unstable();
    let pattern = Pattern::new(n, k, slots)
        .map_err(|e| GraphError::Invalid(format!("relabeled pattern: {e}")))?;
    Ok((relabel, pattern))
}
