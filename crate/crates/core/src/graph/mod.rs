//! Loopless graphs, maximum matchings, and the relabeling that moves a
//! matching onto the vertex pairs `(0,1), (2,3), ...`.
//!
//! Vertices are zero-based in memory and one-based in the edge-list format.

mod matching;
mod relabel;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::linalg::DenseMatrix;

pub use matching::{max_matching, Matching};
pub use relabel::{plan_relabeling, Relabeling};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("bad graph format (line {line}): {msg}")]
    BadFormat { line: usize, msg: String },
    #[error("matching too small: need k = {k} disjoint bidirected edges, graph has ν(G) = {nu}")]
    MatchingTooSmall { k: usize, nu: usize },
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// A loopless graph on vertices `0..n`. Undirected graphs are stored with
/// both orientations of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Directed graph from ordered pairs.
    pub fn directed(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            check_edge(n, a, b)?;
            if !set.insert((a, b)) {
                return Err(GraphError::Invalid(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Graph {
            n,
            directed: true,
            edges: set,
        })
    }

    /// Undirected graph; each `{a, b}` is stored in both directions.
    pub fn undirected(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            check_edge(n, a, b)?;
            if !set.insert((a, b)) || !set.insert((b, a)) {
                return Err(GraphError::Invalid(format!("duplicate edge {{{a}, {b}}}")));
            }
        }
        Ok(Graph {
            n,
            directed: false,
            edges: set,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            directed: false,
            edges: BTreeSet::new(),
        }
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::undirected(n, (1..n).map(|i| (i - 1, i))).expect("path graph is valid")
    }

    /// The graph of a square matrix: `i -> j` exactly when `m[i, j] != 0`
    /// for `i != j`. Reported as undirected when the pattern is symmetric.
    pub fn of_matrix(m: &DenseMatrix) -> Self {
        let n = m.rows();
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && m[(i, j)] != 0.0 {
                    edges.insert((i, j));
                }
            }
        }
        let directed = edges.iter().any(|&(a, b)| !edges.contains(&(b, a)));
        Graph { n, directed, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn is_bidirected_pair(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) && self.has_edge(b, a)
    }

    /// Ordered edges, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Same edge set, compared without regard to the directed flag.
    pub fn same_edges(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges == other.edges
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph {
            n: self.n,
            directed: self.directed,
            edges: self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect(),
        }
    }

    /// Serialize in the edge-list format read by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        if self.directed {
            let _ = writeln!(out, "{} {} directed", self.n, self.edges.len());
            for &(a, b) in &self.edges {
                let _ = writeln!(out, "{} {}", a + 1, b + 1);
            }
        } else {
            let m = self.edges.iter().filter(|(a, b)| a < b).count();
            let _ = writeln!(out, "{} {} undirected", self.n, m);
            for &(a, b) in self.edges.iter().filter(|(a, b)| a < b) {
                let _ = writeln!(out, "{} {}", a + 1, b + 1);
            }
        }
        out
    }
}

fn check_edge(n: usize, a: usize, b: usize) -> Result<(), GraphError> {
    if a >= n || b >= n {
        return Err(GraphError::Invalid(format!(
            "edge ({a}, {b}) out of range for {n} vertices"
        )));
    }
    if a == b {
        return Err(GraphError::Invalid(format!("loop at vertex {a}")));
    }
    Ok(())
}

/// Parse the edge-list format: a header `n m directed|undirected` followed by
/// `m` lines `a b` with one-based vertices. Blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let bad = |line: usize, msg: String| GraphError::BadFormat { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| bad(1, "empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(bad(hline, format!("expected `n m directed|undirected`, got `{header}`")));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| bad(hline, format!("bad vertex count `{}`", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| bad(hline, format!("bad edge count `{}`", fields[1])))?;
    let directed = match fields[2] {
        "directed" => true,
        "undirected" => false,
        other => return Err(bad(hline, format!("expected directed|undirected, got `{other}`"))),
    };
    if n == 0 {
        return Err(bad(hline, "graph needs at least one vertex".into()));
    }

    let mut edges = BTreeSet::new();
    let mut count = 0;
    for (lineno, line) in lines {
        count += 1;
        if count > m {
            return Err(bad(lineno, format!("more than the declared {m} edges")));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(bad(lineno, format!("expected `a b`, got `{line}`")));
        }
        let parse_vertex = |s: &str| -> Result<usize, GraphError> {
            let v: usize = s
                .parse()
                .map_err(|_| bad(lineno, format!("bad vertex `{s}`")))?;
            if v == 0 || v > n {
                return Err(bad(lineno, format!("vertex {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let a = parse_vertex(parts[0])?;
        let b = parse_vertex(parts[1])?;
        if a == b {
            return Err(bad(lineno, format!("loop at vertex {}", a + 1)));
        }
        let fresh = if directed {
            edges.insert((a, b))
        } else {
            edges.insert((a, b)) & edges.insert((b, a))
        };
        if !fresh {
            return Err(bad(lineno, format!("duplicate edge {} {}", a + 1, b + 1)));
        }
    }
    if count != m {
        return Err(bad(0, format!("declared {m} edges, found {count}")));
    }
    Ok(Graph { n, directed, edges })
}
