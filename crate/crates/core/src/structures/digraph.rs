use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite oriented graph: irreflexive, with at most one of `(i, j)` and
/// `(j, i)` present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStructure("digraph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidStructure(format!(
                    "edge ({i}, {j}) out of range for {n} vertices"
                )));
            }
            if i == j {
                return Err(Error::InvalidStructure(format!("loop at vertex {i}")));
            }
            set.insert((i, j));
        }
        if let Some(&(i, j)) = set.iter().find(|&&(i, j)| set.contains(&(j, i))) {
            return Err(Error::InvalidStructure(format!(
                "2-cycle between {i} and {j}; only oriented graphs are supported"
            )));
        }
        Ok(Digraph { n, edges: set })
    }

    /// `0 -> 1 -> ... -> n-1`
    pub fn path(n: usize) -> Self {
        Digraph::new(n, (1..n).map(|i| (i - 1, i))).expect("paths are oriented")
    }

    pub fn edgeless(n: usize) -> Self {
        Digraph::new(n, []).expect("edgeless graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Induced subgraph on `subset`, relabelled `0..subset.len()` in the
    /// given order.
    pub fn induced(&self, subset: &[usize]) -> Digraph {
        let mut edges = BTreeSet::new();
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                if self.has_edge(i, j) {
                    edges.insert((a, b));
                }
            }
        }
        Digraph {
            n: subset.len(),
            edges,
        }
    }

    /// The isomorphic copy with vertex `i` renamed `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        Digraph {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| (perm[i], perm[j])).collect(),
        }
    }
}
