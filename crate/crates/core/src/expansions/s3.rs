//! Expansions of finite subgraphs of the circular directed graph S(3) by the
//! three-part colouring P_0, P_1, P_2.
//!
//! A vertex in part `p` sits at angle `(p + t) * 2π/3` from the top, with a
//! local coordinate `t ∈ (0, 1)`. Every pair of vertices then either forces a
//! strict comparison of local coordinates or is impossible outright, so a
//! coloured digraph embeds into S(3)* iff no pair is impossible and the forced
//! comparisons are acyclic.

use std::collections::VecDeque;

use crate::structures::Digraph;

use super::Expansion;

/// Part assignment `P: vertices -> {0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct S3Coloring {
    pub parts: Vec<u8>,
}

impl S3Coloring {
    pub fn new(parts: Vec<u8>) -> Self {
        S3Coloring { parts }
    }
}

/// `Some((u, v))` when the pair forces `t_u < t_v`; `None` when the edge
/// pattern cannot occur for these parts.
fn forced_precedence(g: &Digraph, parts: &[u8], a: usize, b: usize) -> Option<(usize, usize)> {
    let ab = g.has_edge(a, b);
    let ba = g.has_edge(b, a);
    match (3 + parts[b] - parts[a]) % 3 {
        // Same part: always adjacent, and the edge points forward in t.
        0 => match (ab, ba) {
            (true, _) => Some((a, b)),
            (_, true) => Some((b, a)),
            _ => None,
        },
        // b one part ahead of a.
        1 => match (ab, ba) {
            (true, _) => Some((b, a)),
            (_, true) => None,
            _ => Some((a, b)),
        },
        // b two parts ahead, i.e. a one part ahead of b.
        _ => match (ab, ba) {
            (_, true) => Some((a, b)),
            (true, _) => None,
            _ => Some((b, a)),
        },
    }
}

/// Whether ⟨g, parts⟩ lies in Age(S(3)*).
pub fn s3_membership(g: &Digraph, parts: &[u8]) -> bool {
    let n = g.n();
    if parts.len() != n || parts.iter().any(|&p| p > 2) {
        return false;
    }
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for a in 0..n {
        for b in a + 1..n {
            match forced_precedence(g, parts, a, b) {
                Some((u, v)) => {
                    succ[u].push(v);
                    indeg[v] += 1;
                }
                None => return false,
            }
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = queue.pop_front() {
        seen += 1;
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    seen == n
}

/// Every part assignment accepted by [`s3_membership`], in lexicographic
/// order. Empty when `g` is not in Age(S(3)).
pub fn s3_expansions(g: &Digraph) -> Vec<Expansion> {
    let n = g.n();
    let total = 3usize.pow(n as u32);
    let mut out = Vec::new();
    let mut parts = vec![0u8; n];
    for _ in 0..total {
        if s3_membership(g, &parts) {
            out.push(Expansion::S3(S3Coloring::new(parts.clone())));
        }
        for i in (0..n).rev() {
            parts[i] += 1;
            if parts[i] < 3 {
                break;
            }
            parts[i] = 0;
        }
    }
    out
}
