//! Boron tree structures: leaves of a tree whose vertices have degree 1 or 3,
//! with the 4-ary relation R(a,b,c,d) saying the a–b and c–d paths are
//! disjoint.
//!
//! The canonical trees B(n) have leaf set {0,1}^n. Leaf `i` of B(n) is the
//! word spelling `i` in binary, most significant bit first, so the numeric
//! order on indices is the lexicographic order on words.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A leaf of B(n): a word over {0,1} of length n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafWord(Vec<bool>);

impl LeafWord {
    pub fn new(bits: Vec<bool>) -> Self {
        LeafWord(bits)
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        assert!(n < usize::BITS as usize && index < (1 << n));
        LeafWord((0..n).map(|j| (index >> (n - 1 - j)) & 1 == 1).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Drops the bit at position `k`; the map f_k : B(n) -> B(n-1).
    pub fn delete_bit(&self, k: usize) -> LeafWord {
        let mut bits = self.0.clone();
        bits.remove(k);
        LeafWord(bits)
    }
}

impl std::str::FromStr for LeafWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("bad leaf word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(LeafWord)
    }
}

impl fmt::Display for LeafWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Length of the longest common prefix of two distinct words of equal length.
pub fn boron_delta(a: &LeafWord, b: &LeafWord) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument("leaf words of different lengths".into()));
    }
    if a == b {
        return Err(Error::InvalidArgument("delta of a leaf with itself".into()));
    }
    Ok(common_prefix(a, b))
}

fn common_prefix(a: &LeafWord, b: &LeafWord) -> usize {
    a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count()
}

/// M(x, y): the common prefix of x and y followed by ones, i.e. the
/// lexicographically largest leaf below the meet of x and y.
pub fn boron_meet(x: &LeafWord, y: &LeafWord) -> Result<LeafWord> {
    let d = boron_delta(x, y)?;
    Ok(LeafWord(
        (0..x.len()).map(|j| if j < d { x.0[j] } else { true }).collect(),
    ))
}

/// A finite boron tree structure on leaves `0..n_leaves`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoronStructure {
    n_leaves: usize,
    r: BTreeSet<[usize; 4]>,
}

impl BoronStructure {
    /// Builds a structure from R-tuples, closing them under
    /// (a,b,c,d) -> (b,a,c,d), (a,b,d,c), (c,d,a,b). Rejects structures that
    /// do not embed into B(n_leaves - 1).
    pub fn new(n_leaves: usize, tuples: impl IntoIterator<Item = [usize; 4]>) -> Result<Self> {
        if n_leaves == 0 {
            return Err(Error::InvalidStructure("boron structure needs a leaf".into()));
        }
        let mut r = BTreeSet::new();
        for t in tuples {
            if t.iter().any(|&x| x >= n_leaves) {
                return Err(Error::InvalidStructure(format!(
                    "R-tuple {t:?} out of range for {n_leaves} leaves"
                )));
            }
            let distinct: BTreeSet<_> = t.iter().collect();
            if distinct.len() != 4 {
                return Err(Error::InvalidStructure(format!(
                    "R-tuple {t:?} has repeated leaves"
                )));
            }
            r.extend(symmetric_orbit(t));
        }
        let s = BoronStructure { n_leaves, r };
        let target = tree(n_leaves - 1);
        let host = super::FiniteStructure::Boron(target);
        if !super::has_embedding(&super::FiniteStructure::Boron(s.clone()), &host)? {
            return Err(Error::InvalidStructure(format!(
                "R does not come from a boron tree (no embedding into B({}))",
                n_leaves - 1
            )));
        }
        Ok(s)
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn holds(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.r.contains(&[a, b, c, d])
    }

    pub fn relation(&self) -> impl Iterator<Item = &[usize; 4]> {
        self.r.iter()
    }

    pub fn induced(&self, subset: &[usize]) -> BoronStructure {
        let pos = |x: usize| subset.iter().position(|&s| s == x);
        let r = self
            .r
            .iter()
            .filter_map(|t| {
                Some([pos(t[0])?, pos(t[1])?, pos(t[2])?, pos(t[3])?])
            })
            .collect();
        BoronStructure {
            n_leaves: subset.len(),
            r,
        }
    }

    pub fn relabel(&self, perm: &[usize]) -> BoronStructure {
        BoronStructure {
            n_leaves: self.n_leaves,
            r: self.r.iter().map(|t| t.map(|x| perm[x])).collect(),
        }
    }
}

fn symmetric_orbit([a, b, c, d]: [usize; 4]) -> [[usize; 4]; 8] {
    [
        [a, b, c, d],
        [b, a, c, d],
        [a, b, d, c],
        [b, a, d, c],
        [c, d, a, b],
        [d, c, a, b],
        [c, d, b, a],
        [d, c, b, a],
    ]
}

/// The canonical boron structure B(n) on {0,1}^n, n >= 1.
pub fn boron_bn(n: usize) -> Result<BoronStructure> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "B(0) has a single leaf; n must be at least 1".into(),
        ));
    }
    if n > 12 {
        return Err(Error::InvalidArgument(format!("B({n}) is too large")));
    }
    Ok(tree(n))
}

/// B(n) including the degenerate single-leaf B(0).
pub(crate) fn tree(n: usize) -> BoronStructure {
    let leaves = 1usize << n;
    // [a,b] as a set of (length, prefix) nodes; the empty prefix marks the
    // root edge.
    let path = |a: usize, b: usize| -> BTreeSet<(usize, usize)> {
        let wa = LeafWord::from_index(a, n);
        let wb = LeafWord::from_index(b, n);
        let d = common_prefix(&wa, &wb);
        (d..=n)
            .flat_map(|k| [(k, a >> (n - k)), (k, b >> (n - k))])
            .collect()
    };
    let paths: Vec<Vec<BTreeSet<(usize, usize)>>> = (0..leaves)
        .map(|a| (0..leaves).map(|b| if a == b { BTreeSet::new() } else { path(a, b) }).collect())
        .collect();
    let mut r = BTreeSet::new();
    for a in 0..leaves {
        for b in 0..leaves {
            if b == a {
                continue;
            }
            for c in 0..leaves {
                if c == a || c == b {
                    continue;
                }
                for d in 0..leaves {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    if paths[a][b].is_disjoint(&paths[c][d]) {
                        r.insert([a, b, c, d]);
                    }
                }
            }
        }
    }
    BoronStructure {
        n_leaves: leaves,
        r,
    }
}
