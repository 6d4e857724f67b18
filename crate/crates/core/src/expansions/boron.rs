//! Order expansions o(A, π) of boron tree structures.
//!
//! For an embedding π of A into B(n), o(A, π) orders the leaves by the
//! lexicographic order of their images and adds the ternary relation
//! S(a, b, c): π(a), π(b) <_l π(c) and δ(π(a), π(b)) > δ(π(b), π(c)).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::structures::boron::tree;
use crate::structures::{
    boron_delta, boron_meet, enumerate_embeddings, BoronStructure, Embedding, FiniteStructure,
    LeafWord,
};

use super::Expansion;

/// A linear order on the leaves plus the relation S on distinct triples.
///
/// S is symmetric in its first two arguments, so each pair `{a, b}` is stored
/// once as `[min, max, c]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoronOrder {
    order: Vec<usize>,
    s: BTreeSet<[usize; 3]>,
}

impl BoronOrder {
    /// `order` lists the leaves from least to greatest. Triples may be given
    /// in either orientation of their first two entries.
    pub fn new(order: Vec<usize>, triples: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        if order.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::InvalidArgument(format!(
                "{order:?} is not an ordering of 0..{n}"
            )));
        }
        let mut s = BTreeSet::new();
        for [a, b, c] in triples {
            if a >= n || b >= n || c >= n || a == b || b == c || a == c {
                return Err(Error::InvalidArgument(format!(
                    "S-triple ({a}, {b}, {c}) is not a triple of distinct leaves"
                )));
            }
            s.insert([a.min(b), a.max(b), c]);
        }
        Ok(BoronOrder { order, s })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Canonical triples `[a, b, c]` with `a < b` as leaf indices.
    pub fn triples(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.s.iter()
    }

    /// Number of unordered S-triples.
    pub fn s_count(&self) -> usize {
        self.s.len()
    }

    pub fn holds(&self, a: usize, b: usize, c: usize) -> bool {
        self.s.contains(&[a.min(b), a.max(b), c])
    }

    pub fn rank(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (i, &x) in self.order.iter().enumerate() {
            rank[x] = i;
        }
        rank
    }

    fn sort_key(&self) -> (usize, &[usize], &BTreeSet<[usize; 3]>) {
        (self.s.len(), &self.order, &self.s)
    }
}

/// An embedding into B(depth), given by the image leaf words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeEmbedding {
    pub depth: usize,
    pub images: Vec<LeafWord>,
}

impl TreeEmbedding {
    pub fn new(depth: usize, images: Vec<LeafWord>) -> Result<Self> {
        if images.iter().any(|w| w.len() != depth) {
            return Err(Error::InvalidEmbedding(format!(
                "leaf words must have length {depth}"
            )));
        }
        let distinct: BTreeSet<_> = images.iter().collect();
        if distinct.len() != images.len() {
            return Err(Error::InvalidEmbedding("leaf images are not distinct".into()));
        }
        Ok(TreeEmbedding { depth, images })
    }

    /// Reads a point map into B(depth) as leaf words.
    pub fn from_points(map: &[usize], depth: usize) -> Result<Self> {
        if map.iter().any(|&i| i >= 1 << depth) {
            return Err(Error::InvalidEmbedding(format!("leaf index out of range for B({depth})")));
        }
        TreeEmbedding::new(depth, map.iter().map(|&i| LeafWord::from_index(i, depth)).collect())
    }

    pub fn to_points(&self) -> Embedding {
        Embedding::Points(self.images.iter().map(LeafWord::index).collect())
    }

    fn delta_values(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (i, a) in self.images.iter().enumerate() {
            for b in &self.images[i + 1..] {
                out.insert(boron_delta(a, b).expect("distinct images"));
            }
        }
        out
    }
}

/// The expansion o(A, π). Both characterisations of S are evaluated and must
/// agree.
pub fn boron_order_of(a: &BoronStructure, pi: &TreeEmbedding) -> Result<BoronOrder> {
    let n = a.n_leaves();
    if pi.images.len() != n {
        return Err(Error::InvalidEmbedding(format!(
            "embedding has {} images for {n} leaves",
            pi.images.len()
        )));
    }
    let img = &pi.images;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| img[x].cmp(&img[y]));
    let mut s = BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            let meet = boron_meet(&img[x], &img[y])?;
            let dxy = boron_delta(&img[x], &img[y])?;
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let by_delta = img[x] < img[z]
                    && img[y] < img[z]
                    && dxy > boron_delta(&img[y], &img[z])?;
                let by_meet = meet < img[z];
                if by_delta != by_meet {
                    return Err(Error::invariant(format!(
                        "S characterisations disagree on ({x}, {y}, {z})"
                    )));
                }
                if by_meet {
                    s.insert([x, y, z]);
                }
            }
        }
    }
    Ok(BoronOrder { order, s })
}

/// Pushes an embedding down to B(|A| - 1) through bit deletions f_k at
/// levels k that no pair of images splits at, preserving o(A, π).
pub fn boron_reduce(a: &BoronStructure, pi: &TreeEmbedding) -> Result<TreeEmbedding> {
    let target = a.n_leaves().saturating_sub(1);
    let mut cur = pi.clone();
    while cur.depth > target {
        let used = cur.delta_values();
        let Some(k) = (0..cur.depth).find(|k| !used.contains(k)) else {
            return Err(Error::invariant(format!(
                "no free level to reduce B({}) with {} leaves",
                cur.depth,
                a.n_leaves()
            )));
        };
        cur = TreeEmbedding {
            depth: cur.depth - 1,
            images: cur.images.iter().map(|w| w.delete_bit(k)).collect(),
        };
    }
    Ok(cur)
}

/// All o(A, π) for π ranging over embeddings into B(|A| - 1), sorted by the
/// number of S-triples, then order, then S.
pub fn boron_expansions(a: &BoronStructure) -> Result<Vec<Expansion>> {
    boron_expansions_at_depth(a, a.n_leaves().saturating_sub(1))
}

/// As [`boron_expansions`], enumerating through B(depth) instead.
pub fn boron_expansions_at_depth(a: &BoronStructure, depth: usize) -> Result<Vec<Expansion>> {
    let host = FiniteStructure::Boron(tree(depth));
    let src = FiniteStructure::Boron(a.clone());
    let mut found = BTreeSet::new();
    for emb in enumerate_embeddings(&src, &host)? {
        let pi = TreeEmbedding::from_points(emb.points()?, depth)?;
        found.insert(boron_order_of(a, &pi)?);
    }
    let mut list: Vec<BoronOrder> = found.into_iter().collect();
    list.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(list.into_iter().map(Expansion::Boron).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::boron_bn;

    fn words(ws: &[&str]) -> Vec<LeafWord> {
        ws.iter().map(|w| w.parse().unwrap()).collect()
    }

    fn three_leaves() -> BoronStructure {
        BoronStructure::new(3, []).unwrap()
    }

    #[test]
    fn order_of_three_leaves() {
        let pi = TreeEmbedding::new(3, words(&["000", "010", "100"])).unwrap();
        let o = boron_order_of(&three_leaves(), &pi).unwrap();
        assert_eq!(o.order(), &[0, 1, 2]);
        assert!(o.holds(0, 1, 2));
        assert!(o.holds(1, 0, 2));
        assert_eq!(o.s_count(), 1);

        let two = BoronStructure::new(2, []).unwrap();
        let pi = TreeEmbedding::new(1, words(&["1", "0"])).unwrap();
        let o = boron_order_of(&two, &pi).unwrap();
        assert_eq!(o.order(), &[1, 0]);
        assert_eq!(o.s_count(), 0);
    }

    #[test]
    fn identity_on_b2_is_type_a() {
        let b2 = boron_bn(2).unwrap();
        let pi = TreeEmbedding::from_points(&[0, 1, 2, 3], 2).unwrap();
        let o = boron_order_of(&b2, &pi).unwrap();
        let expected = BoronOrder::new(vec![0, 1, 2, 3], [[0, 1, 2], [0, 1, 3]]).unwrap();
        assert_eq!(o, expected);
    }

    #[test]
    fn reduce_examples() {
        let a = three_leaves();
        let pi = TreeEmbedding::new(3, words(&["000", "010", "100"])).unwrap();
        let red = boron_reduce(&a, &pi).unwrap();
        assert_eq!(red.images, words(&["00", "01", "10"]));
        assert_eq!(boron_order_of(&a, &red).unwrap(), boron_order_of(&a, &pi).unwrap());

        let already = TreeEmbedding::new(2, words(&["00", "11", "01"])).unwrap();
        assert_eq!(boron_reduce(&a, &already).unwrap(), already);

        let b2 = boron_bn(2).unwrap();
        let full = TreeEmbedding::from_points(&[0, 1, 2, 3], 2).unwrap();
        assert_eq!(boron_reduce(&b2, &full).unwrap(), full);
    }

    #[test]
    fn expansion_counts() {
        let three = boron_expansions(&three_leaves()).unwrap();
        assert_eq!(three.len(), 12);
        let with_s = three
            .iter()
            .filter(|e| matches!(e, Expansion::Boron(o) if o.s_count() == 1))
            .count();
        assert_eq!(with_s, 6);

        let b2 = boron_expansions(&boron_bn(2).unwrap()).unwrap();
        assert_eq!(b2.len(), 40);
        for level in 0..=4 {
            let c = b2
                .iter()
                .filter(|e| matches!(e, Expansion::Boron(o) if o.s_count() == level))
                .count();
            assert_eq!(c, 8, "|S| = {level}");
        }
    }

    #[test]
    fn small_leaf_counts() {
        let one = BoronStructure::new(1, []).unwrap();
        assert_eq!(boron_expansions(&one).unwrap().len(), 1);
        let two = BoronStructure::new(2, []).unwrap();
        assert_eq!(boron_expansions(&two).unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(BoronOrder::new(vec![0, 0], []).is_err());
        assert!(BoronOrder::new(vec![0, 1, 2], [[0, 0, 1]]).is_err());
        assert!(TreeEmbedding::new(2, words(&["00", "00"])).is_err());
    }
}
