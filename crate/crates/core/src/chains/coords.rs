//! Class-wise coordinates v_[w] and cylinder events on their prefixes.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldPrime, Vector};
use crate::vmeasure::{OrderedSpace, VectorOrder};

use super::sample_uniform_ordering_with;

/// The vectors of class `l` that are least in their line (v ≤ cv for every
/// nonzero c), i.e. whose l-th least-basis coordinate is 1.
pub fn minimal_in_line_members(o: &OrderedSpace, l: usize) -> Result<Vec<Vector>> {
    check_class(o, l)?;
    Ok(o.sorted_elements()
        .into_iter()
        .filter(|v| {
            let c = o.coordinates(v).expect("own element");
            c[..l].iter().all(|&x| x == 0) && c[l] == 1
        })
        .collect())
}

fn check_class(o: &OrderedSpace, l: usize) -> Result<()> {
    if l >= o.dim() {
        return Err(Error::InvalidArgument(format!(
            "class index {l} out of range for dimension {}",
            o.dim()
        )));
    }
    Ok(())
}

/// The canonical representative of class `l`: the member least in its line
/// with the lexicographically least ambient coordinates. It is b_l reduced
/// against the echelon form of span(b_{l+1}, ..., b_{m-1}).
pub fn class_representative(o: &OrderedSpace, l: usize) -> Result<Vector> {
    check_class(o, l)?;
    let field = o.field();
    let mut lower: Vec<Vector> = o.least_basis()[l + 1..].to_vec();
    let pivots = field.rref(&mut lower);
    let mut w = o.least_basis()[l].clone();
    for (row, &p) in lower.iter().zip(&pivots) {
        if w[p] != 0 {
            let c = field.neg(w[p]);
            field.axpy(&mut w, c, row);
        }
    }
    Ok(w)
}

/// v_[w]: the scalar c minimising v − c·w in the order.
pub fn coord_with_representative(o: &OrderedSpace, v: &[u8], w: &[u8]) -> Result<u8> {
    let field = o.field();
    if w.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("representative must be nonzero".into()));
    }
    o.coordinates(w)?;
    let mut best = 0u8;
    let mut best_vec = v.to_vec();
    o.coordinates(v)?;
    for c in field.nonzero() {
        let cand = field.vsub(v, &field.vscale(c, w));
        if o.compare(&cand, &best_vec)? == Ordering::Less {
            best = c;
            best_vec = cand;
        }
    }
    Ok(best)
}

/// v_[w] against the canonical representative of class `l`.
pub fn coord(o: &OrderedSpace, v: &[u8], l: usize) -> Result<u8> {
    let w = class_representative(o, l)?;
    coord_with_representative(o, v, &w)
}

/// Counts of the additivity and homogeneity identities checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearityReport {
    pub checked: usize,
    pub failures: usize,
}

/// Checks u_[w] + v_[w] = (u+v)_[w] and (du)_[w] = d·u_[w] for all vectors
/// u, v, all scalars d and every nonzero w.
pub fn coord_linearity_check(o: &OrderedSpace) -> Result<LinearityReport> {
    let field = o.field();
    let elements = o.sorted_elements();
    let index = |v: &[u8]| elements.binary_search_by(|e| cmp_in(o, e, v)).expect("element");
    let mut report = LinearityReport::default();
    for w in elements.iter().skip(1) {
        let table: Vec<u8> = elements
            .iter()
            .map(|v| coord_with_representative(o, v, w))
            .collect::<Result<_>>()?;
        for (i, u) in elements.iter().enumerate() {
            for (j, v) in elements.iter().enumerate() {
                report.checked += 1;
                let sum = table[index(&field.vadd(u, v))];
                if field.add(table[i], table[j]) != sum {
                    report.failures += 1;
                }
            }
            for d in field.elements() {
                report.checked += 1;
                if table[index(&field.vscale(d, u))] != field.mul(d, table[i]) {
                    report.failures += 1;
                }
            }
        }
    }
    Ok(report)
}

fn cmp_in(o: &OrderedSpace, a: &[u8], b: &[u8]) -> Ordering {
    o.compare(a, b).expect("elements of the space")
}

/// (v_[w_0], ..., v_[w_{k-1}]) for each vector, against the canonical
/// representatives of the top k classes.
pub fn phi_prefix(o: &OrderedSpace, vectors: &[Vector], k: usize) -> Result<Vec<Vec<u8>>> {
    if k > o.dim() {
        return Err(Error::InvalidArgument(format!(
            "prefix length {k} exceeds dimension {}",
            o.dim()
        )));
    }
    let reps = (0..k).map(|l| class_representative(o, l)).collect::<Result<Vec<_>>>()?;
    vectors
        .iter()
        .map(|v| reps.iter().map(|w| coord_with_representative(o, v, w)).collect())
        .collect()
}

/// The event that each v_i has top-k coordinate string s_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateCylinder {
    pub field: FieldPrime,
    pub k: usize,
    pub vectors: Vec<Vector>,
    pub prefixes: Vec<Vec<u8>>,
}

impl CoordinateCylinder {
    /// Vectors are given in F_q^d for some d and are padded with zeros
    /// when evaluated at a larger depth.
    pub fn new(q: u32, k: usize, vectors: Vec<Vector>, prefixes: Vec<Vec<u8>>) -> Result<Self> {
        let field = FieldPrime::new(q)?;
        if vectors.is_empty() || vectors.len() != prefixes.len() {
            return Err(Error::InvalidArgument("need one prefix per vector".into()));
        }
        let d = vectors[0].len();
        if vectors.iter().any(|v| v.len() != d || v.iter().any(|&x| !field.is_scalar(x))) {
            return Err(Error::InvalidArgument("vectors must lie in a common F_q^d".into()));
        }
        if !field.is_independent(&vectors) {
            return Err(Error::InvalidArgument("cylinder vectors must be independent".into()));
        }
        if prefixes.iter().any(|s| s.len() != k || s.iter().any(|&x| !field.is_scalar(x))) {
            return Err(Error::InvalidArgument(format!("prefixes must be words of length {k}")));
        }
        Ok(CoordinateCylinder {
            field,
            k,
            vectors,
            prefixes,
        })
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// The limiting measure q^(-kn).
    pub fn target(&self) -> f64 {
        (self.field.order() as f64).powi(-((self.k * self.n()) as i32))
    }

    fn padded(&self, depth: usize) -> Vec<Vector> {
        self.vectors
            .iter()
            .map(|v| {
                let mut p = v.clone();
                p.resize(depth, 0);
                p
            })
            .collect()
    }

    /// Whether the event holds for an ordering of F_q^depth.
    pub fn holds(&self, o: &OrderedSpace) -> Result<bool> {
        let vectors = self.padded(o.space().ambient());
        Ok(phi_prefix(o, &vectors, self.k)? == self.prefixes)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderEstimate {
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
    pub depth: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub target: f64,
}

impl CylinderEstimate {
    /// |estimate − target| in units of the binomial standard error, using
    /// the target's variance when the sample variance vanishes.
    pub fn z_score(&self) -> f64 {
        let p = self.target;
        let se = (p * (1.0 - p) / self.samples as f64).sqrt();
        (self.estimate - p).abs() / se
    }
}

/// Monte Carlo frequency of the cylinder over uniformly sampled orderings of
/// F_q^depth.
///
/// The finite-depth event differs from the limiting one only through the
/// classes above the top k moving at later steps; the probability that no
/// step beyond depth l has type below k is at least the product of
/// (1 − q^(k−1−j))^k over j ≥ l, which tends to 1.
pub fn cylinder_estimate(
    c: &CoordinateCylinder,
    depth: usize,
    samples: u64,
    seed: u64,
) -> Result<CylinderEstimate> {
    let d = c.vectors[0].len();
    if depth < c.n() + c.k || depth < d {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} must be at least n + k = {} and the vector length {d}",
            c.n() + c.k
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let o = sample_uniform_ordering_with(c.field, depth, &mut rng)?;
        if c.holds(&o)? {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(CylinderEstimate {
        hits,
        samples,
        seed,
        depth,
        estimate: p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
        target: c.target(),
    })
}
