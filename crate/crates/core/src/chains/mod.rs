//! Chains V_1 ⊂ V_2 ⊂ ... of naturally ordered spaces along the coordinate
//! flag V_n = span(e_0, ..., e_{n-1}), their matrices of ordered inclusion,
//! and uniform sampling of natural orderings.

mod coords;

pub use coords::{
    class_representative, coord, coord_linearity_check, coord_with_representative,
    cylinder_estimate, minimal_in_line_members, phi_prefix, CoordinateCylinder, CylinderEstimate,
    LinearityReport,
};

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldPrime, Vector};
use crate::structures::vecspace::gl_order;
use crate::structures::VecSubspace;
use crate::vmeasure::{natural_orderings, OrderedSpace};

/// A dense matrix over F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    field: FieldPrime,
    rows: Vec<Vec<u8>>,
}

impl FqMatrix {
    pub fn new(field: FieldPrime, rows: Vec<Vec<u8>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|&x| !field.is_scalar(x)) {
            return Err(Error::InvalidArgument(format!("entries must lie in {field}")));
        }
        Ok(FqMatrix { field, rows })
    }

    /// The matrix whose columns are `columns`.
    pub fn from_columns(field: FieldPrime, height: usize, columns: &[Vector]) -> Self {
        let rows = (0..height).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        FqMatrix { field, rows }
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vector {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.n_cols() != other.n_rows() {
            return Err(Error::InvalidArgument("matrix shapes do not compose".into()));
        }
        let f = self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| (0..other.n_cols()).map(|j| f.dot(r, &other.column(j))).collect())
            .collect();
        Ok(FqMatrix { field: f, rows })
    }

    /// The least row with a nonzero entry in column `j`.
    fn pivot(&self, j: usize) -> Option<usize> {
        (0..self.n_rows()).find(|&i| self.rows[i][j] != 0)
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Whether an (n+1) × n matrix is valid: column pivots strictly increase,
/// pivot entries are 1 and pivot rows are otherwise zero.
pub fn is_valid_matrix(m: &FqMatrix) -> Result<bool> {
    if m.n_rows() != m.n_cols() + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected an (n+1) x n matrix, found {} x {}",
            m.n_rows(),
            m.n_cols()
        )));
    }
    Ok(pivot_conditions(m))
}

fn pivot_conditions(m: &FqMatrix) -> bool {
    let mut last: Option<usize> = None;
    for j in 0..m.n_cols() {
        let Some(p) = m.pivot(j) else {
            return false;
        };
        if last.is_some_and(|l| p <= l) || m.get(p, j) != 1 {
            return false;
        }
        if (0..m.n_cols()).any(|l| l != j && m.get(p, l) != 0) {
            return false;
        }
        last = Some(p);
    }
    true
}

/// A valid (n+1) × n matrix of ordered inclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValidMatrix(FqMatrix);

impl ValidMatrix {
    pub fn new(m: FqMatrix) -> Result<Self> {
        if !is_valid_matrix(&m)? {
            return Err(Error::InvalidArgument(format!("{m} is not a valid matrix")));
        }
        Ok(ValidMatrix(m))
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n_cols()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.n()).map(|j| self.0.pivot(j).expect("valid")).collect()
    }
}

impl fmt::Display for ValidMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The row index missing from the pivots.
pub fn matrix_type(m: &ValidMatrix) -> usize {
    let pivots = m.pivots();
    (0..=m.n()).find(|k| !pivots.contains(k)).expect("n pivots among n + 1 rows")
}

/// The pivot row of column j in a matrix of type k.
fn pivot_row(j: usize, k: usize) -> usize {
    if j < k {
        j
    } else {
        j + 1
    }
}

fn valid_of_type(field: FieldPrime, n: usize, k: usize, free: &[u8]) -> ValidMatrix {
    let mut rows = vec![vec![0u8; n]; n + 1];
    for j in 0..n {
        rows[pivot_row(j, k)][j] = 1;
    }
    rows[k][..k].copy_from_slice(free);
    ValidMatrix(FqMatrix { field, rows })
}

/// All valid (n+1) × n matrices, by type and then by the free entries
/// (row k, columns below k) in lexicographic order.
pub fn enumerate_valid(n: usize, q: u32) -> Result<Vec<ValidMatrix>> {
    let field = FieldPrime::new(q)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut out = Vec::new();
    for k in 0..=n {
        for free in field.all_vectors(k) {
            out.push(valid_of_type(field, n, k, &free));
        }
    }
    Ok(out)
}

/// Coordinates of the inner least basis in the outer least basis, after
/// checking that the outer order restricts to the inner one.
pub fn inclusion_matrix(inner: &OrderedSpace, outer: &OrderedSpace) -> Result<FqMatrix> {
    let restricted = outer.restrict_to(inner.space())?;
    if &restricted != inner {
        return Err(Error::NotOrderedInclusion(
            "the outer order does not restrict to the inner order".into(),
        ));
    }
    let columns = inner
        .least_basis()
        .iter()
        .map(|b| outer.coordinates(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(FqMatrix::from_columns(outer.field(), outer.dim(), &columns))
}

/// [`inclusion_matrix`] for consecutive dimensions, as a valid matrix.
pub fn inclusion_valid_matrix(inner: &OrderedSpace, outer: &OrderedSpace) -> Result<ValidMatrix> {
    if outer.dim() != inner.dim() + 1 {
        return Err(Error::NotOrderedInclusion(format!(
            "dimensions {} and {} are not consecutive",
            inner.dim(),
            outer.dim()
        )));
    }
    let m = inclusion_matrix(inner, outer)?;
    if !pivot_conditions(&m) {
        return Err(Error::invariant(format!("inclusion matrix {m} is not valid")));
    }
    Ok(ValidMatrix(m))
}

/// V_n = span(e_0, ..., e_{n-1}) inside F_q^ambient.
pub fn flag_space(field: FieldPrime, n: usize, ambient: usize) -> VecSubspace {
    let gens: Vec<Vector> = (0..n).map(|i| field.unit_vector(ambient, i)).collect();
    VecSubspace::span(field, ambient, &gens).expect("unit vectors")
}

fn check_flag(o: &OrderedSpace) -> Result<usize> {
    let n = o.dim();
    if o.space() != &flag_space(o.field(), n, o.space().ambient()) {
        return Err(Error::InvalidArgument("ordered space is not a flag space V_n".into()));
    }
    Ok(n)
}

/// The natural orderings of V_{n+1} restricting to `inner` (on V_n) with
/// inclusion matrix `m`: choose b_k outside V_n, then
/// b_{p_j} = b_j^{inner} − m_{kj} b_k. There are q^{n+1} − q^n of them.
pub fn enumerate_extensions(inner: &OrderedSpace, m: &ValidMatrix) -> Result<Vec<OrderedSpace>> {
    let n = check_flag(inner)?;
    let ambient = inner.space().ambient();
    if m.n() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix is for n = {}, inner space has dimension {n}",
            m.n()
        )));
    }
    if m.matrix().field() != inner.field() {
        return Err(Error::InvalidArgument("matrix and space over different fields".into()));
    }
    if ambient <= n {
        return Err(Error::InvalidArgument("no room to extend inside the ambient space".into()));
    }
    let field = inner.field();
    let outer_space = flag_space(field, n + 1, ambient);
    let mut out = Vec::new();
    for v in outer_space.elements() {
        if v[n] == 0 {
            continue;
        }
        out.push(extend_with(inner, m, &outer_space, v)?);
    }
    Ok(out)
}

fn extend_with(
    inner: &OrderedSpace,
    m: &ValidMatrix,
    outer_space: &VecSubspace,
    bk: Vector,
) -> Result<OrderedSpace> {
    let field = inner.field();
    let k = matrix_type(m);
    let n = m.n();
    let mut basis = vec![Vec::new(); n + 1];
    for (j, b) in inner.least_basis().iter().enumerate() {
        let c = field.neg(m.matrix().get(k, j));
        let mut v = b.clone();
        field.axpy(&mut v, c, &bk);
        basis[pivot_row(j, k)] = v;
    }
    basis[k] = bk;
    OrderedSpace::new(outer_space.clone(), basis)
}

/// M_1, ..., M_{m-1} for an ordering of V_m.
pub fn chain_matrices(o: &OrderedSpace) -> Result<Vec<ValidMatrix>> {
    let m = check_flag(o)?;
    let ambient = o.space().ambient();
    let levels: Vec<OrderedSpace> = (1..=m)
        .map(|n| o.restrict_to(&flag_space(o.field(), n, ambient)))
        .collect::<Result<_>>()?;
    levels.windows(2).map(|w| inclusion_valid_matrix(&w[0], &w[1])).collect()
}

/// Fibers of the map from orderings of F_q^m to matrix sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardReport {
    pub q: u32,
    pub m: usize,
    pub orderings: u128,
    pub sequences: usize,
    pub expected_sequences: u128,
    pub min_fiber: usize,
    pub max_fiber: usize,
}

impl PushforwardReport {
    /// Every sequence occurs and all fibers have the same size.
    pub fn is_uniform(&self) -> bool {
        self.sequences as u128 == self.expected_sequences && self.min_fiber == self.max_fiber
    }
}

/// Enumerates the natural orderings of F_q^m and groups them by their
/// matrix sequence.
pub fn pushforward_check(q: u32, m: usize, cap: u128) -> Result<PushforwardReport> {
    let field = FieldPrime::new(q)?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let total = gl_order(q as u128, m).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::EnumerationCap {
            requested: total,
            cap,
        });
    }
    let mut fibers: BTreeMap<Vec<ValidMatrix>, usize> = BTreeMap::new();
    let orderings = natural_orderings(&VecSubspace::full(field, m));
    for o in &orderings {
        *fibers.entry(chain_matrices(o)?).or_default() += 1;
    }
    let expected_sequences = (1..m)
        .map(|n| (0..=n).map(|k| (q as u128).pow(k as u32)).sum::<u128>())
        .product();
    Ok(PushforwardReport {
        q,
        m,
        orderings: orderings.len() as u128,
        sequences: fibers.len(),
        expected_sequences,
        min_fiber: fibers.values().copied().min().unwrap_or(0),
        max_fiber: fibers.values().copied().max().unwrap_or(0),
    })
}

/// A uniformly random natural ordering of F_q^m built along the flag: a
/// random least basis of V_1, then at each step a valid matrix drawn from
/// the product-uniform measure and a uniform extension.
pub fn sample_uniform_ordering_with<R: Rng + ?Sized>(
    field: FieldPrime,
    m: usize,
    rng: &mut R,
) -> Result<OrderedSpace> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let q = field.order();
    let c = rng.gen_range(1..q) as u8;
    let mut cur = OrderedSpace::new(flag_space(field, 1, m), vec![field.vscale(c, &field.unit_vector(m, 0))])?;
    for n in 1..m {
        // Type k has q^k matrices, so draw a matrix index uniformly.
        let total: u64 = (0..=n).map(|k| (q as u64).pow(k as u32)).sum();
        let mut idx = rng.gen_range(0..total);
        let mut k = 0;
        while idx >= (q as u64).pow(k as u32) {
            idx -= (q as u64).pow(k as u32);
            k += 1;
        }
        let free: Vec<u8> = (0..k).map(|_| rng.gen_range(0..q) as u8).collect();
        let mat = valid_of_type(field, n, k, &free);
        let mut bk = field.zero_vector(m);
        for x in bk.iter_mut().take(n) {
            *x = rng.gen_range(0..q) as u8;
        }
        bk[n] = rng.gen_range(1..q) as u8;
        cur = extend_with(&cur, &mat, &flag_space(field, n + 1, m), bk)?;
    }
    Ok(cur)
}

/// [`sample_uniform_ordering_with`] driven by a ChaCha8 stream seeded with
/// `seed`.
pub fn sample_uniform_ordering(q: u32, m: usize, seed: u64) -> Result<OrderedSpace> {
    let field = FieldPrime::new(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_uniform_ordering_with(field, m, &mut rng)
}
