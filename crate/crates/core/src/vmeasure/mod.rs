//! Naturally ordered vector spaces over F_q: the antilexicographic order of
//! an ordered basis, the relations ≪ and ∼, and their equivalence classes.

mod measure;

pub use measure::{
    count_bases_with_coords, count_bases_with_coords_closed_form, measure_nwk,
    measure_nwk_closed_form, nwk_limit, ClassCountEvent, NwkMeasure, DEFAULT_ENUMERATION_CAP,
};

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{CoordinateMap, FieldPrime, Vector};
use crate::structures::VecSubspace;

/// Anything that totally orders the vectors of a subspace.
pub trait VectorOrder {
    fn space(&self) -> &VecSubspace;

    /// Compares two vectors of the space.
    fn compare(&self, u: &[u8], v: &[u8]) -> Result<Ordering>;
}

/// A subspace with the natural ordering induced by `least_basis`.
///
/// Vectors are compared by their coordinates in the least basis
/// `b_0 > b_1 > ... > b_{m-1}`: at the least index where the coordinates
/// differ, the larger coordinate wins.
#[derive(Clone, Debug)]
pub struct OrderedSpace {
    space: VecSubspace,
    least_basis: Vec<Vector>,
    coords: CoordinateMap,
}

impl PartialEq for OrderedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.least_basis == other.least_basis
    }
}

impl Eq for OrderedSpace {}

impl OrderedSpace {
    /// Every ordered basis is the least basis of the order it induces, so
    /// any basis of `space` is accepted.
    pub fn new(space: VecSubspace, least_basis: Vec<Vector>) -> Result<Self> {
        if least_basis.len() != space.dim() {
            return Err(Error::InvalidArgument(format!(
                "{} vectors cannot be a basis of a {}-dimensional space",
                least_basis.len(),
                space.dim()
            )));
        }
        if let Some(v) = least_basis.iter().find(|v| !space.contains(v)) {
            return Err(Error::NotInSpace(v.clone()));
        }
        let coords = space
            .field()
            .coordinate_map(&least_basis, space.ambient())
            .map_err(|_| Error::InvalidArgument("least basis is not independent".into()))?;
        Ok(OrderedSpace {
            space,
            least_basis,
            coords,
        })
    }

    /// F_q^m ordered by the standard basis e_0 > e_1 > ... > e_{m-1}.
    pub fn standard(field: FieldPrime, m: usize) -> Self {
        let space = VecSubspace::full(field, m);
        let basis = space.basis().to_vec();
        OrderedSpace::new(space, basis).expect("standard basis")
    }

    pub fn space(&self) -> &VecSubspace {
        &self.space
    }

    pub fn field(&self) -> FieldPrime {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.least_basis.len()
    }

    pub fn least_basis(&self) -> &[Vector] {
        &self.least_basis
    }

    /// Coordinates of `v` in the least basis.
    pub fn coordinates(&self, v: &[u8]) -> Result<Vector> {
        if v.len() != self.space.ambient() {
            return Err(Error::NotInSpace(v.to_vec()));
        }
        self.coords.coords(v).ok_or_else(|| Error::NotInSpace(v.to_vec()))
    }

    /// The vector with the given least-basis coordinates.
    pub fn vector(&self, coords: &[u8]) -> Vector {
        self.field().combine(self.space.ambient(), coords, &self.least_basis)
    }

    /// All vectors of the space, least first.
    pub fn sorted_elements(&self) -> Vec<Vector> {
        self.field()
            .all_vectors(self.dim())
            .iter()
            .map(|c| self.vector(c))
            .collect()
    }

    /// Index l of the ∼-class of `v`: the least position with a nonzero
    /// least-basis coordinate. `None` for the zero vector.
    pub fn class_index(&self, v: &[u8]) -> Result<Option<usize>> {
        Ok(self.coordinates(v)?.iter().position(|&c| c != 0))
    }

    /// The induced order on a subspace, with its own least basis.
    pub fn restrict_to(&self, sub: &VecSubspace) -> Result<OrderedSpace> {
        if !sub.is_subspace_of(&self.space) {
            return Err(Error::NotOrderedInclusion(
                "restriction target is not a subspace".into(),
            ));
        }
        let mut rows: Vec<Vector> = sub
            .basis()
            .iter()
            .map(|v| self.coordinates(v))
            .collect::<Result<_>>()?;
        // Reduced echelon rows, read in the outer least basis, are the inner
        // least basis: each row's pivot coordinate is its own coordinate.
        self.field().rref(&mut rows);
        let basis = rows.iter().map(|c| self.vector(c)).collect();
        OrderedSpace::new(sub.clone(), basis)
    }
}

impl VectorOrder for OrderedSpace {
    fn space(&self) -> &VecSubspace {
        &self.space
    }

    fn compare(&self, u: &[u8], v: &[u8]) -> Result<Ordering> {
        Ok(self.coordinates(u)?.cmp(&self.coordinates(v)?))
    }
}

/// A total order given by listing every vector of a space, least first.
#[derive(Clone, Debug)]
pub struct ExplicitOrder {
    space: VecSubspace,
    sorted: Vec<Vector>,
    rank: HashMap<Vector, usize>,
}

impl ExplicitOrder {
    /// Rejects lists that are not a permutation of the space or do not
    /// start at 0.
    pub fn new(space: VecSubspace, sorted: Vec<Vector>) -> Result<Self> {
        if sorted.len() != space.size() {
            return Err(Error::MalformedOrder(format!(
                "order lists {} vectors, the space has {}",
                sorted.len(),
                space.size()
            )));
        }
        let mut rank = HashMap::with_capacity(sorted.len());
        for (i, v) in sorted.iter().enumerate() {
            if !space.contains(v) {
                return Err(Error::MalformedOrder(format!("{v:?} is not in the space")));
            }
            if rank.insert(v.clone(), i).is_some() {
                return Err(Error::MalformedOrder(format!("{v:?} is listed twice")));
            }
        }
        if sorted[0].iter().any(|&x| x != 0) {
            return Err(Error::MalformedOrder("0 must be the least vector".into()));
        }
        Ok(ExplicitOrder { space, sorted, rank })
    }

    pub fn sorted(&self) -> &[Vector] {
        &self.sorted
    }

    fn rank_of(&self, v: &[u8]) -> Result<usize> {
        self.rank.get(v).copied().ok_or_else(|| Error::NotInSpace(v.to_vec()))
    }
}

impl VectorOrder for ExplicitOrder {
    fn space(&self) -> &VecSubspace {
        &self.space
    }

    fn compare(&self, u: &[u8], v: &[u8]) -> Result<Ordering> {
        Ok(self.rank_of(u)?.cmp(&self.rank_of(v)?))
    }
}

/// Outcome of [`least_basis_of`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Naturality {
    Natural(OrderedSpace),
    NotNatural,
}

/// Extracts the least basis of a total order: b_{m-1} is the least nonzero
/// vector and each earlier b_j is the least vector outside the span of the
/// later ones. The order is natural iff that basis regenerates it.
pub fn least_basis_of(order: &ExplicitOrder) -> Result<Naturality> {
    let space = order.space.clone();
    let field = space.field();
    let mut basis: Vec<Vector> = Vec::with_capacity(space.dim());
    for v in &order.sorted[1..] {
        if basis.len() == space.dim() {
            break;
        }
        let mut trial = basis.clone();
        trial.push(v.clone());
        if field.is_independent(&trial) {
            basis = trial;
        }
    }
    basis.reverse();
    let candidate = OrderedSpace::new(space, basis)?;
    if candidate.sorted_elements() == order.sorted {
        Ok(Naturality::Natural(candidate))
    } else {
        Ok(Naturality::NotNatural)
    }
}

/// Outcome of comparing two nonzero vectors up to scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// u ≪ v
    Below,
    /// v ≪ u
    Above,
    /// u ∼ v
    Sim,
}

/// Decides u ≪ v, v ≪ u or u ∼ v. Over F_2, u ∼ v means u + v < min(u, v);
/// otherwise u ≪ v means cu < dv for all nonzero scalars c, d.
pub fn relate<O: VectorOrder + ?Sized>(o: &O, u: &[u8], v: &[u8]) -> Result<Relation> {
    let field = o.space().field();
    for w in [u, v] {
        if !o.space().contains(w) {
            return Err(Error::NotInSpace(w.to_vec()));
        }
        if w.iter().all(|&x| x == 0) {
            return Err(Error::InvalidArgument("≪ and ∼ are defined on nonzero vectors".into()));
        }
    }
    if field.q() == 2 {
        let sum = field.vadd(u, v);
        let lower = if o.compare(u, v)? == Ordering::Greater { v } else { u };
        if o.compare(&sum, lower)? == Ordering::Less {
            return Ok(Relation::Sim);
        }
        return Ok(if lower == u { Relation::Below } else { Relation::Above });
    }
    let all_below = |x: &[u8], y: &[u8]| -> Result<bool> {
        for c in field.nonzero() {
            for d in field.nonzero() {
                if o.compare(&field.vscale(c, x), &field.vscale(d, y))? != Ordering::Less {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    if all_below(u, v)? {
        Ok(Relation::Below)
    } else if all_below(v, u)? {
        Ok(Relation::Above)
    } else {
        Ok(Relation::Sim)
    }
}

/// A ∼-class: all nonzero vectors whose least nonzero least-basis
/// coordinate sits at `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimClass {
    pub index: usize,
    pub members: Vec<Vector>,
}

/// The m classes of a naturally ordered space by index, so the greatest
/// class comes first. Members are listed in increasing order.
pub fn sim_classes(o: &OrderedSpace) -> Vec<SimClass> {
    let mut classes: Vec<SimClass> = (0..o.dim())
        .map(|index| SimClass {
            index,
            members: Vec::new(),
        })
        .collect();
    for v in o.sorted_elements() {
        if let Some(l) = o.class_index(&v).expect("own element") {
            classes[l].members.push(v);
        }
    }
    classes
}

/// Expected class sizes (q-1) q^(m-1-l).
pub fn sim_class_size(q: u64, m: usize, l: usize) -> u64 {
    (q - 1) * q.pow((m - 1 - l) as u32)
}

/// The natural orderings of `space`, one per ordered basis, in
/// lexicographic order of the basis.
pub fn natural_orderings(space: &VecSubspace) -> Vec<OrderedSpace> {
    space
        .ordered_bases()
        .into_iter()
        .map(|b| OrderedSpace::new(space.clone(), b).expect("ordered basis"))
        .collect()
}
