//! Natural orderings as expansions of finite vector spaces.

use crate::error::{Error, Result};
use crate::field::Vector;
use crate::structures::VecSubspace;
use crate::vmeasure::{natural_orderings, OrderedSpace};

use super::Expansion;

/// A natural ordering, stored by its least basis b_0 > ... > b_{m-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NaturalOrdering {
    pub least_basis: Vec<Vector>,
}

impl NaturalOrdering {
    pub fn new(least_basis: Vec<Vector>) -> Self {
        NaturalOrdering { least_basis }
    }

    /// The ordered space on `space`, failing if the basis does not fit it.
    pub fn on(&self, space: &VecSubspace) -> Result<OrderedSpace> {
        OrderedSpace::new(space.clone(), self.least_basis.clone())
    }
}

impl From<&OrderedSpace> for NaturalOrdering {
    fn from(o: &OrderedSpace) -> Self {
        NaturalOrdering::new(o.least_basis().to_vec())
    }
}

/// One natural ordering per ordered basis of `v`; |GL(V)| in total.
pub fn vs_orderings(v: &VecSubspace) -> Vec<Expansion> {
    natural_orderings(v)
        .iter()
        .map(|o| Expansion::Natural(o.into()))
        .collect()
}

/// Pulls the order of `e` on `b` back along the linear embedding sending the
/// echelon basis of `a` to `images`.
pub(super) fn restrict_natural(
    e: &NaturalOrdering,
    a: &VecSubspace,
    b: &VecSubspace,
    images: &[Vector],
) -> Result<NaturalOrdering> {
    if images.len() != a.dim() {
        return Err(Error::InvalidEmbedding(format!(
            "{} images for a {}-dimensional source",
            images.len(),
            a.dim()
        )));
    }
    let outer = e.on(b)?;
    let image_space = VecSubspace::span(b.field(), b.ambient(), images)?;
    if image_space.dim() != a.dim() {
        return Err(Error::InvalidEmbedding("linear map is not injective".into()));
    }
    let inner = outer.restrict_to(&image_space)?;
    let back = b
        .field()
        .coordinate_map(images, b.ambient())
        .map_err(|_| Error::InvalidEmbedding("linear map is not injective".into()))?;
    let basis = inner
        .least_basis()
        .iter()
        .map(|w| {
            let c = back.coords(w).ok_or_else(|| Error::invariant("restricted basis left the image"))?;
            Ok(a.field().combine(a.ambient(), &c, a.basis()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NaturalOrdering::new(basis))
}
