//! Exact measures of class-count events over the natural orderings of F_q^m.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldPrime, Vector};
use crate::structures::vecspace::gl_order;
use crate::structures::VecSubspace;

use super::OrderedSpace;

/// Largest |GL(q, m)| enumerated by default.
pub const DEFAULT_ENUMERATION_CAP: u128 = 20_000;

/// The orderings of F_q^m in which at most `k` ∼-classes lie above the class
/// of the line `line` (default: the line through e_0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCountEvent {
    pub field: FieldPrime,
    pub m: usize,
    pub k: usize,
    pub line: Vector,
}

impl ClassCountEvent {
    pub fn new(q: u32, m: usize, k: usize, line: Option<Vector>) -> Result<Self> {
        let field = FieldPrime::new(q)?;
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        if k >= m {
            return Err(Error::InvalidArgument(format!("k = {k} must be below m = {m}")));
        }
        let line = line.unwrap_or_else(|| field.unit_vector(m, 0));
        if line.len() != m || line.iter().any(|&x| !field.is_scalar(x)) {
            return Err(Error::NotInSpace(line));
        }
        if line.iter().all(|&x| x == 0) {
            return Err(Error::InvalidArgument("the line needs a nonzero vector".into()));
        }
        Ok(ClassCountEvent { field, m, k, line })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NwkMeasure {
    pub value: BigRational,
    /// False when the enumeration was over the cap and only the closed form
    /// was evaluated.
    pub enumerated: bool,
    /// Number of orderings examined when enumerated.
    pub orderings: Option<u128>,
}

fn pow(q: u32, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

/// (q^m - q^(m-k-1)) / (q^m - 1).
pub fn measure_nwk_closed_form(q: u32, m: usize, k: usize) -> BigRational {
    BigRational::new(pow(q, m) - pow(q, m - k - 1), pow(q, m) - 1)
}

/// The m → ∞ limit 1 - q^(-k-1).
pub fn nwk_limit(q: u32, k: usize) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), pow(q, k + 1))
}

fn enumerable(q: u32, m: usize, cap: u128) -> Option<u128> {
    gl_order(q as u128, m).filter(|&n| n <= cap)
}

/// The measure of the event, by enumerating every natural ordering when
/// |GL| ≤ `cap`. An enumerated value that disagrees with the closed form
/// is an internal error.
pub fn measure_nwk(event: &ClassCountEvent, cap: u128) -> Result<NwkMeasure> {
    let q = event.field.order();
    let closed = measure_nwk_closed_form(q, event.m, event.k);
    let Some(total) = enumerable(q, event.m, cap) else {
        return Ok(NwkMeasure {
            value: closed,
            enumerated: false,
            orderings: None,
        });
    };
    let space = VecSubspace::full(event.field, event.m);
    let mut hits: u128 = 0;
    let mut seen: u128 = 0;
    for basis in space.ordered_bases() {
        seen += 1;
        let o = OrderedSpace::new(space.clone(), basis)?;
        let l = o.class_index(&event.line)?.expect("nonzero line");
        if l <= event.k {
            hits += 1;
        }
    }
    if seen != total {
        return Err(Error::invariant(format!(
            "enumerated {seen} orderings, expected |GL| = {total}"
        )));
    }
    let value = BigRational::new(BigInt::from(hits), BigInt::from(total));
    if value != closed {
        return Err(Error::invariant(format!(
            "enumerated measure {value} differs from closed form {closed}"
        )));
    }
    Ok(NwkMeasure {
        value,
        enumerated: true,
        orderings: Some(total),
    })
}

/// (q^m - q)(q^m - q^2)...(q^m - q^(m-1)).
pub fn count_bases_with_coords_closed_form(q: u32, m: usize) -> BigInt {
    (1..m).fold(BigInt::one(), |acc, i| acc * (pow(q, m) - pow(q, i)))
}

/// Number of ordered bases (b_0, ..., b_{m-1}) of F_q^m with
/// Σ coords_i b_i = target (default e_0), by enumeration.
pub fn count_bases_with_coords(
    q: u32,
    coords: &[u8],
    target: Option<Vector>,
    cap: u128,
) -> Result<u128> {
    let field = FieldPrime::new(q)?;
    let m = coords.len();
    if m == 0 || coords.iter().all(|&c| c == 0) {
        return Err(Error::InvalidArgument("coordinate tuple must be nonzero".into()));
    }
    if coords.iter().any(|&c| !field.is_scalar(c)) {
        return Err(Error::InvalidArgument(format!("{coords:?} has entries outside {field}")));
    }
    let target = target.unwrap_or_else(|| field.unit_vector(m, 0));
    if target.len() != m || target.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("target must be a nonzero vector of F_q^m".into()));
    }
    let Some(_) = enumerable(q, m, cap) else {
        return Err(Error::EnumerationCap {
            requested: gl_order(q as u128, m).unwrap_or(u128::MAX),
            cap,
        });
    };
    let space = VecSubspace::full(field, m);
    Ok(space
        .ordered_bases()
        .iter()
        .filter(|b| field.combine(m, coords, b) == target)
        .count() as u128)
}
