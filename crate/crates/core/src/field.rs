//! Prime-field arithmetic and the small amount of dense linear algebra the
//! rest of the crate needs.
//!
//! Vectors are plain coordinate tuples (`Vec<u8>`) against a fixed ambient
//! basis; scalars are residues `0..q`.

use std::fmt;

use crate::error::{Error, Result};

pub type Vector = Vec<u8>;

/// The field F_q for a prime q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldPrime {
    q: u8,
}

impl FieldPrime {
    pub fn new(q: u32) -> Result<Self> {
        if !(2..=251).contains(&q) || !is_prime(q) {
            return Err(Error::InvalidArgument(format!(
                "field modulus {q} is not a prime below 256"
            )));
        }
        Ok(FieldPrime { q: q as u8 })
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q as u32
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.q as u16 - b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.sub(0, a)
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        // Fermat: a^(q-2)
        let mut result = 1u8;
        let mut base = a % self.q;
        let mut e = self.q as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u8> {
        1..self.q
    }

    pub fn is_scalar(&self, a: u8) -> bool {
        a < self.q
    }

    pub fn zero_vector(&self, dim: usize) -> Vector {
        vec![0; dim]
    }

    pub fn unit_vector(&self, dim: usize, i: usize) -> Vector {
        let mut v = vec![0; dim];
        v[i] = 1;
        v
    }

    pub fn vadd(&self, a: &[u8], b: &[u8]) -> Vector {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn vsub(&self, a: &[u8], b: &[u8]) -> Vector {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(&x, &y)| self.sub(x, y)).collect()
    }

    pub fn vscale(&self, c: u8, a: &[u8]) -> Vector {
        a.iter().map(|&x| self.mul(c, x)).collect()
    }

    /// `acc += c * v`
    pub fn axpy(&self, acc: &mut [u8], c: u8, v: &[u8]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, x));
        }
    }

    pub fn dot(&self, a: &[u8], b: &[u8]) -> u8 {
        let q = self.q as u32;
        (a.iter().zip(b).map(|(&x, &y)| x as u32 * y as u32).sum::<u32>() % q) as u8
    }

    /// Linear combination `sum coeffs[i] * vectors[i]` in dimension `dim`.
    pub fn combine(&self, dim: usize, coeffs: &[u8], vectors: &[Vector]) -> Vector {
        let mut out = vec![0; dim];
        for (&c, v) in coeffs.iter().zip(vectors) {
            self.axpy(&mut out, c, v);
        }
        out
    }

    /// All vectors of F_q^dim in lexicographic order of coordinate tuples.
    pub fn all_vectors(&self, dim: usize) -> Vec<Vector> {
        let total = (self.q as usize).pow(dim as u32);
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0u8; dim];
        for _ in 0..total {
            out.push(cur.clone());
            for i in (0..dim).rev() {
                cur[i] += 1;
                if cur[i] < self.q {
                    break;
                }
                cur[i] = 0;
            }
        }
        out
    }

    /// Index of a vector in `all_vectors(v.len())`.
    pub fn encode(&self, v: &[u8]) -> usize {
        v.iter().fold(0usize, |acc, &x| acc * self.q as usize + x as usize)
    }

    /// In-place reduced row echelon form. Zero rows are removed; returns the
    /// pivot column of each remaining row.
    pub fn rref(&self, rows: &mut Vec<Vector>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, p);
            let inv = self.inv(rows[r][c]);
            rows[r] = self.vscale(inv, &rows[r]);
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = self.neg(rows[i][c]);
                    let pivot_row = rows[r].clone();
                    self.axpy(&mut rows[i], f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    pub fn rank(&self, rows: &[Vector]) -> usize {
        let mut work = rows.to_vec();
        self.rref(&mut work).len()
    }

    pub fn is_independent(&self, rows: &[Vector]) -> bool {
        self.rank(rows) == rows.len()
    }

    /// Precomputes coordinate extraction against an independent family.
    pub fn coordinate_map(&self, basis: &[Vector], ambient: usize) -> Result<CoordinateMap> {
        CoordinateMap::new(*self, basis, ambient)
    }
}

impl fmt::Display for FieldPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Left inverse of an independent family `b_0..b_{d-1}` in F_q^N, plus
/// the equations cutting out its span.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    field: FieldPrime,
    // Row i is the functional returning the i-th coordinate.
    functionals: Vec<Vector>,
    // v lies in the span iff every annihilator row kills it.
    annihilators: Vec<Vector>,
}

impl CoordinateMap {
    fn new(field: FieldPrime, basis: &[Vector], ambient: usize) -> Result<Self> {
        let d = basis.len();
        if basis.iter().any(|b| b.len() != ambient) {
            return Err(Error::InvalidArgument("basis vector of wrong length".into()));
        }
        // Rows of [A | I] where A has the basis vectors as columns.
        let mut rows: Vec<Vector> = (0..ambient)
            .map(|i| {
                let mut row: Vector = basis.iter().map(|b| b[i]).collect();
                row.extend(field.unit_vector(ambient, i));
                row
            })
            .collect();
        // Partial elimination on the first d columns only; column c gets
        // its pivot in row c.
        for c in 0..d {
            let r = c;
            let Some(p) = (r..ambient).find(|&i| rows[i][c] != 0) else {
                return Err(Error::InvalidArgument(
                    "family is not linearly independent".into(),
                ));
            };
            rows.swap(r, p);
            let inv = field.inv(rows[r][c]);
            rows[r] = field.vscale(inv, &rows[r]);
            for i in 0..ambient {
                if i != r && rows[i][c] != 0 {
                    let f = field.neg(rows[i][c]);
                    let pr = rows[r].clone();
                    field.axpy(&mut rows[i], f, &pr);
                }
            }
        }
        let functionals = rows[..d].iter().map(|row| row[d..].to_vec()).collect();
        let annihilators = rows[d..].iter().map(|row| row[d..].to_vec()).collect();
        Ok(CoordinateMap {
            field,
            functionals,
            annihilators,
        })
    }

    pub fn dim(&self) -> usize {
        self.functionals.len()
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.annihilators.iter().all(|a| self.field.dot(a, v) == 0)
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[u8]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.functionals.iter().map(|f| self.field.dot(f, v)).collect())
    }
}
