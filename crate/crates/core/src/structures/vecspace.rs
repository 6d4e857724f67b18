use crate::error::{Error, Result};
use crate::field::{CoordinateMap, FieldPrime, Vector};

/// A subspace of the ambient space F_q^m, stored by its reduced row echelon
/// basis so that equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VecSubspace {
    field: FieldPrime,
    ambient: usize,
    basis: Vec<Vector>,
}

impl VecSubspace {
    /// The whole of F_q^m with its standard basis.
    pub fn full(field: FieldPrime, m: usize) -> Self {
        VecSubspace {
            field,
            ambient: m,
            basis: (0..m).map(|i| field.unit_vector(m, i)).collect(),
        }
    }

    pub fn span(field: FieldPrime, ambient: usize, generators: &[Vector]) -> Result<Self> {
        for g in generators {
            if g.len() != ambient {
                return Err(Error::InvalidStructure(format!(
                    "vector {g:?} is not in F_q^{ambient}"
                )));
            }
            if g.iter().any(|&x| !field.is_scalar(x)) {
                return Err(Error::InvalidStructure(format!("{g:?} has entries outside {field}")));
            }
        }
        let mut basis = generators.to_vec();
        field.rref(&mut basis);
        Ok(VecSubspace {
            field,
            ambient,
            basis,
        })
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduced echelon basis.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn size(&self) -> usize {
        (self.field.q() as usize).pow(self.dim() as u32)
    }

    pub fn coordinate_map(&self) -> CoordinateMap {
        self.field
            .coordinate_map(&self.basis, self.ambient)
            .expect("echelon basis is independent")
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        v.len() == self.ambient
            && v.iter().all(|&x| self.field.is_scalar(x))
            && self.coordinate_map().contains(v)
    }

    pub fn is_subspace_of(&self, other: &VecSubspace) -> bool {
        self.field == other.field
            && self.ambient == other.ambient
            && self.basis.iter().all(|b| other.contains(b))
    }

    /// Every vector of the subspace, sorted lexicographically by ambient
    /// coordinates.
    pub fn elements(&self) -> Vec<Vector> {
        let mut out: Vec<Vector> = self
            .field
            .all_vectors(self.dim())
            .iter()
            .map(|c| self.field.combine(self.ambient, c, &self.basis))
            .collect();
        out.sort();
        out
    }

    /// |GL(V)| = (q^m - 1)(q^m - q)...(q^m - q^(m-1)), or `None` on overflow.
    pub fn gl_order(&self) -> Option<u128> {
        gl_order(self.field.q() as u128, self.dim())
    }

    /// All ordered bases, in lexicographic order of the tuple of ambient
    /// coordinate vectors.
    pub fn ordered_bases(&self) -> Vec<Vec<Vector>> {
        let nonzero: Vec<Vector> = self
            .elements()
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.dim());
        self.extend_bases(&nonzero, &mut cur, &mut out);
        out
    }

    fn extend_bases(&self, pool: &[Vector], cur: &mut Vec<Vector>, out: &mut Vec<Vec<Vector>>) {
        if cur.len() == self.dim() {
            out.push(cur.clone());
            return;
        }
        let span = if cur.is_empty() {
            None
        } else {
            Some(self.field.coordinate_map(cur, self.ambient).expect("independent"))
        };
        for v in pool {
            if span.as_ref().is_some_and(|s| s.contains(v)) {
                continue;
            }
            cur.push(v.clone());
            self.extend_bases(pool, cur, out);
            cur.pop();
        }
    }

    /// All nonzero subspaces, smallest dimension first.
    pub fn subspaces(&self) -> Vec<VecSubspace> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        let nonzero: Vec<Vector> = self
            .elements()
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        for d in 1..=self.dim() {
            let mut stack = Vec::new();
            collect_spans(self, &nonzero, d, 0, &mut stack, &mut seen, &mut out);
        }
        out
    }
}

fn collect_spans(
    space: &VecSubspace,
    pool: &[Vector],
    d: usize,
    start: usize,
    stack: &mut Vec<Vector>,
    seen: &mut std::collections::BTreeSet<Vec<Vector>>,
    out: &mut Vec<VecSubspace>,
) {
    if stack.len() == d {
        let sub = VecSubspace::span(space.field, space.ambient, stack).expect("valid vectors");
        if sub.dim() == d && seen.insert(sub.basis.clone()) {
            out.push(sub);
        }
        return;
    }
    for i in start..pool.len() {
        stack.push(pool[i].clone());
        if space.field.is_independent(stack) {
            collect_spans(space, pool, d, i + 1, stack, seen, out);
        }
        stack.pop();
    }
}

pub fn gl_order(q: u128, m: usize) -> Option<u128> {
    let qm = q.checked_pow(m as u32)?;
    (0..m).try_fold(1u128, |acc, i| acc.checked_mul(qm - q.pow(i as u32)))
}
