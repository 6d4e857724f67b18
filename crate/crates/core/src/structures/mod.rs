//! Finite structures of the three built-in kinds, embeddings between them,
//! and isomorphism representatives of substructures.

pub mod boron;
pub mod digraph;
pub mod vecspace;

use std::collections::BTreeMap;
use std::fmt;

pub use boron::{boron_bn, boron_delta, boron_meet, BoronStructure, LeafWord};
pub use digraph::Digraph;
pub use vecspace::VecSubspace;

use crate::error::{Error, Result};
use crate::field::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    Digraph,
    Boron,
    VecSpace,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Digraph => "digraph",
            StructureKind::Boron => "boron",
            StructureKind::VecSpace => "vecspace",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiniteStructure {
    Digraph(Digraph),
    Boron(BoronStructure),
    VecSpace(VecSubspace),
}

impl FiniteStructure {
    pub fn kind(&self) -> StructureKind {
        match self {
            FiniteStructure::Digraph(_) => StructureKind::Digraph,
            FiniteStructure::Boron(_) => StructureKind::Boron,
            FiniteStructure::VecSpace(_) => StructureKind::VecSpace,
        }
    }

    /// Cardinality of the universe.
    pub fn size(&self) -> usize {
        match self {
            FiniteStructure::Digraph(g) => g.n(),
            FiniteStructure::Boron(b) => b.n_leaves(),
            FiniteStructure::VecSpace(v) => v.size(),
        }
    }

    pub fn as_digraph(&self) -> Result<&Digraph> {
        match self {
            FiniteStructure::Digraph(g) => Ok(g),
            other => Err(mismatch(StructureKind::Digraph, other.kind())),
        }
    }

    pub fn as_boron(&self) -> Result<&BoronStructure> {
        match self {
            FiniteStructure::Boron(b) => Ok(b),
            other => Err(mismatch(StructureKind::Boron, other.kind())),
        }
    }

    pub fn as_vecspace(&self) -> Result<&VecSubspace> {
        match self {
            FiniteStructure::VecSpace(v) => Ok(v),
            other => Err(mismatch(StructureKind::VecSpace, other.kind())),
        }
    }

    /// The same structure with points renamed by `perm` (relational kinds only).
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteStructure> {
        if !is_permutation(perm, self.size()) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
        match self {
            FiniteStructure::Digraph(g) => Ok(FiniteStructure::Digraph(g.relabel(perm))),
            FiniteStructure::Boron(b) => Ok(FiniteStructure::Boron(b.relabel(perm))),
            FiniteStructure::VecSpace(_) => Err(Error::InvalidArgument(
                "vector spaces are relabelled by linear maps, not permutations".into(),
            )),
        }
    }
}

pub(crate) fn mismatch(expected: StructureKind, found: StructureKind) -> Error {
    Error::KindMismatch { expected, found }
}

fn same_kind(a: &FiniteStructure, b: &FiniteStructure) -> Result<()> {
    if a.kind() == b.kind() {
        Ok(())
    } else {
        Err(mismatch(a.kind(), b.kind()))
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n && perm.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

/// An embedding: the images of the points (relational kinds) or of the
/// echelon basis vectors of the source (vector spaces).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Embedding {
    Points(Vec<usize>),
    Linear(Vec<Vector>),
}

impl Embedding {
    pub fn identity(a: &FiniteStructure) -> Embedding {
        match a {
            FiniteStructure::VecSpace(v) => Embedding::Linear(v.basis().to_vec()),
            other => Embedding::Points((0..other.size()).collect()),
        }
    }

    pub fn points(&self) -> Result<&[usize]> {
        match self {
            Embedding::Points(p) => Ok(p),
            Embedding::Linear(_) => Err(Error::InvalidEmbedding(
                "expected a point map, found a linear map".into(),
            )),
        }
    }

    pub fn images(&self) -> Result<&[Vector]> {
        match self {
            Embedding::Linear(v) => Ok(v),
            Embedding::Points(_) => Err(Error::InvalidEmbedding(
                "expected a linear map, found a point map".into(),
            )),
        }
    }
}

/// Whether `f` is an injective map from `a` into `b` preserving and
/// reflecting every relation (and linear, for vector spaces).
pub fn is_embedding(f: &Embedding, a: &FiniteStructure, b: &FiniteStructure) -> Result<bool> {
    same_kind(a, b)?;
    match (a, b) {
        (FiniteStructure::VecSpace(va), FiniteStructure::VecSpace(vb)) => {
            let images = f.images()?;
            Ok(va.field() == vb.field()
                && images.len() == va.dim()
                && images.iter().all(|v| vb.contains(v))
                && va.field().is_independent(images))
        }
        _ => {
            let map = f.points()?;
            if map.len() != a.size() || map.iter().any(|&x| x >= b.size()) {
                return Ok(false);
            }
            let mut seen = vec![false; b.size()];
            if map.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
                return Ok(false);
            }
            Ok((1..=map.len()).all(|k| extends_consistently(a, b, &map[..k])))
        }
    }
}

// Checks the relations involving the last assigned point against earlier ones.
fn extends_consistently(a: &FiniteStructure, b: &FiniteStructure, assign: &[usize]) -> bool {
    let p = assign.len() - 1;
    match (a, b) {
        (FiniteStructure::Digraph(ga), FiniteStructure::Digraph(gb)) => (0..p).all(|i| {
            ga.has_edge(i, p) == gb.has_edge(assign[i], assign[p])
                && ga.has_edge(p, i) == gb.has_edge(assign[p], assign[i])
        }),
        (FiniteStructure::Boron(ba), FiniteStructure::Boron(bb)) => {
            if p < 3 {
                return true;
            }
            for i in 0..p {
                for j in 0..p {
                    for k in 0..p {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        let placements = [[p, i, j, k], [i, p, j, k], [i, j, p, k], [i, j, k, p]];
                        for t in placements {
                            if ba.holds(t[0], t[1], t[2], t[3])
                                != bb.holds(assign[t[0]], assign[t[1]], assign[t[2]], assign[t[3]])
                            {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        }
        _ => unreachable!("kinds checked by caller"),
    }
}

/// Every embedding `a -> b`, in lexicographic order of image tuples.
pub fn enumerate_embeddings(a: &FiniteStructure, b: &FiniteStructure) -> Result<Vec<Embedding>> {
    search_embeddings(a, b, usize::MAX)
}

pub(crate) fn has_embedding(a: &FiniteStructure, b: &FiniteStructure) -> Result<bool> {
    Ok(!search_embeddings(a, b, 1)?.is_empty())
}

fn search_embeddings(
    a: &FiniteStructure,
    b: &FiniteStructure,
    limit: usize,
) -> Result<Vec<Embedding>> {
    same_kind(a, b)?;
    let mut out = Vec::new();
    match (a, b) {
        (FiniteStructure::VecSpace(va), FiniteStructure::VecSpace(vb)) => {
            if va.field() != vb.field() {
                return Ok(out);
            }
            let pool: Vec<Vector> = vb
                .elements()
                .into_iter()
                .filter(|v| v.iter().any(|&x| x != 0))
                .collect();
            let mut cur = Vec::new();
            linear_search(va, vb, &pool, &mut cur, &mut out, limit);
        }
        _ => {
            if a.size() > b.size() {
                return Ok(out);
            }
            let mut assign = Vec::with_capacity(a.size());
            let mut used = vec![false; b.size()];
            point_search(a, b, &mut assign, &mut used, &mut out, limit);
        }
    }
    Ok(out)
}

fn point_search(
    a: &FiniteStructure,
    b: &FiniteStructure,
    assign: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Embedding>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if assign.len() == a.size() {
        out.push(Embedding::Points(assign.clone()));
        return;
    }
    for t in 0..b.size() {
        if used[t] {
            continue;
        }
        assign.push(t);
        if extends_consistently(a, b, assign) {
            used[t] = true;
            point_search(a, b, assign, used, out, limit);
            used[t] = false;
        }
        assign.pop();
    }
}

fn linear_search(
    va: &VecSubspace,
    vb: &VecSubspace,
    pool: &[Vector],
    cur: &mut Vec<Vector>,
    out: &mut Vec<Embedding>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if cur.len() == va.dim() {
        out.push(Embedding::Linear(cur.clone()));
        return;
    }
    let span = (!cur.is_empty()).then(|| {
        vb.field()
            .coordinate_map(cur, vb.ambient())
            .expect("independent prefix")
    });
    for v in pool {
        if span.as_ref().is_some_and(|s| s.contains(v)) {
            continue;
        }
        cur.push(v.clone());
        linear_search(va, vb, pool, cur, out, limit);
        cur.pop();
    }
}

/// Image of an arbitrary vector of `a` under the linear map sending the
/// echelon basis of `a` to `images`.
pub fn apply_linear(a: &VecSubspace, images: &[Vector], v: &[u8]) -> Result<Vector> {
    let coords = a
        .coordinate_map()
        .coords(v)
        .ok_or_else(|| Error::NotInSpace(v.to_vec()))?;
    let dim = images.first().map_or(0, |x| x.len());
    Ok(a.field().combine(dim, &coords, images))
}

/// `g ∘ f` for `f: a -> b`, `g: b -> c`.
pub fn compose(f: &Embedding, g: &Embedding, b: &FiniteStructure) -> Result<Embedding> {
    match (f, g) {
        (Embedding::Points(f), Embedding::Points(g)) => f
            .iter()
            .map(|&x| {
                g.get(x)
                    .copied()
                    .ok_or_else(|| Error::InvalidEmbedding(format!("point {x} not in domain")))
            })
            .collect::<Result<_>>()
            .map(Embedding::Points),
        (Embedding::Linear(f), Embedding::Linear(g)) => {
            let vb = b.as_vecspace()?;
            f.iter()
                .map(|v| apply_linear(vb, g, v))
                .collect::<Result<_>>()
                .map(Embedding::Linear)
        }
        _ => Err(Error::InvalidEmbedding("cannot compose point and linear maps".into())),
    }
}

/// A substructure of a base together with its inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substructure {
    pub structure: FiniteStructure,
    pub witness: Embedding,
}

/// One representative per isomorphism class of substructure of `b`, smallest
/// first, each with an embedding into `b`.
pub fn substructure_reps(b: &FiniteStructure) -> Vec<Substructure> {
    match b {
        FiniteStructure::VecSpace(v) => (1..=v.dim())
            .map(|d| Substructure {
                structure: FiniteStructure::VecSpace(VecSubspace::full(v.field(), d)),
                witness: Embedding::Linear(v.basis()[..d].to_vec()),
            })
            .collect(),
        _ => {
            let mut seen: BTreeMap<Vec<[usize; 4]>, ()> = BTreeMap::new();
            induced_substructures(b)
                .into_iter()
                .filter(|s| {
                    seen.insert(canonical_key(&s.structure), ()).is_none()
                })
                .collect()
        }
    }
}

/// Every substructure of `b`: induced on each nonempty point subset, or
/// every nonzero subspace.
pub fn induced_substructures(b: &FiniteStructure) -> Vec<Substructure> {
    match b {
        FiniteStructure::VecSpace(v) => v
            .subspaces()
            .into_iter()
            .map(|w| Substructure {
                witness: Embedding::Linear(w.basis().to_vec()),
                structure: FiniteStructure::VecSpace(w),
            })
            .collect(),
        FiniteStructure::Digraph(g) => subsets(g.n())
            .into_iter()
            .map(|s| Substructure {
                structure: FiniteStructure::Digraph(g.induced(&s)),
                witness: Embedding::Points(s),
            })
            .collect(),
        FiniteStructure::Boron(br) => subsets(br.n_leaves())
            .into_iter()
            .map(|s| Substructure {
                structure: FiniteStructure::Boron(br.induced(&s)),
                witness: Embedding::Points(s),
            })
            .collect(),
    }
}

/// Nonempty subsets of `0..n`, by size and then lexicographically.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=n {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            out.push(comb.clone());
            let Some(i) = (0..k).rev().find(|&i| comb[i] < n - k + i) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Brute-force isomorphism invariant for relational structures: the least
/// relabelled relation over all permutations, prefixed by the size.
fn canonical_key(s: &FiniteStructure) -> Vec<[usize; 4]> {
    let n = s.size();
    let tuples = |perm: &[usize]| -> Vec<[usize; 4]> {
        let mut t: Vec<[usize; 4]> = match s {
            FiniteStructure::Digraph(g) => {
                g.edges().map(|(i, j)| [perm[i], perm[j], 0, 0]).collect()
            }
            FiniteStructure::Boron(b) => b.relation().map(|t| t.map(|x| perm[x])).collect(),
            FiniteStructure::VecSpace(_) => unreachable!(),
        };
        t.sort();
        t
    };
    let best = permutations(n)
        .iter()
        .map(|p| tuples(p))
        .min()
        .unwrap_or_default();
    std::iter::once([n, usize::MAX, 0, 0]).chain(best).collect()
}

/// Whether two relational structures are isomorphic (brute force).
pub fn isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    match (a, b) {
        (FiniteStructure::VecSpace(x), FiniteStructure::VecSpace(y)) => {
            x.field() == y.field() && x.dim() == y.dim()
        }
        _ => a.kind() == b.kind() && canonical_key(a) == canonical_key(b),
    }
}
