//! The consistency system over a base structure B and its exact decision:
//! a positive solution is a consistent probability measure on K*(B), and the
//! alternative is a certificate that the automorphism group of the limit is
//! not amenable.

mod stiemke;

pub use stiemke::{row_combination, stiemke_solve, to_primitive_integers, Matrix, StiemkeOutcome};

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expansions::{ClassPlugin, Expansion};
use crate::structures::{
    enumerate_embeddings, induced_substructures, is_embedding, substructure_reps, Embedding,
    FiniteStructure,
};

/// A rational combination of expansions of a fixed base, stored sparsely
/// without zero entries.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OmegaVector {
    coeffs: BTreeMap<Expansion, BigRational>,
}

impl OmegaVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, e: &Expansion, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(e);
        }
    }

    pub fn add_scaled(&mut self, other: &OmegaVector, c: &BigRational) {
        for (e, v) in &other.coeffs {
            self.add(e, &(v * c));
        }
    }

    pub fn get(&self, e: &Expansion) -> BigRational {
        self.coeffs.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Expansion, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero with every coefficient nonnegative.
    pub fn is_semipositive(&self) -> bool {
        !self.is_zero() && self.coeffs.values().all(|v| v.is_positive())
    }
}

impl FromIterator<(Expansion, BigRational)> for OmegaVector {
    fn from_iter<I: IntoIterator<Item = (Expansion, BigRational)>>(iter: I) -> Self {
        let mut v = OmegaVector::new();
        for (e, c) in iter {
            v.add(&e, &c);
        }
        v
    }
}

/// A generator of S_B: the fiber sum of x along π1 minus that along π2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub a: FiniteStructure,
    pub x: Expansion,
    pub pi1: Embedding,
    pub pi2: Embedding,
}

impl GeneratorSpec {
    /// Σ_{y ∈ K*(x,B,π1)} y − Σ_{z ∈ K*(x,B,π2)} z, recomputed from scratch.
    pub fn realize(&self, plugin: &dyn ClassPlugin, b: &FiniteStructure) -> Result<OmegaVector> {
        let mut out = OmegaVector::new();
        let one = BigRational::one();
        for e in plugin.expansions_of(b)? {
            if plugin.pull_back(&e, &self.a, b, &self.pi1)? == self.x {
                out.add(&e, &one);
            }
            if plugin.pull_back(&e, &self.a, b, &self.pi2)? == self.x {
                out.add(&e, &-one.clone());
            }
        }
        Ok(out)
    }
}

/// Which substructures A range over when building the system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SubstructureRange {
    /// One representative per isomorphism class.
    #[default]
    Representatives,
    /// Every induced substructure (every subspace, for vector spaces).
    All,
}

/// The matrix of the system q_s = 0 (s ∈ S_B), q_x > 0: one row per
/// distinct nonzero generator, one column per expansion of B.
#[derive(Clone, Debug)]
pub struct ConsistencySystem {
    pub base: FiniteStructure,
    pub columns: Vec<Expansion>,
    pub generators: Vec<GeneratorSpec>,
    pub rows: Vec<Vec<i64>>,
}

impl ConsistencySystem {
    pub fn matrix(&self) -> Matrix {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect()
    }

    pub fn row_vector(&self, i: usize) -> OmegaVector {
        self.columns
            .iter()
            .zip(&self.rows[i])
            .map(|(e, &v)| (e.clone(), BigRational::from_integer(v.into())))
            .collect()
    }
}

/// Builds the system over `b` with A ranging over isomorphism
/// representatives of substructures.
pub fn build_consistency_system(
    b: &FiniteStructure,
    plugin: &dyn ClassPlugin,
) -> Result<ConsistencySystem> {
    build_consistency_system_with(b, plugin, SubstructureRange::Representatives)
}

pub fn build_consistency_system_with(
    b: &FiniteStructure,
    plugin: &dyn ClassPlugin,
    range: SubstructureRange,
) -> Result<ConsistencySystem> {
    let columns = plugin.expansions_of(b)?;
    let subs = match range {
        SubstructureRange::Representatives => substructure_reps(b),
        SubstructureRange::All => induced_substructures(b),
    };
    let mut generators = Vec::new();
    let mut rows = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    for sub in subs {
        let a = &sub.structure;
        let xs = plugin.expansions_of(a)?;
        let index: HashMap<&Expansion, usize> = xs.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let embeddings = enumerate_embeddings(a, b)?;
        // fibers[p][col]: the expansion of A that column `col` restricts to
        // along embedding p.
        let fibers: Vec<Vec<usize>> = embeddings
            .iter()
            .map(|pi| {
                columns
                    .iter()
                    .map(|e| {
                        let x = plugin.pull_back(e, a, b, pi)?;
                        index.get(&x).copied().ok_or_else(|| {
                            Error::invariant(format!("restriction {x} of {e} is not in K*(A)"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for p1 in 0..embeddings.len() {
            for p2 in p1 + 1..embeddings.len() {
                for (xi, x) in xs.iter().enumerate() {
                    let mut row: Vec<i64> = (0..columns.len())
                        .map(|c| (fibers[p1][c] == xi) as i64 - (fibers[p2][c] == xi) as i64)
                        .collect();
                    let Some(lead) = row.iter().find(|&&v| v != 0).copied() else {
                        continue;
                    };
                    let (pi1, pi2) = if lead > 0 { (p1, p2) } else { (p2, p1) };
                    if lead < 0 {
                        row.iter_mut().for_each(|v| *v = -*v);
                    }
                    if seen.insert(row.clone()) {
                        generators.push(GeneratorSpec {
                            a: a.clone(),
                            x: x.clone(),
                            pi1: embeddings[pi1].clone(),
                            pi2: embeddings[pi2].clone(),
                        });
                        rows.push(row);
                    }
                }
            }
        }
    }
    Ok(ConsistencySystem {
        base: b.clone(),
        columns,
        generators,
        rows,
    })
}

/// Positive weights on K*(B) summing to 1 with equal mass on the π1 and π2
/// fibers of every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistentMeasure {
    pub base: FiniteStructure,
    pub weights: Vec<(Expansion, BigRational)>,
}

impl ConsistentMeasure {
    pub fn weight(&self, e: &Expansion) -> BigRational {
        self.weights
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Checks positivity, total mass 1 and every generator of `system`.
    pub fn satisfies(&self, system: &ConsistencySystem) -> bool {
        let total: BigRational = self.weights.iter().map(|(_, w)| w.clone()).sum();
        let positive = self.weights.iter().all(|(_, w)| w.is_positive());
        let same_columns = self.weights.len() == system.columns.len()
            && self.weights.iter().zip(&system.columns).all(|((e, _), c)| e == c);
        same_columns
            && positive
            && total.is_one()
            && system.rows.iter().all(|row| {
                row.iter()
                    .zip(&self.weights)
                    .map(|(&v, (_, w))| w * BigRational::from_integer(v.into()))
                    .sum::<BigRational>()
                    .is_zero()
            })
    }
}

/// One generator of a certificate with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTerm {
    pub generator: GeneratorSpec,
    pub coeff: BigRational,
}

/// A combination of generators whose realization is nonzero with no negative
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub base: FiniteStructure,
    pub terms: Vec<CertificateTerm>,
    pub realized: OmegaVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Measure(ConsistentMeasure),
    Certificate(Certificate),
}

/// Decides the system over `b`.
pub fn decide_base(b: &FiniteStructure, plugin: &dyn ClassPlugin) -> Result<Decision> {
    let system = build_consistency_system(b, plugin)?;
    decide_system(&system)
}

pub fn decide_system(system: &ConsistencySystem) -> Result<Decision> {
    let m = system.matrix();
    let cols = system.columns.len();
    let outcome = stiemke_solve(&m, cols);
    if !outcome.verify(&m, cols) {
        return Err(Error::invariant("solver outcome failed re-verification"));
    }
    match outcome {
        StiemkeOutcome::Primal(x) => {
            let total: BigRational = x.iter().cloned().sum();
            let weights = system
                .columns
                .iter()
                .cloned()
                .zip(x.into_iter().map(|v| v / &total))
                .collect();
            Ok(Decision::Measure(ConsistentMeasure {
                base: system.base.clone(),
                weights,
            }))
        }
        StiemkeOutcome::Dual(y) => {
            let mut realized = OmegaVector::new();
            let mut terms = Vec::new();
            for (i, c) in y.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                realized.add_scaled(&system.row_vector(i), c);
                terms.push(CertificateTerm {
                    generator: system.generators[i].clone(),
                    coeff: c.clone(),
                });
            }
            if !realized.is_semipositive() {
                return Err(Error::invariant("dual combination is not semipositive"));
            }
            Ok(Decision::Certificate(Certificate {
                base: system.base.clone(),
                terms,
                realized,
            }))
        }
    }
}

/// Recomputes Σ coeff · realize(generator), rejecting terms whose x, π1 or
/// π2 are not what they claim to be.
pub fn certificate_realization(c: &Certificate, plugin: &dyn ClassPlugin) -> Result<OmegaVector> {
    plugin.expansions_of(&c.base)?;
    let mut v = OmegaVector::new();
    for (i, t) in c.terms.iter().enumerate() {
        let g = &t.generator;
        let bad = |why: String| Error::MalformedCertificate(format!("term {i}: {why}"));
        if !plugin.contains(&g.a, &g.x).map_err(|e| bad(e.to_string()))? {
            return Err(bad(format!("{} is not an expansion of A", g.x)));
        }
        for (name, pi) in [("pi1", &g.pi1), ("pi2", &g.pi2)] {
            let ok = is_embedding(pi, &g.a, &c.base).map_err(|e| bad(e.to_string()))?;
            if !ok {
                return Err(bad(format!("{name} is not an embedding of A into the base")));
            }
        }
        if g.pi1 == g.pi2 {
            return Err(bad("pi1 and pi2 coincide".into()));
        }
        v.add_scaled(&g.realize(plugin, &c.base)?, &t.coeff);
    }
    Ok(v)
}

/// True iff the recomputed combination is nonzero and nonnegative and agrees
/// with the stored realization.
pub fn verify_certificate(c: &Certificate, plugin: &dyn ClassPlugin) -> Result<bool> {
    let v = certificate_realization(c, plugin)?;
    Ok(v.is_semipositive() && v == c.realized)
}

/// Rebuilds the system over the measure's base and checks the measure
/// against it.
pub fn verify_measure(m: &ConsistentMeasure, plugin: &dyn ClassPlugin) -> Result<bool> {
    let system = build_consistency_system(&m.base, plugin)?;
    Ok(m.satisfies(&system))
}

/// Result of running [`decide_base`] along a ladder of bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Obstruction { index: usize, certificate: Certificate },
    NoObstruction(NoObstructionReport),
}

/// Every base in the ladder admitted a consistent measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoObstructionReport {
    pub measures: Vec<ConsistentMeasure>,
}

impl NoObstructionReport {
    pub const NOTE: &'static str =
        "no obstruction on these bases; this does not prove amenability";
}

pub fn search_obstruction(
    plugin: &dyn ClassPlugin,
    bases: &[FiniteStructure],
) -> Result<SearchOutcome> {
    if bases.is_empty() {
        return Err(Error::InvalidArgument("no bases to search".into()));
    }
    let mut measures = Vec::new();
    for (index, b) in bases.iter().enumerate() {
        match decide_base(b, plugin).map_err(|e| Error::AtBase {
            index,
            source: Box::new(e),
        })? {
            Decision::Certificate(certificate) => {
                return Ok(SearchOutcome::Obstruction { index, certificate })
            }
            Decision::Measure(m) => measures.push(m),
        }
    }
    Ok(SearchOutcome::NoObstruction(NoObstructionReport { measures }))
}

/// The uniform measure on K*(B).
pub fn uniform_measure(system: &ConsistencySystem) -> ConsistentMeasure {
    let w = BigRational::new(BigInt::one(), BigInt::from(system.columns.len()));
    ConsistentMeasure {
        base: system.base.clone(),
        weights: system.columns.iter().map(|e| (e.clone(), w.clone())).collect(),
    }
}
