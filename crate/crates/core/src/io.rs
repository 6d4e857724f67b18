//! JSON literals for structures, expansions, embeddings, certificates and
//! measures. Rationals are written as "p/q" strings.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::amenability::{
    Certificate, CertificateTerm, ConsistentMeasure, GeneratorSpec, OmegaVector,
};
use crate::error::{Error, Result};
use crate::expansions::{BoronOrder, Class, Expansion, NaturalOrdering, S3Coloring};
use crate::field::{FieldPrime, Vector};
use crate::structures::{boron_bn, BoronStructure, Digraph, Embedding, FiniteStructure, VecSubspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureLiteral {
    Digraph {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
    Boron {
        n_leaves: usize,
        #[serde(rename = "R")]
        r: Vec<[usize; 4]>,
    },
    BoronBn {
        n: usize,
    },
    Vecspace {
        q: u32,
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ambient: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<Vector>>,
    },
}

impl StructureLiteral {
    pub fn build(&self) -> Result<FiniteStructure> {
        Ok(match self {
            StructureLiteral::Digraph { n, edges } => {
                FiniteStructure::Digraph(Digraph::new(*n, edges.iter().copied())?)
            }
            StructureLiteral::Boron { n_leaves, r } => {
                FiniteStructure::Boron(BoronStructure::new(*n_leaves, r.iter().copied())?)
            }
            StructureLiteral::BoronBn { n } => FiniteStructure::Boron(boron_bn(*n)?),
            StructureLiteral::Vecspace {
                q,
                dim,
                ambient,
                basis,
            } => {
                let field = FieldPrime::new(*q)?;
                let space = match basis {
                    None => {
                        if ambient.is_some_and(|m| m != *dim) {
                            return Err(Error::InvalidStructure(
                                "a proper subspace needs an explicit basis".into(),
                            ));
                        }
                        VecSubspace::full(field, *dim)
                    }
                    Some(gens) => {
                        let m = ambient.or(gens.first().map(Vec::len)).unwrap_or(*dim);
                        VecSubspace::span(field, m, gens)?
                    }
                };
                if space.dim() != *dim || *dim == 0 {
                    return Err(Error::InvalidStructure(format!(
                        "declared dimension {dim} but the basis spans dimension {}",
                        space.dim()
                    )));
                }
                FiniteStructure::VecSpace(space)
            }
        })
    }

    pub fn from_structure(s: &FiniteStructure) -> Self {
        match s {
            FiniteStructure::Digraph(g) => StructureLiteral::Digraph {
                n: g.n(),
                edges: g.edges().collect(),
            },
            FiniteStructure::Boron(b) => StructureLiteral::Boron {
                n_leaves: b.n_leaves(),
                r: b.relation().copied().collect(),
            },
            FiniteStructure::VecSpace(v) => {
                let full = v.is_full();
                StructureLiteral::Vecspace {
                    q: v.field().order(),
                    dim: v.dim(),
                    ambient: (!full).then_some(v.ambient()),
                    basis: (!full).then(|| v.basis().to_vec()),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ExpansionLiteral {
    S3 {
        parts: Vec<u8>,
    },
    Boron {
        order: Vec<usize>,
        #[serde(rename = "S")]
        s: Vec<[usize; 3]>,
    },
    Vecspace {
        least_basis: Vec<Vector>,
    },
}

impl ExpansionLiteral {
    pub fn build(&self) -> Result<Expansion> {
        Ok(match self {
            ExpansionLiteral::S3 { parts } => Expansion::S3(S3Coloring::new(parts.clone())),
            ExpansionLiteral::Boron { order, s } => {
                Expansion::Boron(BoronOrder::new(order.clone(), s.iter().copied())?)
            }
            ExpansionLiteral::Vecspace { least_basis } => {
                Expansion::Natural(NaturalOrdering::new(least_basis.clone()))
            }
        })
    }

    pub fn from_expansion(e: &Expansion) -> Self {
        match e {
            Expansion::S3(c) => ExpansionLiteral::S3 {
                parts: c.parts.clone(),
            },
            Expansion::Boron(o) => ExpansionLiteral::Boron {
                order: o.order().to_vec(),
                s: o.triples().copied().collect(),
            },
            Expansion::Natural(n) => ExpansionLiteral::Vecspace {
                least_basis: n.least_basis.clone(),
            },
        }
    }
}

/// A point map is a list of indices; a linear map a list of image vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EmbeddingLiteral {
    Points(Vec<usize>),
    Linear(Vec<Vector>),
}

impl From<&Embedding> for EmbeddingLiteral {
    fn from(e: &Embedding) -> Self {
        match e {
            Embedding::Points(p) => EmbeddingLiteral::Points(p.clone()),
            Embedding::Linear(v) => EmbeddingLiteral::Linear(v.clone()),
        }
    }
}

impl From<EmbeddingLiteral> for Embedding {
    fn from(e: EmbeddingLiteral) -> Self {
        match e {
            EmbeddingLiteral::Points(p) => Embedding::Points(p),
            EmbeddingLiteral::Linear(v) => Embedding::Linear(v),
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|_| Error::InvalidArgument(format!("bad rational {s:?}")))
}

pub fn parse_structure(json: &str) -> Result<FiniteStructure> {
    serde_json::from_str::<StructureLiteral>(json)?.build()
}

pub fn structure_json(s: &FiniteStructure) -> serde_json::Value {
    serde_json::to_value(StructureLiteral::from_structure(s)).expect("serialisable")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermFile {
    #[serde(rename = "A")]
    a: StructureLiteral,
    x: ExpansionLiteral,
    pi1: EmbeddingLiteral,
    pi2: EmbeddingLiteral,
    coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CertificateFile {
    class: String,
    base: StructureLiteral,
    terms: Vec<TermFile>,
    realized: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct WeightEntry {
    id: String,
    expansion: ExpansionLiteral,
    weight: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MeasureFile {
    class: String,
    base: StructureLiteral,
    weights: Vec<WeightEntry>,
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::MalformedCertificate(e.to_string())
}

pub fn certificate_to_json(class: Class, c: &Certificate) -> String {
    let file = CertificateFile {
        class: class.name().into(),
        base: StructureLiteral::from_structure(&c.base),
        terms: c
            .terms
            .iter()
            .map(|t| TermFile {
                a: StructureLiteral::from_structure(&t.generator.a),
                x: ExpansionLiteral::from_expansion(&t.generator.x),
                pi1: (&t.generator.pi1).into(),
                pi2: (&t.generator.pi2).into(),
                coeff: format_rational(&t.coeff),
            })
            .collect(),
        realized: c
            .realized
            .iter()
            .map(|(e, v)| (e.to_string(), format_rational(v)))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serialisable") + "\n"
}

/// Reads a certificate. Any syntactic or structural problem is reported as
/// [`Error::MalformedCertificate`].
pub fn certificate_from_json(json: &str) -> Result<(Class, Certificate)> {
    let file: CertificateFile = serde_json::from_str(json).map_err(malformed)?;
    let class: Class = file.class.parse().map_err(malformed)?;
    let base = file.base.build().map_err(malformed)?;
    let ids: HashMap<String, Expansion> = class
        .plugin()
        .expansions_of(&base)
        .map_err(malformed)?
        .into_iter()
        .map(|e| (e.to_string(), e))
        .collect();
    let terms = file
        .terms
        .into_iter()
        .map(|t| {
            Ok(CertificateTerm {
                generator: GeneratorSpec {
                    a: t.a.build()?,
                    x: t.x.build()?,
                    pi1: t.pi1.into(),
                    pi2: t.pi2.into(),
                },
                coeff: parse_rational(&t.coeff)?,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map_err(malformed)?;
    let mut realized = OmegaVector::new();
    for (id, v) in &file.realized {
        let e = ids
            .get(id)
            .ok_or_else(|| malformed(format!("{id} is not an expansion of the base")))?;
        realized.add(e, &parse_rational(v).map_err(malformed)?);
    }
    Ok((class, Certificate { base, terms, realized }))
}

pub fn measure_to_json(class: Class, m: &ConsistentMeasure) -> String {
    let file = MeasureFile {
        class: class.name().into(),
        base: StructureLiteral::from_structure(&m.base),
        weights: m
            .weights
            .iter()
            .map(|(e, w)| WeightEntry {
                id: e.to_string(),
                expansion: ExpansionLiteral::from_expansion(e),
                weight: format_rational(w),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serialisable") + "\n"
}

pub fn measure_from_json(json: &str) -> Result<(Class, ConsistentMeasure)> {
    let file: MeasureFile = serde_json::from_str(json)?;
    let class: Class = file.class.parse()?;
    let base = file.base.build()?;
    let weights = file
        .weights
        .iter()
        .map(|w| Ok((w.expansion.build()?, parse_rational(&w.weight)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((class, ConsistentMeasure { base, weights }))
}
