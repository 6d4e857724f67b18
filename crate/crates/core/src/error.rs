use thiserror::Error;

use crate::structures::StructureKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: StructureKind,
        found: StructureKind,
    },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The structure has no expansion in the companion class.
    #[error("structure lies outside the age of the class `{0}` (no expansions)")]
    OutsideAge(String),

    #[error("vector {0:?} does not lie in the space")]
    NotInSpace(Vec<u8>),

    #[error("malformed order: {0}")]
    MalformedOrder(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("not an ordered inclusion: {0}")]
    NotOrderedInclusion(String),

    #[error("enumeration of {requested} orderings exceeds the cap of {cap}")]
    EnumerationCap { requested: u128, cap: u128 },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("base #{index}: {source}")]
    AtBase {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors caused by internal inconsistencies rather than bad input.
    pub fn is_internal(&self) -> bool {
        match self {
            Error::Invariant(_) => true,
            Error::AtBase { source, .. } => source.is_internal(),
            _ => false,
        }
    }
}
