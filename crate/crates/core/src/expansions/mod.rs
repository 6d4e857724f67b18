//! Expansion classes K* for the built-in classes: enumeration of K*(A),
//! restriction along embeddings, and fibers K*(x, B, π).

pub mod boron;
pub mod s3;
pub mod vecspace;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::structures::{Embedding, FiniteStructure, StructureKind};

pub use boron::{
    boron_expansions, boron_expansions_at_depth, boron_order_of, boron_reduce, BoronOrder,
    TreeEmbedding,
};
pub use s3::{s3_expansions, s3_membership, S3Coloring};
pub use vecspace::{vs_orderings, NaturalOrdering};

/// An element of K*(A) for some A.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expansion {
    S3(S3Coloring),
    Boron(BoronOrder),
    Natural(NaturalOrdering),
}

impl Expansion {
    pub fn class(&self) -> Class {
        match self {
            Expansion::S3(_) => Class::S3,
            Expansion::Boron(_) => Class::Boron,
            Expansion::Natural(_) => Class::VecSpace,
        }
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Canonical identifier, e.g. `s3:0,1,1,2`,
/// `boron:0<1<2<3|(0,1,2),(0,1,3)` or `vecspace:(1,0),(0,1)`.
impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expansion::S3(c) => write!(f, "s3:{}", join(&c.parts)),
            Expansion::Boron(o) => {
                let order = o.order().iter().map(|x| x.to_string()).collect::<Vec<_>>();
                let s = join(o.triples().map(|[a, b, c]| format!("({a},{b},{c})")));
                write!(f, "boron:{}|{s}", order.join("<"))
            }
            Expansion::Natural(n) => {
                write!(f, "vecspace:{}", join(n.least_basis.iter().map(|v| format!("({})", join(v)))))
            }
        }
    }
}

/// The built-in expansion classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    S3,
    Boron,
    VecSpace,
}

impl Class {
    pub const ALL: [Class; 3] = [Class::S3, Class::Boron, Class::VecSpace];

    pub fn name(self) -> &'static str {
        match self {
            Class::S3 => "s3",
            Class::Boron => "boron",
            Class::VecSpace => "vecspace",
        }
    }

    /// Kind of the structures the class expands.
    pub fn kind(self) -> StructureKind {
        match self {
            Class::S3 => StructureKind::Digraph,
            Class::Boron => StructureKind::Boron,
            Class::VecSpace => StructureKind::VecSpace,
        }
    }

    pub fn plugin(self) -> &'static dyn ClassPlugin {
        match self {
            Class::S3 => &S3Plugin,
            Class::Boron => &BoronPlugin,
            Class::VecSpace => &VecSpacePlugin,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Class::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown class {s:?}")))
    }
}

/// Uniform interface over expansion classes.
pub trait ClassPlugin: Send + Sync {
    fn class(&self) -> Class;

    /// K*(A) in a deterministic order. An empty K*(A) is reported as
    /// [`Error::OutsideAge`].
    fn expansions_of(&self, a: &FiniteStructure) -> Result<Vec<Expansion>>;

    /// The pullback of `e ∈ K*(B)` along `pi: A -> B`, without checking
    /// membership in K*(A).
    fn pull_back(
        &self,
        e: &Expansion,
        a: &FiniteStructure,
        b: &FiniteStructure,
        pi: &Embedding,
    ) -> Result<Expansion>;

    /// Whether `e` belongs to K*(A).
    fn contains(&self, a: &FiniteStructure, e: &Expansion) -> Result<bool>;
}

fn check_kind(class: Class, s: &FiniteStructure) -> Result<()> {
    if s.kind() != class.kind() {
        return Err(Error::KindMismatch {
            expected: class.kind(),
            found: s.kind(),
        });
    }
    Ok(())
}

fn non_empty(a: &FiniteStructure, list: Vec<Expansion>) -> Result<Vec<Expansion>> {
    if list.is_empty() {
        return Err(Error::OutsideAge(format!(
            "the {} structure of size {} has no expansions",
            a.kind(),
            a.size()
        )));
    }
    Ok(list)
}

fn wrong_payload(class: Class, e: &Expansion) -> Error {
    Error::InvalidArgument(format!("{e} is not a {class} expansion"))
}

fn point_map<'a>(pi: &'a Embedding, a: &FiniteStructure, b: &FiniteStructure) -> Result<&'a [usize]> {
    let map = pi.points()?;
    if map.len() != a.size() || map.iter().any(|&x| x >= b.size()) {
        return Err(Error::InvalidEmbedding(format!(
            "point map {map:?} does not fit sizes {} -> {}",
            a.size(),
            b.size()
        )));
    }
    Ok(map)
}

pub struct S3Plugin;

impl ClassPlugin for S3Plugin {
    fn class(&self) -> Class {
        Class::S3
    }

    fn expansions_of(&self, a: &FiniteStructure) -> Result<Vec<Expansion>> {
        check_kind(Class::S3, a)?;
        non_empty(a, s3_expansions(a.as_digraph()?))
    }

    fn pull_back(
        &self,
        e: &Expansion,
        a: &FiniteStructure,
        b: &FiniteStructure,
        pi: &Embedding,
    ) -> Result<Expansion> {
        check_kind(Class::S3, a)?;
        check_kind(Class::S3, b)?;
        let Expansion::S3(c) = e else {
            return Err(wrong_payload(Class::S3, e));
        };
        if c.parts.len() != b.size() {
            return Err(Error::InvalidArgument(format!("{e} does not colour {} vertices", b.size())));
        }
        let map = point_map(pi, a, b)?;
        Ok(Expansion::S3(S3Coloring::new(map.iter().map(|&x| c.parts[x]).collect())))
    }

    fn contains(&self, a: &FiniteStructure, e: &Expansion) -> Result<bool> {
        check_kind(Class::S3, a)?;
        Ok(matches!(e, Expansion::S3(c) if s3_membership(a.as_digraph()?, &c.parts)))
    }
}

pub struct BoronPlugin;

impl ClassPlugin for BoronPlugin {
    fn class(&self) -> Class {
        Class::Boron
    }

    fn expansions_of(&self, a: &FiniteStructure) -> Result<Vec<Expansion>> {
        check_kind(Class::Boron, a)?;
        non_empty(a, boron_expansions(a.as_boron()?)?)
    }

    fn pull_back(
        &self,
        e: &Expansion,
        a: &FiniteStructure,
        b: &FiniteStructure,
        pi: &Embedding,
    ) -> Result<Expansion> {
        check_kind(Class::Boron, a)?;
        check_kind(Class::Boron, b)?;
        let Expansion::Boron(o) = e else {
            return Err(wrong_payload(Class::Boron, e));
        };
        if o.order().len() != b.size() {
            return Err(Error::InvalidArgument(format!("{e} does not order {} leaves", b.size())));
        }
        let map = point_map(pi, a, b)?;
        let rank = o.rank();
        let mut order: Vec<usize> = (0..map.len()).collect();
        order.sort_by_key(|&i| rank[map[i]]);
        let mut triples = Vec::new();
        for x in 0..map.len() {
            for y in x + 1..map.len() {
                for z in (0..map.len()).filter(|&z| z != x && z != y) {
                    if o.holds(map[x], map[y], map[z]) {
                        triples.push([x, y, z]);
                    }
                }
            }
        }
        Ok(Expansion::Boron(BoronOrder::new(order, triples)?))
    }

    fn contains(&self, a: &FiniteStructure, e: &Expansion) -> Result<bool> {
        check_kind(Class::Boron, a)?;
        Ok(matches!(e, Expansion::Boron(_)) && boron_expansions(a.as_boron()?)?.contains(e))
    }
}

pub struct VecSpacePlugin;

impl ClassPlugin for VecSpacePlugin {
    fn class(&self) -> Class {
        Class::VecSpace
    }

    fn expansions_of(&self, a: &FiniteStructure) -> Result<Vec<Expansion>> {
        check_kind(Class::VecSpace, a)?;
        non_empty(a, vs_orderings(a.as_vecspace()?))
    }

    fn pull_back(
        &self,
        e: &Expansion,
        a: &FiniteStructure,
        b: &FiniteStructure,
        pi: &Embedding,
    ) -> Result<Expansion> {
        check_kind(Class::VecSpace, a)?;
        check_kind(Class::VecSpace, b)?;
        let Expansion::Natural(n) = e else {
            return Err(wrong_payload(Class::VecSpace, e));
        };
        let (va, vb) = (a.as_vecspace()?, b.as_vecspace()?);
        if va.field() != vb.field() {
            return Err(Error::InvalidEmbedding("spaces over different fields".into()));
        }
        let images = pi.images()?;
        if let Some(v) = images.iter().find(|v| !vb.contains(v)) {
            return Err(Error::NotInSpace(v.clone()));
        }
        Ok(Expansion::Natural(vecspace::restrict_natural(n, va, vb, images)?))
    }

    fn contains(&self, a: &FiniteStructure, e: &Expansion) -> Result<bool> {
        check_kind(Class::VecSpace, a)?;
        Ok(matches!(e, Expansion::Natural(n) if n.on(a.as_vecspace()?).is_ok()))
    }
}

/// K*(A) for the given class.
pub fn expansions_of(class: Class, a: &FiniteStructure) -> Result<Vec<Expansion>> {
    class.plugin().expansions_of(a)
}

/// The unique x ∈ K*(A) making `pi` an embedding of ⟨A, x⟩ into ⟨B, e⟩.
/// A restriction outside K*(A) is an internal error.
pub fn restrict_expansion(
    plugin: &dyn ClassPlugin,
    e: &Expansion,
    a: &FiniteStructure,
    b: &FiniteStructure,
    pi: &Embedding,
) -> Result<Expansion> {
    let x = plugin.pull_back(e, a, b, pi)?;
    if !plugin.contains(a, &x)? {
        return Err(Error::invariant(format!("restriction {x} of {e} is not in K*(A)")));
    }
    Ok(x)
}

/// K*(x, B, π): the expansions of B restricting to x along π.
pub fn expansion_fiber(
    plugin: &dyn ClassPlugin,
    x: &Expansion,
    a: &FiniteStructure,
    b: &FiniteStructure,
    pi: &Embedding,
) -> Result<Vec<Expansion>> {
    let mut out = Vec::new();
    for e in plugin.expansions_of(b)? {
        if &plugin.pull_back(&e, a, b, pi)? == x {
            out.push(e);
        }
    }
    Ok(out)
}
