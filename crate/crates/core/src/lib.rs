pub mod amenability;
pub mod chains;
pub mod error;
pub mod expansions;
pub mod field;
pub mod io;
pub mod structures;
pub mod vmeasure;

pub use error::{Error, Result};
pub use field::{FieldPrime, Vector};
