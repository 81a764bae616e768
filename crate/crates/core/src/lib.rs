//! Coloured Cayley graphs and the CCA property.

pub mod builders;
pub mod cayley;
pub mod constructions;
pub mod engine;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod iso;
pub mod limits;
pub mod perm;
pub mod plain;
pub mod structure;
pub mod words;

pub use builders::{build, build_str, GroupSpec};
pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use perm::Permutation;
