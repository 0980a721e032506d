//! A finite-model laboratory for permutation-invariant equivalence relations
//! on concepts and the abstraction principles built from them.
//!
//! Everything works over a universe `[n] = {0, …, n-1}` with `n ≤ 16`;
//! concepts are subsets of `[n]` and relations are sets of pair types.

pub mod cardinal;
pub mod classify;
pub mod dsl;
pub mod error;
pub mod partition;
pub mod permlab;
pub mod relation;
pub mod relcat;
pub mod sat;
pub mod universe;

pub use error::{LabError, Result};
pub use relation::{Catalog, InvariantRelation, TypeSet, ValidationReport};
pub use universe::{Concept, PairType, PartialInjection, Permutation, Universe};
