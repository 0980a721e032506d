use thiserror::Error;

use crate::dsl::DslError;
use crate::relation::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("universe size {0} outside 1..=16")]
    UniverseSize(usize),
    #[error("universe mismatch: {left} vs {right}")]
    UniverseMismatch { left: usize, right: usize },
    #[error("element {element} outside universe of size {n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("not a bijection: {0}")]
    NotBijective(String),
    #[error("partial injection has overlapping domain and range at {0}")]
    OverlappingInjection(usize),
    #[error("unknown catalog relation {0:?}")]
    UnknownCatalog(String),
    #[error("n = {n} exceeds the cap of {cap} for {what}")]
    CapabilityExceeded { what: &'static str, n: usize, cap: usize },
    #[error("slice size {k} outside 0..={n}")]
    SliceOutOfRange { k: usize, n: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not an equivalence relation: {0}")]
    NotEquivalence(Box<ValidationReport>),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error("E-class not preserved at {0}")]
    ClassNotPreserved(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
