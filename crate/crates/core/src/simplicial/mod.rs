//! Typed simplicial complexes, integral chain complexes and their homology,
//! links and stars, and type filtrations.

mod chain;
mod complex;
mod filtration;

pub use chain::{HomologyGroups, ZChainComplex};
pub use complex::{build_complex, cone_chain, is_cone, reduced_homology, relative_homology, Simplex, TypeSet, TypedComplex};
pub use filtration::TypeFiltration;
pub(crate) use complex::{join_apex, sort_with_sign};

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("simplex {simplex:?} has two vertices of type {label}")]
    DuplicateType { simplex: Vec<u32>, label: u32 },
    #[error("vertex {0} has no type")]
    UnknownVertex(u32),
    #[error("type labels must be distinct, {0} repeats")]
    RepeatedLabel(u32),
    #[error("type {0} is not in the type set")]
    UnknownLabel(u32),
    #[error("simplex {0:?} is not in the ambient complex")]
    NotSubcomplex(Vec<u32>),
    #[error("vertex {vertex} does not lie in filtration level {level}")]
    VertexNotInLevel { vertex: u32, level: usize },
    #[error("the boundary out of degree {0} composed with the next one is nonzero")]
    NotAComplex(i64),
    #[error("malformed complex text: {0}")]
    Parse(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
