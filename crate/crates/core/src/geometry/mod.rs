//! Finite fields, subspaces and forms, and the buildings of types A and C
//! over them together with their opposition complexes.

mod building;
mod field;
mod form;
mod linalg;
mod opposition;

pub use building::{building_a, building_c, Building, Caps, OppositionCheck};
pub use field::{FiniteField, MAX_FIELD_ORDER};
pub use form::{coord, label, FormKind, HermitianForm};
pub use linalg::{enumerate_subspaces_in, rref, FMatrix, Subspace};
pub use opposition::{opposition_complex, OppositionComplex};

use thiserror::Error;

use crate::simplicial::SimplicialError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("field axiom check failed: {0}")]
    FieldAxiom(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("malformed sidecar text: {0}")]
    Parse(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// All `k`-dimensional subspaces of `F_q^n` under the default caps.
pub fn enumerate_subspaces(n: usize, q: usize, k: usize) -> Result<Vec<Subspace>, GeometryError> {
    let caps = Caps::default();
    caps.check(n, q)?;
    if k > n {
        return Err(GeometryError::Invalid(format!("subspace dimension {k} exceeds {n}")));
    }
    Ok(enumerate_subspaces_in(&FiniteField::new(q)?, n, k))
}
