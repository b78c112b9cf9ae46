//! Finite groups: abstract groups by multiplication table, matrix groups
//! over finite fields, their actions on buildings, and stability pairs.

mod action;
mod finite;
mod matrix;
mod stability;

pub use action::{
    apartment_transitivity_check, orbit_sizes, strong_transitivity_check, vertex_permutation, BuildingAction,
};
pub use finite::{FiniteGroup, MAX_TABLE_ORDER};
pub use matrix::{
    general_linear, generate_group, gl_generators, gl_order, isometry_group, sl_generators, special_linear, transvection,
    MatrixGroup, MAX_GROUP_ORDER,
};
pub use stability::{stability_pair, LinkModule, Series, StabilityPair};

use std::collections::HashSet;
use std::hash::Hash;

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("construction check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Breadth-first closure of `gens` under right multiplication, identity
/// first. Fails once more than `cap` elements appear.
pub(crate) fn closure<T: Clone + Eq + Hash>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    cap: usize,
) -> Result<Vec<T>, GroupError> {
    let mut seen: HashSet<T> = HashSet::from([identity.clone()]);
    let mut out = vec![identity];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = mul(&out[i], g);
            if seen.insert(y.clone()) {
                out.push(y);
                if out.len() > cap {
                    return Err(GroupError::CapExceeded(format!("closure exceeds {cap} elements")));
                }
            }
        }
        i += 1;
    }
    Ok(out)
}
