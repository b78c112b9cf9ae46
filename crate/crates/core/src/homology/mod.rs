//! Group homology through the bar resolution, mapping cones, double
//! complexes and their spectral sequences, and the chain complexes attached
//! to opposition complexes.

mod bar;
mod cone;
mod double;
mod lhs;
mod module;
mod cstar;
mod spectral;
mod stability;

pub use bar::{
    bar_complex, bar_homology, bar_inclusion, bar_rank, group_homology, relative_group_homology, BarResolution, SubPair, DEFAULT_BUDGET,
};
pub use cone::{mapping_cone, ChainMap};
pub use cstar::{check_ordering, LevelCheck, OppositionChains, OrderingCheck};
pub use double::{
    bar_tensor, bar_tensor_truncated, random_double_complex, DoubleComplexZ, EquivariantComplex, RandomGrid, SubComplex, TotalComplex,
};
pub use lhs::{coinvariant_complex, lhs_spectral_sequence, relative_lhs, CoinvariantComplex, Lhs};
pub use module::GModule;
pub use spectral::{Orientation, Page, Reconciliation, SpectralSequence, Spot};
pub use stability::{stability_e1_page, E1Spot, StabilityPage, TotalDegree};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::group::GroupError;
use crate::simplicial::SimplicialError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("invalid module: {0}")]
    Module(String),
    #[error("budget exceeded: {needed} columns needed, budget {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("not a chain map: {0}")]
    ChainMap(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
