use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::SparseIntMatrix;
use crate::group::FiniteGroup;

use super::HomologyError;

/// A free abelian group `Z^rank` with a left action of a finite group, one
/// integer matrix per element acting on column vectors.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    rank: usize,
    action: Vec<SparseIntMatrix>,
}

/// Above this many `(g, h)` pairs multiplicativity is sampled.
const EXHAUSTIVE_PAIRS: usize = 4096;

impl GModule {
    /// Checks the identity, multiplicativity (exhaustively for small
    /// groups, on seeded samples otherwise) and matrix shapes.
    pub fn new(group: Arc<FiniteGroup>, rank: usize, action: Vec<SparseIntMatrix>) -> Result<Self, HomologyError> {
        let m = GModule { group, rank, action };
        m.check(0, 200)?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, rank: usize, action: Vec<SparseIntMatrix>) -> Self {
        GModule { group, rank, action }
    }

    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let id = SparseIntMatrix::identity(rank);
        let action = vec![id; group.order()];
        GModule { group, rank, action }
    }

    /// `Z[G/H]` with `G` permuting the left cosets listed by `coset_of`.
    pub fn permutation(group: Arc<FiniteGroup>, reps: &[u32], coset_of: &[u32]) -> Self {
        let k = reps.len();
        let action = group
            .elements()
            .map(|g| {
                let trip = reps.iter().enumerate().map(|(i, &t)| (coset_of[group.mul(g, t) as usize] as usize, i, 1i64));
                SparseIntMatrix::from_triplets(k, k, trip).expect("in range")
            })
            .collect();
        GModule { group, rank: k, action }
    }

    /// Verifies the module axioms; `samples` bounds the pairs tested when
    /// the group is large.
    pub fn check(&self, seed: u64, samples: usize) -> Result<(), HomologyError> {
        let g = &self.group;
        if self.action.len() != g.order() {
            return Err(HomologyError::Module(format!("{} matrices for a group of order {}", self.action.len(), g.order())));
        }
        if let Some(i) = self.action.iter().position(|a| a.rows() != self.rank || a.cols() != self.rank) {
            return Err(HomologyError::Module(format!("matrix {i} has the wrong shape")));
        }
        if self.action[g.identity() as usize] != SparseIntMatrix::identity(self.rank) {
            return Err(HomologyError::Module("identity does not act trivially".into()));
        }
        let n = g.order();
        let pairs: Vec<(u32, u32)> = if n * n <= EXHAUSTIVE_PAIRS {
            (0..n as u32).flat_map(|a| (0..n as u32).map(move |b| (a, b))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32))).collect()
        };
        for (a, b) in pairs {
            let prod = self.action[a as usize].mul(&self.action[b as usize]).expect("square");
            if prod != self.action[g.mul(a, b) as usize] {
                return Err(HomologyError::Module(format!("action is not multiplicative at ({a}, {b})")));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: u32) -> &SparseIntMatrix {
        &self.action[g as usize]
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = SparseIntMatrix::identity(self.rank);
        self.action.iter().all(|a| *a == id)
    }

    /// `g . e_j` as a sparse vector.
    pub fn act_on_basis(&self, g: u32, j: usize) -> &[(usize, BigInt)] {
        self.action[g as usize].column(j)
    }

    /// Restriction along an embedding of a subgroup (`embedding[i]` is the
    /// image of element `i`).
    pub fn restrict(&self, sub: Arc<FiniteGroup>, embedding: &[u32]) -> Result<GModule, HomologyError> {
        if embedding.len() != sub.order() || !sub.is_homomorphism(&self.group, embedding) {
            return Err(HomologyError::Module("embedding is not a homomorphism".into()));
        }
        let action = embedding.iter().map(|&g| self.action[g as usize].clone()).collect();
        Ok(GModule { group: sub, rank: self.rank, action })
    }

    /// The submodule spanned by the basis vectors `basis`, which must be
    /// stable under every element.
    pub fn submodule(&self, basis: &[usize]) -> Result<GModule, HomologyError> {
        let mut in_basis = vec![false; self.rank];
        for &j in basis {
            in_basis[j] = true;
        }
        let mut action = Vec::with_capacity(self.action.len());
        for (g, a) in self.action.iter().enumerate() {
            let cols = a.select_cols(basis);
            if cols.triplets().any(|(r, _, _)| !in_basis[r]) {
                return Err(HomologyError::Module(format!("basis subset is not stable under element {g}")));
            }
            action.push(cols.select_rows(basis));
        }
        Ok(GModule { group: self.group.clone(), rank: basis.len(), action })
    }

    /// Pulls back along a surjection `phi: K -> G` (inflation).
    pub fn inflate(&self, k: Arc<FiniteGroup>, phi: &[u32]) -> Result<GModule, HomologyError> {
        if phi.len() != k.order() || !k.is_homomorphism(&self.group, phi) {
            return Err(HomologyError::Module("map is not a homomorphism".into()));
        }
        let action = phi.iter().map(|&g| self.action[g as usize].clone()).collect();
        Ok(GModule { group: k, rank: self.rank, action })
    }
}
