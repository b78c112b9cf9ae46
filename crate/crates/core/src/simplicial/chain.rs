use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{snf, FgAbGroup, SparseIntMatrix};

use super::SimplicialError;

/// Homology groups `H_k` for `k` in a contiguous degree range; degrees
/// outside the range are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroups {
    pub start: i64,
    pub groups: Vec<FgAbGroup>,
}

impl HomologyGroups {
    pub fn degree(&self, k: i64) -> FgAbGroup {
        usize::try_from(k - self.start)
            .ok()
            .and_then(|i| self.groups.get(i))
            .cloned()
            .unwrap_or_else(FgAbGroup::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FgAbGroup)> {
        self.groups.iter().enumerate().map(|(i, g)| (self.start + i as i64, g))
    }

    /// Nonzero degrees.
    pub fn support(&self) -> Vec<i64> {
        self.iter().filter(|(_, g)| !g.is_zero()).map(|(k, _)| k).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_zero)
    }

    /// True iff every degree other than `k` vanishes and `H_k` is free.
    pub fn is_free_concentrated_in(&self, k: i64) -> bool {
        self.iter().all(|(d, g)| if d == k { g.is_free() } else { g.is_zero() })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.iter().map(|(k, g)| if k.rem_euclid(2) == 0 { g.free_rank() as i64 } else { -(g.free_rank() as i64) }).sum()
    }
}

impl fmt::Display for HomologyGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, g)| format!("H_{k} = {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A bounded chain complex of finitely generated free abelian groups
/// `C_start <- ... <- C_top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZChainComplex {
    start: i64,
    ranks: Vec<usize>,
    /// `diffs[i]` maps `C_{start+i+1}` to `C_{start+i}`.
    diffs: Vec<SparseIntMatrix>,
}

impl ZChainComplex {
    /// Builds the complex and checks shapes and `d * d = 0`.
    pub fn new(start: i64, ranks: Vec<usize>, diffs: Vec<SparseIntMatrix>) -> Result<Self, SimplicialError> {
        let c = Self::new_unchecked(start, ranks, diffs)?;
        for i in 1..c.diffs.len() {
            if !c.diffs[i - 1].mul(&c.diffs[i])?.is_zero() {
                return Err(SimplicialError::NotAComplex(start + i as i64 + 1));
            }
        }
        Ok(c)
    }

    /// Checks shapes only.
    pub fn new_unchecked(start: i64, ranks: Vec<usize>, diffs: Vec<SparseIntMatrix>) -> Result<Self, SimplicialError> {
        use crate::algebra::AlgebraError::DimensionMismatch;
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(DimensionMismatch(format!("{} ranks need {} differentials", ranks.len(), ranks.len().saturating_sub(1))).into());
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[i] || d.cols() != ranks[i + 1] {
                return Err(DimensionMismatch(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    start + i as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[i],
                    ranks[i + 1]
                ))
                .into());
            }
        }
        Ok(ZChainComplex { start, ranks, diffs })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Highest degree carried (may be `start - 1` for an empty complex).
    pub fn top(&self) -> i64 {
        self.start + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, k: i64) -> usize {
        usize::try_from(k - self.start).ok().and_then(|i| self.ranks.get(i)).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `d_k : C_k -> C_{k-1}`, a zero matrix outside the stored range.
    pub fn boundary(&self, k: i64) -> SparseIntMatrix {
        match usize::try_from(k - self.start - 1).ok().and_then(|i| self.diffs.get(i)) {
            Some(d) => d.clone(),
            None => SparseIntMatrix::zeros(self.rank(k - 1), self.rank(k)),
        }
    }

    pub(crate) fn boundary_ref(&self, k: i64) -> Option<&SparseIntMatrix> {
        usize::try_from(k - self.start - 1).ok().and_then(|i| self.diffs.get(i))
    }

    pub fn homology(&self) -> HomologyGroups {
        let n = self.ranks.len();
        let forms: Vec<_> = self.diffs.iter().map(snf).collect();
        let groups = (0..n)
            .map(|i| {
                let out_rank = if i == 0 { 0 } else { forms[i - 1].rank() };
                let (in_rank, torsion) = match forms.get(i) {
                    Some(f) => (f.rank(), f.factors().to_vec()),
                    None => (0, Vec::new()),
                };
                FgAbGroup::new(self.ranks[i] - out_rank - in_rank, torsion)
            })
            .collect();
        HomologyGroups { start: self.start, groups }
    }

    /// `H_k` alone.
    pub fn homology_in(&self, k: i64) -> FgAbGroup {
        if self.rank(k) == 0 {
            return FgAbGroup::zero();
        }
        let out_rank = self.boundary_ref(k).map_or(0, |d| snf(d).rank());
        let (in_rank, torsion) = match self.boundary_ref(k + 1) {
            Some(d) => {
                let f = snf(d);
                (f.rank(), f.factors().to_vec())
            }
            None => (0, Vec::new()),
        };
        FgAbGroup::new(self.rank(k) - out_rank - in_rank, torsion)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.ranks.len())
            .map(|i| {
                let r = self.ranks[i] as i64;
                if (self.start + i as i64).rem_euclid(2) == 0 { r } else { -r }
            })
            .sum()
    }

    /// Shifts degrees by `by`; differentials are unchanged.
    pub fn shifted(&self, by: i64) -> ZChainComplex {
        ZChainComplex { start: self.start + by, ..self.clone() }
    }
}
