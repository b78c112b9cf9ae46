use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_m` in
/// invariant-factor form: every `d_i ≥ 2` and `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    /// Builds the group `Z^free ⊕ ⊕ Z/o` from arbitrary cyclic orders `o`.
    /// Orders of absolute value one are dropped, zero orders count as free
    /// summands, and the rest is brought into invariant-factor form.
    pub fn new(free_rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        let mut free_rank = free_rank;
        let mut diag = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                free_rank += 1;
            } else if !o.is_one() {
                diag.push(o);
            }
        }
        FgAbGroup { free_rank, torsion: invariant_factors_of_diagonal(diag) }
    }

    pub fn zero() -> Self {
        FgAbGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(0, [BigInt::from(order)])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::new(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(other.torsion.iter()).cloned(),
        )
    }

    /// `self ⊗_Z Z^r`.
    pub fn tensor_free(&self, r: usize) -> FgAbGroup {
        let torsion = (0..r).flat_map(|_| self.torsion.iter().cloned());
        FgAbGroup::new(self.free_rank * r, torsion)
    }

    /// Parses the display format `0`, `Z`, `Z^3 ⊕ Z/2 ⊕ Z/4` (ASCII `+`
    /// is accepted in place of `⊕`).
    pub fn parse(s: &str) -> Option<FgAbGroup> {
        let s = s.trim();
        if s == "0" {
            return Some(FgAbGroup::zero());
        }
        let mut free = 0usize;
        let mut orders = Vec::new();
        for part in s.split(['⊕', '+']) {
            let part = part.trim();
            if part == "Z" {
                free += 1;
            } else if let Some(exp) = part.strip_prefix("Z^") {
                free += exp.parse::<usize>().ok()?;
            } else {
                let d = part.strip_prefix("Z/")?;
                orders.push(d.parse::<BigInt>().ok()?);
            }
        }
        Some(FgAbGroup::new(free, orders))
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Smith form of a diagonal matrix with positive entries: repeatedly
/// replace pairs by (gcd, lcm) until the divisibility chain holds.
pub(crate) fn invariant_factors_of_diagonal(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    diag.retain(|d| !d.is_one());
    let n = diag.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if !(&diag[j] % &diag[i]).is_zero() {
                let g = diag[i].gcd(&diag[j]);
                let l = diag[i].lcm(&diag[j]);
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag.retain(|d| !d.is_one());
    diag.sort();
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_to_invariant_factors() {
        let g = FgAbGroup::new(1, [2, 3, 1, 4].map(BigInt::from));
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), &[BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g.to_string(), "Z ⊕ Z/2 ⊕ Z/12");
        assert_eq!(FgAbGroup::parse(&g.to_string()), Some(g));
    }

    #[test]
    fn zero_orders_are_free() {
        let g = FgAbGroup::new(0, [BigInt::from(0), BigInt::from(-5)]);
        assert_eq!(g.to_string(), "Z ⊕ Z/5");
        assert_eq!(FgAbGroup::zero().to_string(), "0");
    }

    #[test]
    fn tensor_with_free_module() {
        let g = FgAbGroup::new(1, [BigInt::from(2)]).tensor_free(3);
        assert_eq!(g.to_string(), "Z^3 ⊕ Z/2 ⊕ Z/2 ⊕ Z/2");
        assert!(FgAbGroup::cyclic(3).tensor_free(0).is_zero());
    }
}
