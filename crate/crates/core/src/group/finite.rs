use std::collections::HashMap;
use std::hash::Hash;

use super::GroupError;

/// A finite group given by its multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
}

/// Largest order for which a multiplication table is stored.
pub const MAX_TABLE_ORDER: usize = 4096;

impl FiniteGroup {
    /// Builds the group from a row-major multiplication table. Checks the
    /// Latin-square property, an identity and inverses; associativity is
    /// the caller's responsibility (it holds for tables derived from
    /// concrete elements).
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self, GroupError> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::Invalid("table size does not match the order".into()));
        }
        if order > MAX_TABLE_ORDER {
            return Err(GroupError::CapExceeded(format!("group of order {order} exceeds the table cap {MAX_TABLE_ORDER}")));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x))
            .ok_or_else(|| GroupError::Invalid("no identity".into()))? as u32;
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let mut seen = vec![false; order];
            for &x in row {
                if x as usize >= order || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(GroupError::Invalid(format!("row {a} is not a permutation")));
                }
            }
            inverse[a] = row.iter().position(|&x| x == identity).unwrap() as u32;
        }
        Ok(FiniteGroup { order, table, inverse, identity })
    }

    /// Table of a group given by explicit elements closed under `mul`.
    pub fn from_elements<T: Eq + Hash + Clone>(elements: &[T], mul: impl Fn(&T, &T) -> T) -> Result<Self, GroupError> {
        let n = elements.len();
        if n > MAX_TABLE_ORDER {
            return Err(GroupError::CapExceeded(format!("group of order {n} exceeds the table cap {MAX_TABLE_ORDER}")));
        }
        let index: HashMap<&T, u32> = elements.iter().enumerate().map(|(i, x)| (x, i as u32)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in elements {
            for b in elements {
                let c = mul(a, b);
                table.push(*index.get(&c).ok_or_else(|| GroupError::Invalid("elements are not closed".into()))?);
            }
        }
        Self::from_table(n, table)
    }

    /// Closure of permutations of `0..degree` under composition
    /// `(s t)(i) = s(t(i))`, identity first.
    pub fn from_permutations(degree: usize, gens: &[Vec<u32>]) -> Result<Self, GroupError> {
        let id: Vec<u32> = (0..degree as u32).collect();
        let compose = |s: &Vec<u32>, t: &Vec<u32>| t.iter().map(|&i| s[i as usize]).collect::<Vec<u32>>();
        let elements = super::closure(id, gens, compose, MAX_TABLE_ORDER)?;
        Self::from_elements(&elements, compose)
    }

    pub fn trivial() -> Self {
        FiniteGroup { order: 1, table: vec![0], inverse: vec![0], identity: 0 }
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Invalid("cyclic group of order 0".into()));
        }
        let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        Self::from_table(n, table)
    }

    /// Symmetric group on `n` letters, generated by a transposition and an
    /// `n`-cycle.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n <= 1 {
            return Ok(Self::trivial());
        }
        let swap: Vec<u32> = (0..n as u32).map(|i| match i { 0 => 1, 1 => 0, _ => i }).collect();
        let cycle: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::from_permutations(n, &[swap, cycle])
    }

    /// `a × b` with element `(x, y)` at index `x * |b| + y`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let (m, n) = (a.order, b.order);
        let mut table = Vec::with_capacity(m * n * m * n);
        for x in 0..m * n {
            for y in 0..m * n {
                let p = a.mul((x / n) as u32, (y / n) as u32);
                let q = b.mul((x % n) as u32, (y % n) as u32);
                table.push(p * n as u32 + q);
            }
        }
        Self::from_table(m * n, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Order of element `a`.
    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// A small generating set, chosen greedily from elements of largest
    /// order.
    pub fn generating_set(&self) -> Vec<u32> {
        let mut candidates: Vec<u32> = self.elements().collect();
        candidates.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in candidates {
            if span.len() == self.order {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generated_by(&gens);
            }
        }
        gens
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn generated_by(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut out = vec![self.identity];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !std::mem::replace(&mut seen[y as usize], true) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, set: &[u32]) -> bool {
        let mut member = vec![false; self.order];
        for &x in set {
            if x as usize >= self.order {
                return false;
            }
            member[x as usize] = true;
        }
        member[self.identity as usize] && set.iter().all(|&a| set.iter().all(|&b| member[self.mul(a, self.inv(b)) as usize]))
    }

    pub fn is_normal(&self, set: &[u32]) -> bool {
        let mut member = vec![false; self.order];
        for &x in set {
            member[x as usize] = true;
        }
        self.is_subgroup(set)
            && self.elements().all(|g| set.iter().all(|&h| member[self.mul(self.mul(g, h), self.inv(g)) as usize]))
    }

    /// Left cosets `gH`: representatives (the least element of each coset,
    /// in order of first appearance) and the coset index of every element.
    pub fn left_cosets(&self, sub: &[u32]) -> Result<(Vec<u32>, Vec<u32>), GroupError> {
        if !self.is_subgroup(sub) {
            return Err(GroupError::NotSubgroup);
        }
        let mut coset_of = vec![u32::MAX; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if coset_of[g as usize] != u32::MAX {
                continue;
            }
            for &h in sub {
                coset_of[self.mul(g, h) as usize] = reps.len() as u32;
            }
            reps.push(g);
        }
        Ok((reps, coset_of))
    }

    /// The subgroup on `set` as a group in its own right, with the
    /// embedding of its elements (index `i` maps to `set[i]`).
    pub fn subgroup(&self, set: &[u32]) -> Result<(FiniteGroup, Vec<u32>), GroupError> {
        if !self.is_subgroup(set) {
            return Err(GroupError::NotSubgroup);
        }
        let mut pos = vec![u32::MAX; self.order];
        for (i, &x) in set.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        let table = set.iter().flat_map(|&a| set.iter().map(move |&b| (a, b))).map(|(a, b)| pos[self.mul(a, b) as usize]).collect();
        Ok((FiniteGroup::from_table(set.len(), table)?, set.to_vec()))
    }

    /// `G / N` with the projection of each element.
    pub fn quotient(&self, normal: &[u32]) -> Result<(FiniteGroup, Vec<u32>), GroupError> {
        if !self.is_normal(normal) {
            return Err(GroupError::NotNormal);
        }
        let (reps, coset_of) = self.left_cosets(normal)?;
        let k = reps.len();
        let table = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| coset_of[self.mul(reps[a], reps[b]) as usize])
            .collect();
        Ok((FiniteGroup::from_table(k, table)?, coset_of))
    }

    /// Whether `phi` (a map on element indices) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroup, phi: &[u32]) -> bool {
        phi.len() == self.order
            && self.elements().all(|a| self.elements().all(|b| phi[self.mul(a, b) as usize] == target.mul(phi[a as usize], phi[b as usize])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let c6 = FiniteGroup::cyclic(6).unwrap();
        assert!(c6.is_abelian());
        let c3 = c6.generated_by(&[2]);
        assert_eq!(c3.len(), 3);
        let (q, proj) = c6.quotient(&c3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(c6.is_homomorphism(&q, &proj));
        let p = FiniteGroup::direct_product(&s3, &FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(p.order(), 12);
    }

    #[test]
    fn cosets_partition() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = s3.generated_by(&[1]);
        let (reps, coset_of) = s3.left_cosets(&t).unwrap();
        assert_eq!(reps.len() * t.len(), 6);
        assert!(coset_of.iter().all(|&c| (c as usize) < reps.len()));
        assert!(matches!(s3.left_cosets(&[1]), Err(GroupError::NotSubgroup)));
    }
}
