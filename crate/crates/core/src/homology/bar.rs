use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{FgAbGroup, SparseIntMatrix};
use crate::group::FiniteGroup;
use crate::simplicial::ZChainComplex;

use super::{ChainMap, GModule, HomologyError};

/// Default bound on the number of columns of any single boundary matrix.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// The standard resolution `F_k = Z[G^{k+1}]` of `Z` over `ZG`, truncated at
/// degree `kmax`.
#[derive(Clone, Debug)]
pub struct BarResolution {
    group: Arc<FiniteGroup>,
    kmax: usize,
}

/// A subgroup together with a basis subset of a module spanning a
/// submodule for that subgroup; used for relative complexes.
#[derive(Clone, Copy, Debug)]
pub struct SubPair<'a> {
    /// Sorted element indices of the subgroup.
    pub elements: &'a [u32],
    /// Sorted indices of module basis vectors spanning the submodule.
    pub basis: &'a [usize],
}

fn pow(n: usize, k: usize) -> u128 {
    (n as u128).saturating_pow(k as u32)
}

fn check_budget(needed: u128, budget: u128) -> Result<(), HomologyError> {
    if needed > budget {
        return Err(HomologyError::Budget { needed, budget });
    }
    Ok(())
}

impl BarResolution {
    pub fn new(group: Arc<FiniteGroup>, kmax: usize, budget: u128) -> Result<Self, HomologyError> {
        check_budget(pow(group.order(), kmax + 1), budget)?;
        Ok(BarResolution { group, kmax })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// `Z`-rank of `F_k`.
    pub fn rank(&self, k: usize) -> usize {
        self.group.order().pow(k as u32 + 1)
    }

    /// `Z <- F_0 <- ... <- F_kmax` with the augmentation in degree 0 and
    /// `d(g_0, ..., g_k) = sum (-1)^i (g_0, .., ^g_i, .., g_k)`.
    pub fn augmented_complex(&self) -> ZChainComplex {
        let n = self.group.order();
        let mut ranks = vec![1];
        let mut diffs = Vec::new();
        diffs.push(SparseIntMatrix::from_triplets(1, n, (0..n).map(|c| (0, c, 1i64))).expect("in range"));
        ranks.push(n);
        for k in 1..=self.kmax {
            let cols = n.pow(k as u32 + 1);
            let rows = n.pow(k as u32);
            let mut trip = Vec::with_capacity(cols * (k + 1));
            for c in 0..cols {
                let digits = decode(c, n, k + 1);
                for i in 0..=k {
                    let face: Vec<u32> = digits.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| *g).collect();
                    trip.push((encode(&face, n), c, if i % 2 == 0 { 1i64 } else { -1 }));
                }
            }
            diffs.push(SparseIntMatrix::from_triplets(rows, cols, trip).expect("in range"));
            ranks.push(cols);
        }
        ZChainComplex::new_unchecked(-1, ranks, diffs).expect("shapes agree")
    }

    /// Exactness of the augmented complex below the top degree.
    pub fn is_exact(&self) -> bool {
        let c = self.augmented_complex();
        (-1..self.kmax as i64).all(|k| c.homology_in(k).is_zero())
    }

    /// `F_* ⊗_G M` in degrees `0..=kmax`.
    pub fn tensor(&self, m: &GModule, budget: u128) -> Result<ZChainComplex, HomologyError> {
        bar_complex(m, self.kmax, None, budget)
    }
}

/// Mixed-radix digits of `x`, most significant first.
pub(crate) fn decode(mut x: usize, n: usize, len: usize) -> Vec<u32> {
    let mut d = vec![0u32; len];
    for i in (0..len).rev() {
        d[i] = (x % n) as u32;
        x /= n;
    }
    d
}

pub(crate) fn encode(d: &[u32], n: usize) -> usize {
    d.iter().fold(0usize, |acc, &g| acc * n + g as usize)
}

/// Keeps basis element `(tuple, j)` unless every tuple entry lies in the
/// subgroup and `j` lies in the sub-basis. Returns the full-to-reduced map
/// and the reduced count.
pub(crate) fn reduced_index(n: usize, k: usize, r: usize, sub: Option<&SubPair<'_>>) -> (Vec<u32>, usize) {
    let total = n.pow(k as u32) * r;
    let Some(sub) = sub else { return ((0..total as u32).collect(), total) };
    let mut in_sub = vec![false; n];
    for &g in sub.elements {
        in_sub[g as usize] = true;
    }
    let mut in_basis = vec![false; r];
    for &j in sub.basis {
        in_basis[j] = true;
    }
    let mut map = vec![u32::MAX; total];
    let mut next = 0u32;
    for t in 0..n.pow(k as u32) {
        let all_sub = decode(t, n, k).iter().all(|&g| in_sub[g as usize]);
        for j in 0..r {
            if !(all_sub && in_basis[j]) {
                map[t * r + j] = next;
                next += 1;
            }
        }
    }
    (map, next as usize)
}

/// Number of basis elements of `F_k ⊗_G M`, relative to `sub` if given.
pub fn bar_rank(order: usize, rank: usize, k: usize, sub: Option<&SubPair<'_>>) -> u128 {
    let full = pow(order, k) * rank as u128;
    match sub {
        None => full,
        Some(s) => full - pow(s.elements.len(), k) * s.basis.len() as u128,
    }
}

/// `F_* ⊗_G M` in degrees `0..=kmax` with the inhomogeneous basis
/// `[g_1|...|g_k] ⊗ e_j`; relative to `F_*(G') ⊗_{G'} M'` when `sub` is given.
/// The boundary is
/// `[g_2|..|g_k] ⊗ g_1^{-1} m + sum_{0<i<k} (-1)^i [..|g_i g_{i+1}|..] ⊗ m + (-1)^k [g_1|..|g_{k-1}] ⊗ m`.
pub fn bar_complex(m: &GModule, kmax: usize, sub: Option<&SubPair<'_>>, budget: u128) -> Result<ZChainComplex, HomologyError> {
    let g = m.group();
    let n = g.order();
    let r = m.rank();
    check_budget((0..=kmax).map(|k| bar_rank(n, r, k, sub)).max().unwrap_or(0), budget)?;
    if let Some(s) = sub {
        if !g.is_subgroup(s.elements) {
            return Err(crate::group::GroupError::NotSubgroup.into());
        }
        check_submodule(m, s)?;
    }
    let maps: Vec<(Vec<u32>, usize)> = (0..=kmax).map(|k| reduced_index(n, k, r, sub)).collect();
    let ranks: Vec<usize> = maps.iter().map(|(_, c)| *c).collect();
    let diffs = (1..=kmax).map(|k| bar_boundary(m, k, &maps[k], &maps[k - 1])).collect();
    Ok(ZChainComplex::new_unchecked(0, ranks, diffs)?)
}

/// The inclusion `F_*(G') ⊗_{G'} M' -> F_*(G) ⊗_G M`; its cokernel is the
/// relative complex returned by [`bar_complex`] with `sub`.
pub fn bar_inclusion(m: &GModule, sub: &SubPair<'_>, kmax: usize, budget: u128) -> Result<ChainMap, HomologyError> {
    let g = m.group();
    let (h, embedding) = g.subgroup(sub.elements)?;
    let h = Arc::new(h);
    let small = m.submodule(sub.basis)?.restrict(h.clone(), &embedding)?;
    let source = bar_complex(&small, kmax, None, budget)?;
    let target = bar_complex(m, kmax, None, budget)?;
    let (n, nh, r, rh) = (g.order(), h.order(), m.rank(), sub.basis.len());
    let maps = (0..=kmax)
        .map(|k| {
            let trip = (0..nh.pow(k as u32)).flat_map(|t| {
                let image: Vec<u32> = decode(t, nh, k).iter().map(|&x| embedding[x as usize]).collect();
                let row = encode(&image, n);
                (0..rh).map(move |j| (row * r + sub.basis[j], t * rh + j, 1i64))
            });
            SparseIntMatrix::from_triplets(target.rank(k as i64), source.rank(k as i64), trip).expect("in range")
        })
        .collect();
    ChainMap::new(source, target, maps)
}

pub(crate) fn check_submodule(m: &GModule, s: &SubPair<'_>) -> Result<(), HomologyError> {
    for &g in s.elements {
        for &j in s.basis {
            if m.act_on_basis(g, j).iter().any(|(i, _)| s.basis.binary_search(i).is_err()) {
                return Err(HomologyError::Module(format!("sub-basis is not stable under element {g}")));
            }
        }
    }
    Ok(())
}

/// The bar boundary out of degree `k >= 1`; `src` and `dst` map full basis
/// indices to kept indices (or `u32::MAX`) in degrees `k` and `k - 1`.
pub(crate) fn bar_boundary(m: &GModule, k: usize, src: &(Vec<u32>, usize), dst: &(Vec<u32>, usize)) -> SparseIntMatrix {
    bar_boundary_filtered(m, k, src, dst, None)
}

/// [`bar_boundary`] keeping only columns whose first bar entry is flagged in
/// `first`; columns are renumbered consecutively in basis order.
fn bar_boundary_filtered(
    m: &GModule,
    k: usize,
    src: &(Vec<u32>, usize),
    dst: &(Vec<u32>, usize),
    first: Option<&[bool]>,
) -> SparseIntMatrix {
    let g = m.group();
    let (n, r) = (g.order(), m.rank());
    let ((src, cols), (dst, rows)) = (src, dst);
    let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
    let mut next = 0usize;
    for t in 0..n.pow(k as u32) {
        let digits = decode(t, n, k);
        if first.is_some_and(|f| !f[digits[0] as usize]) {
            continue;
        }
        let first_inv = g.inv(digits[0]);
        let rest = encode(&digits[1..], n);
        let mut faces: Vec<(usize, i64)> = Vec::with_capacity(k);
        for i in 1..k {
            let mut d: Vec<u32> = digits.clone();
            d[i - 1] = g.mul(digits[i - 1], digits[i]);
            d.remove(i);
            faces.push((encode(&d, n), if i % 2 == 0 { 1 } else { -1 }));
        }
        faces.push((encode(&digits[..k - 1], n), if k.is_multiple_of(2) { 1 } else { -1 }));
        for j in 0..r {
            if src[t * r + j] == u32::MAX {
                continue;
            }
            let c = if first.is_some() { next } else { src[t * r + j] as usize };
            next += 1;
            for (i, v) in m.act_on_basis(first_inv, j) {
                let row = dst[rest * r + i];
                if row != u32::MAX {
                    trip.push((row as usize, c, v.clone()));
                }
            }
            for &(f, s) in &faces {
                let row = dst[f * r + j];
                if row != u32::MAX {
                    trip.push((row as usize, c, BigInt::from(s)));
                }
            }
        }
    }
    let cols = if first.is_some() { next } else { *cols };
    SparseIntMatrix::from_triplets(*rows, cols, trip).expect("in range")
}

/// Largest matrix width needed by [`bar_homology`] in degrees below `kmax`.
fn homology_columns(m: &GModule, kmax: usize, sub: Option<&SubPair<'_>>) -> u128 {
    let (n, r) = (m.group().order(), m.rank());
    let gens = m.group().generating_set().len() as u128 + 1;
    (0..kmax).map(|k| bar_rank(n, r, k, sub).max(gens * bar_rank(n, r, k, None))).max().unwrap_or(0)
}

/// `H_k(G; M)`, or `H_k(G, G'; M, M')` when `sub` is given, without
/// materializing the whole bar complex. The image of `d_{k+1}` is spanned
/// by the columns `[s|g_2|..] ⊗ e_j` with `s` in a generating set: the
/// identity `d_{k+1} d_{k+2} [a|b|..] = 0` writes the column of `[ab|..]`
/// through columns whose first entries are `a` or `b`.
pub fn bar_homology(m: &GModule, k: usize, sub: Option<&SubPair<'_>>, budget: u128) -> Result<FgAbGroup, HomologyError> {
    let g = m.group();
    let (n, r) = (g.order(), m.rank());
    // The identity joins the generators so that the trivial group is covered.
    let mut gens = g.generating_set();
    gens.push(g.identity());
    check_budget(homology_columns(m, k + 1, sub), budget)?;
    if let Some(s) = sub {
        if !g.is_subgroup(s.elements) {
            return Err(crate::group::GroupError::NotSubgroup.into());
        }
        check_submodule(m, s)?;
    }
    let maps: Vec<(Vec<u32>, usize)> = (k.saturating_sub(1)..=k + 1).map(|d| reduced_index(n, d, r, sub)).collect();
    let (below, here, above) = if k == 0 { (None, &maps[0], &maps[1]) } else { (Some(&maps[0]), &maps[1], &maps[2]) };
    let mut first = vec![false; n];
    gens.iter().for_each(|&s| first[s as usize] = true);
    let d_in = bar_boundary_filtered(m, k + 1, above, here, Some(&first));
    let d_out = match below {
        Some(b) => bar_boundary(m, k, here, b),
        None => SparseIntMatrix::zeros(0, here.1),
    };
    Ok(crate::algebra::homology_at(&d_in, &d_out)?)
}

/// `H_k(G; M)` for `0 <= k < kmax`.
pub fn group_homology(m: &GModule, kmax: usize, budget: u128) -> Result<Vec<FgAbGroup>, HomologyError> {
    check_budget(homology_columns(m, kmax, None), budget)?;
    (0..kmax).map(|k| bar_homology(m, k, None, budget)).collect()
}

/// `H_k(G, G'; M)` for `0 <= k < kmax`, from the quotient of the bar
/// complexes.
pub fn relative_group_homology(m: &GModule, subgroup: &[u32], kmax: usize, budget: u128) -> Result<Vec<FgAbGroup>, HomologyError> {
    let mut elements = subgroup.to_vec();
    elements.sort_unstable();
    let basis: Vec<usize> = (0..m.rank()).collect();
    let sub = SubPair { elements: &elements, basis: &basis };
    check_budget(homology_columns(m, kmax, Some(&sub)), budget)?;
    (0..kmax).map(|k| bar_homology(m, k, Some(&sub), budget)).collect()
}
