use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{FgAbGroup, SparseIntMatrix};
use crate::group::{FiniteGroup, GroupError};

use super::bar::{decode, encode};
use super::{
    bar_tensor_truncated, DoubleComplexZ, EquivariantComplex, GModule, HomologyError, Orientation, SpectralSequence,
    SubComplex,
};

/// `N_q = F_q(G) ⊗_H M` for a normal subgroup `H`, as a complex of modules
/// over `Q = G/H`. Basis: `(t, g_1, .., g_q) ⊗ e_j` in homogeneous
/// coordinates, where `t` runs over one representative per coset of `H`.
#[derive(Clone, Debug)]
pub struct CoinvariantComplex {
    complex: EquivariantComplex,
    quotient: Arc<FiniteGroup>,
    projection: Vec<u32>,
    /// Basis indices spanning `F_q(G') ⊗_{H'} M` when a subgroup was given.
    sub_basis: Option<Vec<Vec<usize>>>,
}

impl CoinvariantComplex {
    pub fn complex(&self) -> &EquivariantComplex {
        &self.complex
    }

    pub fn quotient(&self) -> &Arc<FiniteGroup> {
        &self.quotient
    }

    pub fn projection(&self) -> &[u32] {
        &self.projection
    }

    pub fn sub_basis(&self) -> Option<&[Vec<usize>]> {
        self.sub_basis.as_deref()
    }

    /// The complex `F_*(G) ⊗_H M`, or its quotient by
    /// `F_*(G') ⊗_{H'} M` in the relative case.
    pub fn underlying_quotient(&self) -> crate::simplicial::ZChainComplex {
        let full = self.complex.underlying();
        let Some(sub) = &self.sub_basis else { return full };
        let keep: Vec<Vec<usize>> = sub
            .iter()
            .zip(full.ranks())
            .map(|(s, &r)| {
                let mut mask = vec![true; r];
                s.iter().for_each(|&j| mask[j] = false);
                (0..r).filter(|&j| mask[j]).collect()
            })
            .collect();
        let ranks = keep.iter().map(Vec::len).collect();
        let diffs = (1..keep.len())
            .map(|k| full.boundary(k as i64).select_cols(&keep[k]).select_rows(&keep[k - 1]))
            .collect();
        crate::simplicial::ZChainComplex::new_unchecked(0, ranks, diffs).expect("shapes agree")
    }
}

struct Normalizer<'a> {
    g: &'a FiniteGroup,
    m: &'a GModule,
    projection: &'a [u32],
    /// Coset representative for each quotient element.
    reps: &'a [u32],
}

impl Normalizer<'_> {
    /// Writes `(g_0, .., g_q) ⊗ m` as `(t, h g_1, .., h g_q) ⊗ h m` with
    /// `h = t g_0^{-1} ∈ H`, returning the tuple index and the moved vector.
    fn normalize(&self, tuple: &[u32], m: &[(usize, BigInt)]) -> (usize, Vec<(usize, BigInt)>) {
        let g = self.g;
        let coset = self.projection[tuple[0] as usize];
        let h = g.mul(self.reps[coset as usize], g.inv(tuple[0]));
        let rest: Vec<u32> = tuple[1..].iter().map(|&x| g.mul(h, x)).collect();
        let index = coset as usize * g.order().pow(rest.len() as u32) + encode(&rest, g.order());
        let act = self.m.action(h);
        let mut out = Vec::new();
        for (j, x) in m {
            out.extend(act.column(*j).iter().map(|(i, y)| (*i, y * x)));
        }
        (index, out)
    }
}

/// Builds `F_q(G) ⊗_H M` for `q <= qmax`. With `sub = G'`, requires
/// `G' H = G`, picks coset representatives and quotient lifts inside `G'`,
/// and records the subcomplex `F_*(G') ⊗_{H ∩ G'} M`.
pub fn coinvariant_complex(
    m: &GModule,
    normal: &[u32],
    sub: Option<&[u32]>,
    qmax: usize,
    budget: u128,
) -> Result<CoinvariantComplex, HomologyError> {
    let g = m.group().clone();
    let mut normal = normal.to_vec();
    normal.sort_unstable();
    if !g.is_normal(&normal) {
        return Err(GroupError::NotNormal.into());
    }
    let (quotient, projection) = g.quotient(&normal)?;
    let quotient = Arc::new(quotient);
    let nq = quotient.order();
    let mut in_sub = vec![sub.is_none(); g.order()];
    if let Some(s) = sub {
        if !g.is_subgroup(s) {
            return Err(GroupError::NotSubgroup.into());
        }
        s.iter().for_each(|&x| in_sub[x as usize] = true);
    }
    let mut reps = vec![u32::MAX; nq];
    for x in g.elements().filter(|&x| in_sub[x as usize]) {
        let c = projection[x as usize] as usize;
        if reps[c] == u32::MAX {
            reps[c] = x;
        }
    }
    if reps.contains(&u32::MAX) {
        return Err(HomologyError::Invalid("the subgroup does not map onto the quotient".into()));
    }
    let (n, r) = (g.order(), m.rank());
    let needed = (nq as u128) * (n as u128).saturating_pow(qmax as u32) * r as u128;
    if needed > budget {
        return Err(HomologyError::Budget { needed, budget });
    }
    let norm = Normalizer { g: &g, m, projection: &projection, reps: &reps };
    let rank = |q: usize| nq * n.pow(q as u32) * r;
    let unit = |j: usize| vec![(j, BigInt::from(1))];

    let mut boundaries = Vec::with_capacity(qmax);
    for q in 1..=qmax {
        let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
        for c in 0..nq {
            for t in 0..n.pow(q as u32) {
                let mut tuple = vec![reps[c]];
                tuple.extend(decode(t, n, q));
                for j in 0..r {
                    let col = ((c * n.pow(q as u32)) + t) * r + j;
                    for i in 0..=q {
                        let mut face = tuple.clone();
                        face.remove(i);
                        let (idx, v) = norm.normalize(&face, &unit(j));
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        trip.extend(v.into_iter().map(|(k, x)| (idx * r + k, col, x * sign)));
                    }
                }
            }
        }
        boundaries.push(SparseIntMatrix::from_triplets(rank(q - 1), rank(q), trip)?);
    }

    let mut modules = Vec::with_capacity(qmax + 1);
    for q in 0..=qmax {
        let action = quotient
            .elements()
            .map(|a| {
                let s = reps[a as usize];
                let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
                for c in 0..nq {
                    for t in 0..n.pow(q as u32) {
                        let mut tuple = vec![g.mul(s, reps[c])];
                        tuple.extend(decode(t, n, q).iter().map(|&x| g.mul(s, x)));
                        for j in 0..r {
                            let col = ((c * n.pow(q as u32)) + t) * r + j;
                            let moved = m.act_on_basis(s, j).to_vec();
                            let (idx, v) = norm.normalize(&tuple, &moved);
                            trip.extend(v.into_iter().map(|(k, x)| (idx * r + k, col, x)));
                        }
                    }
                }
                SparseIntMatrix::from_triplets(rank(q), rank(q), trip).expect("in range")
            })
            .collect();
        modules.push(GModule::new(quotient.clone(), rank(q), action)?);
    }
    let complex = EquivariantComplex::new(modules, boundaries)?;

    let sub_basis = sub.map(|_| {
        (0..=qmax)
            .map(|q| {
                let mut keep = Vec::new();
                for c in 0..nq {
                    for t in 0..n.pow(q as u32) {
                        if decode(t, n, q).iter().all(|&x| in_sub[x as usize]) {
                            let base = ((c * n.pow(q as u32)) + t) * r;
                            keep.extend(base..base + r);
                        }
                    }
                }
                keep
            })
            .collect()
    });
    Ok(CoinvariantComplex { complex, quotient, projection, sub_basis })
}

/// The Lyndon-Hochschild-Serre spectral sequence `H_p(Q; H_q(H; M)) =>
/// H_{p+q}(G; M)` (or its relative form), realized on the double complex
/// `F_p(Q) ⊗_Q F_q(G) ⊗_H M` truncated to total degree `kmax`.
#[derive(Clone, Debug)]
pub struct Lhs {
    double: DoubleComplexZ,
    spectral: SpectralSequence,
    kmax: usize,
}

impl Lhs {
    pub fn double_complex(&self) -> &DoubleComplexZ {
        &self.double
    }

    pub fn spectral_sequence(&self) -> &SpectralSequence {
        &self.spectral
    }

    /// Entries are exact for `p + q < kmax`.
    pub fn verified_below(&self) -> usize {
        self.kmax
    }

    /// `E^2_{p,q}`.
    pub fn e2(&self, p: i64, q: i64) -> FgAbGroup {
        self.spectral.page(2).expect("second page").group(p, q)
    }

    pub fn e_infinity(&self, p: i64, q: i64) -> FgAbGroup {
        self.spectral.limit().group(p, q)
    }

    /// `H_n` of the total complex for `n < kmax`.
    pub fn abutment(&self) -> Vec<FgAbGroup> {
        let tot = self.double.total();
        (0..self.kmax as i64).map(|n| tot.complex().homology_in(n)).collect()
    }

    /// Whether the limit page matches the filtered total homology.
    pub fn reconciles(&self) -> Result<bool, HomologyError> {
        Ok(self.spectral.reconcile(&self.double)?.ok())
    }
}

fn assemble(c: &CoinvariantComplex, kmax: usize, budget: u128) -> Result<Lhs, HomologyError> {
    let all: Vec<u32> = c.quotient.elements().collect();
    let sub = c.sub_basis.as_ref().map(|b| SubComplex { elements: &all, basis: b });
    let double = bar_tensor_truncated(&c.complex, kmax, kmax, sub.as_ref(), budget)?;
    let spectral = SpectralSequence::of_double_complex(&double, Orientation::Columns, 2)?;
    Ok(Lhs { double, spectral, kmax })
}

/// LHS spectral sequence of `H ◁ G` with coefficients `m`, exact in total
/// degrees below `kmax`.
pub fn lhs_spectral_sequence(m: &GModule, normal: &[u32], kmax: usize, budget: u128) -> Result<Lhs, HomologyError> {
    let c = coinvariant_complex(m, normal, None, kmax, budget)?;
    assemble(&c, kmax, budget)
}

/// Relative LHS spectral sequence for `G' <= G` with `G' H = G`,
/// converging to `H_*(G, G'; M)`.
pub fn relative_lhs(m: &GModule, sub: &[u32], normal: &[u32], kmax: usize, budget: u128) -> Result<Lhs, HomologyError> {
    let c = coinvariant_complex(m, normal, Some(sub), kmax, budget)?;
    assemble(&c, kmax, budget)
}
