use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{FgAbGroup, SparseIntMatrix};
use crate::group::{FiniteGroup, StabilityPair};
use crate::simplicial::ZChainComplex;

use super::bar::{decode, encode};
use super::{bar_homology, bar_tensor_truncated, ChainMap, EquivariantComplex, GModule, HomologyError, OppositionChains, SubComplex, SubPair};

/// One spot `E^1_{p,q} = H_q(G, G'; C_p, C'_p)` of the stability page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E1Spot {
    pub p: usize,
    pub q: usize,
    /// `None` when the budget does not cover the spot.
    pub value: Option<FgAbGroup>,
    /// The independent relative homology of the Levi pair the spot must
    /// equal; `None` for the top column `p = n + 2` or when skipped.
    pub expected: Option<FgAbGroup>,
}

impl E1Spot {
    pub fn skipped(&self) -> bool {
        self.value.is_none()
    }

    /// Computed, and equal to the expected group when there is one.
    pub fn passes(&self) -> bool {
        match (&self.value, &self.expected) {
            (Some(v), Some(e)) => v == e,
            (Some(_), None) => true,
            (None, _) => false,
        }
    }
}

/// `H_n` of a total complex that must vanish, or `None` when skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotalDegree {
    pub degree: usize,
    pub value: Option<FgAbGroup>,
}

/// The `E^1` page of the spectral sequence of `F_*(G) ⊗_G C_*` relative to
/// `F_*(G') ⊗_{G'} C'_*` for `p + q <= qmax`, with the checks it must pass.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityPage {
    pub qmax: usize,
    pub spots: Vec<E1Spot>,
    /// Homology of the quotient total complex in degrees `< qmax`.
    pub quotient_total: Vec<TotalDegree>,
    /// Homology of the cone of the induced map of total complexes in
    /// degrees `< qmax`.
    pub cone_total: Vec<TotalDegree>,
}

impl StabilityPage {
    pub fn spot(&self, p: usize, q: usize) -> Option<&E1Spot> {
        self.spots.iter().find(|s| s.p == p && s.q == q)
    }

    /// Every computed spot in row `q = 0` is zero.
    pub fn row_zero_vanishes(&self) -> bool {
        self.spots.iter().filter(|s| s.q == 0).all(|s| s.value.as_ref().is_some_and(FgAbGroup::is_zero))
    }

    /// Every computed total degree vanishes.
    pub fn totals_vanish(&self) -> bool {
        self.quotient_total.iter().chain(&self.cone_total).all(|t| t.value.as_ref().is_none_or(FgAbGroup::is_zero))
    }

    /// No spot or degree was skipped.
    pub fn complete(&self) -> bool {
        self.spots.iter().all(|s| !s.skipped()) && self.quotient_total.iter().chain(&self.cone_total).all(|t| t.value.is_some())
    }

    /// Spots with total degree at most `d` are all computed and agree,
    /// and totals in degrees below `d` vanish.
    pub fn passes_through(&self, d: usize) -> bool {
        self.spots.iter().filter(|s| s.p + s.q <= d).all(E1Spot::passes)
            && self.spots.iter().filter(|s| s.q == 0 && s.p <= d).all(|s| s.value.as_ref().is_some_and(FgAbGroup::is_zero))
            && self
                .quotient_total
                .iter()
                .chain(&self.cone_total)
                .filter(|t| t.degree < d)
                .all(|t| t.value.as_ref().is_some_and(FgAbGroup::is_zero))
    }
}

fn skip_on_budget<T>(r: Result<T, HomologyError>) -> Result<Option<T>, HomologyError> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(HomologyError::Budget { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Computes `E^1_{p,q}` for `p + q <= qmax` and compares with
/// `H_q(G, G'; Z)` at `p = 0`, `H_q(L_p, L'_p; M_p)` for `1 <= p <= n` and
/// `H_q(L_{n+1}, G'; M_{n+1})` at `p = n + 1`. Spots and degrees over the
/// budget are reported as skipped.
pub fn stability_e1_page(pair: &StabilityPair, chains: &OppositionChains, qmax: usize, budget: u128) -> Result<StabilityPage, HomologyError> {
    let sub_elements = chains.sub_elements().ok_or_else(|| HomologyError::Invalid("C'_* is required".into()))?;
    let group = chains.group();
    let m = chains.len();
    let n = m - 1;
    let mut spots = Vec::new();
    for p in 0..=(m + 1).min(qmax) {
        for q in 0..=(qmax - p) {
            let sub = SubPair { elements: sub_elements, basis: chains.sub_basis(p).expect("present") };
            let value = skip_on_budget(bar_homology(chains.module(p), q, Some(&sub), budget))?;
            let expected = match (&value, p) {
                (None, _) => None,
                (_, 0) => skip_on_budget(bar_homology(&GModule::trivial(group.clone(), 1), q, Some(&sub), budget))?,
                (_, p) if p <= n + 1 => {
                    let levi = chains.link_module(p).levi();
                    let partner = if p <= n { pair.levi_prime(p) } else { sub_elements };
                    skip_on_budget(levi_relative_homology(group, chains, p, levi, partner, q, budget))?
                }
                _ => None,
            };
            spots.push(E1Spot { p, q, value, expected });
        }
    }
    let quotient_total = vanishing_degrees(qmax, |t| quotient_total(chains, t, budget))?;
    let sub = sub_equivariant(chains)?;
    let cone_total = vanishing_degrees(qmax, |t| cone_total(chains, &sub, t, budget))?;
    Ok(StabilityPage { qmax, spots, quotient_total, cone_total })
}

/// `H_q(L, L'; M_p)` with `L` and `L'` given by sorted indices in `G`.
fn levi_relative_homology(
    group: &FiniteGroup,
    chains: &OppositionChains,
    p: usize,
    levi: &[u32],
    partner: &[u32],
    q: usize,
    budget: u128,
) -> Result<FgAbGroup, HomologyError> {
    let (local, _) = group.subgroup(levi)?;
    let module = chains.link_module(p).gmodule(Arc::new(local));
    let mut inner: Vec<u32> = partner
        .iter()
        .map(|g| levi.binary_search(g).map(|i| i as u32).map_err(|_| HomologyError::Invalid("partner is not inside the Levi subgroup".into())))
        .collect::<Result<_, _>>()?;
    inner.sort_unstable();
    let basis: Vec<usize> = (0..module.rank()).collect();
    bar_homology(&module, q, Some(&SubPair { elements: &inner, basis: &basis }), budget)
}

/// `H_n` for `n < qmax` of the complex `build(t)`, truncated above total
/// degree `t`; `t` is lowered from `qmax` until the budget allows it, and
/// degrees not reached are skipped.
fn vanishing_degrees(
    qmax: usize,
    build: impl Fn(usize) -> Result<ZChainComplex, HomologyError>,
) -> Result<Vec<TotalDegree>, HomologyError> {
    for t in (1..=qmax).rev() {
        if let Some(complex) = skip_on_budget(build(t))? {
            return Ok((0..qmax)
                .map(|n| TotalDegree { degree: n, value: (n < t).then(|| complex.homology_in(n as i64)) })
                .collect());
        }
    }
    Ok((0..qmax).map(|n| TotalDegree { degree: n, value: None }).collect())
}

fn quotient_total(chains: &OppositionChains, max_total: usize, budget: u128) -> Result<ZChainComplex, HomologyError> {
    let sub = SubComplex { elements: chains.sub_elements().expect("present"), basis: chains.sub_bases().expect("present") };
    let d = bar_tensor_truncated(chains.equivariant(), max_total, max_total, Some(&sub), budget)?;
    Ok(d.total().complex().clone())
}

/// `C'_*` as a complex of `G'`-modules.
fn sub_equivariant(chains: &OppositionChains) -> Result<EquivariantComplex, HomologyError> {
    let group = chains.group();
    let elements = chains.sub_elements().expect("present");
    let bases = chains.sub_bases().expect("present");
    let (sub_group, embedding) = group.subgroup(elements)?;
    let sub_group = Arc::new(sub_group);
    let modules = (0..bases.len())
        .map(|p| chains.module(p).restrict(sub_group.clone(), &embedding)?.submodule(&bases[p]))
        .collect::<Result<Vec<_>, _>>()?;
    let boundaries = (1..bases.len()).map(|p| chains.boundary(p).select_cols(&bases[p]).select_rows(&bases[p - 1])).collect();
    let complex = EquivariantComplex::unchecked(modules, boundaries)?;
    complex.check_equivariance(&sub_group.generating_set())?;
    Ok(complex)
}

/// The cone of `F_*(G') ⊗_{G'} C'_* -> F_*(G) ⊗_G C_*` on total complexes.
fn cone_total(chains: &OppositionChains, sub: &EquivariantComplex, qmax: usize, budget: u128) -> Result<ZChainComplex, HomologyError> {
    let source = bar_tensor_truncated(sub, qmax, qmax, None, budget)?;
    let target = bar_tensor_truncated(chains.equivariant(), qmax, qmax, None, budget)?;
    let (s_tot, t_tot) = (source.total(), target.total());
    let elements = chains.sub_elements().expect("present");
    let bases = chains.sub_bases().expect("present");
    let (small, big) = (elements.len(), chains.group().order());
    let maps = (0..s_tot.complex().ranks().len())
        .map(|total| {
            let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
            for p in 0..=total.min(qmax) {
                let q = total - p;
                if q >= bases.len() || s_tot.block(total as i64, p as i64).is_empty() {
                    continue;
                }
                let (rs, rt) = (bases[q].len(), chains.rank(q));
                let (s0, t0) = (s_tot.block(total as i64, p as i64).start, t_tot.block(total as i64, p as i64).start);
                for tuple in 0..small.pow(p as u32) {
                    let image: Vec<u32> = decode(tuple, small, p).iter().map(|&g| elements[g as usize]).collect();
                    let t = encode(&image, big);
                    for (j, &b) in bases[q].iter().enumerate() {
                        trip.push((t0 + t * rt + b, s0 + tuple * rs + j, BigInt::from(1)));
                    }
                }
            }
            SparseIntMatrix::from_triplets(t_tot.complex().rank(total as i64), s_tot.complex().rank(total as i64), trip)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = ChainMap::new(s_tot.complex().clone(), t_tot.complex().clone(), maps)?;
    Ok(f.cone())
}
