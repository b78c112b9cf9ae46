use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{kernel_basis, FgAbGroup, Lattice, SparseIntMatrix, SparseVec};
use crate::group::{FiniteGroup, LinkModule, StabilityPair};
use crate::simplicial::{
    join_apex, reduced_homology, relative_homology, sort_with_sign, Simplex, TypeFiltration, TypeSet, ZChainComplex,
};

use super::{ChainMap, EquivariantComplex, GModule, HomologyError};

type Chain = BTreeMap<Simplex, BigInt>;

/// The exact complex `Z <- C_1 <- ... <- C_m <- C_{m+1}` of an opposition
/// complex filtered by a type ordering, with `C_p = H_{p-1}(O_p, O_{p-1})`
/// for `1 <= p <= m` and `C_{m+1}` the top homology of `O`.
///
/// `C_p` is presented as `⊕_{t in G/L_p} t M_p`: basis element `(k, j)`,
/// at index `k * rank M_p + j`, is the chain `t_k (v_p * z_j)` for the
/// `j`-th cycle `z_j` of `M_p`. Vertex ids of the opposition complex are
/// sorted by type and `G` preserves types, so `G` moves simplices without
/// signs.
#[derive(Clone, Debug)]
pub struct OppositionChains {
    frame: Frame,
    complex: EquivariantComplex,
    sub: Option<SubChains>,
}

#[derive(Clone, Debug)]
struct Frame {
    group: Arc<FiniteGroup>,
    perms: Vec<Vec<u32>>,
    types: Arc<Vec<u32>>,
    order: Vec<u32>,
    vertices: Vec<u32>,
    links: Vec<LinkModule>,
    reps: Vec<Vec<u32>>,
    coset_of: Vec<HashMap<u32, usize>>,
    top: Lattice,
    top_simplices: Vec<Simplex>,
    top_index: HashMap<Simplex, usize>,
}

/// `C'_*` as basis subsets of `C_*`: for `p <= n` the cosets of `G'/L'_p`
/// come first, `C'_{n+1} = M_{n+1}` on the identity coset, `C'_{n+2} = 0`.
#[derive(Clone, Debug)]
struct SubChains {
    elements: Vec<u32>,
    basis: Vec<Vec<usize>>,
}

impl OppositionChains {
    /// `C_*` for the canonical type ordering of the pair, with `C'_*`.
    pub fn new(pair: &StabilityPair) -> Result<Self, HomologyError> {
        OppositionChains::build(pair, pair.type_order(), true)
    }

    /// `C_*` for an arbitrary ordering of the types, with `v_p` the pair's
    /// base vertex of type `i_p` and `L_p` its stabilizer. `C'_*` is kept
    /// only for the canonical ordering.
    pub fn with_order(pair: &StabilityPair, order: &[u32]) -> Result<Self, HomologyError> {
        OppositionChains::build(pair, order, order == pair.type_order())
    }

    fn build(pair: &StabilityPair, order: &[u32], with_sub: bool) -> Result<Self, HomologyError> {
        let frame = Frame::new(pair, order, with_sub)?;
        let complex = frame.assemble()?;
        let sub = with_sub.then(|| {
            let m = order.len();
            let mut basis = vec![vec![0usize]];
            for p in 1..=m {
                let r = frame.links[p - 1].rank();
                // G' lies in L_{n+1}, so only the identity coset survives at p = m.
                let cosets = if p < m { frame.sub_cosets(p, pair.subgroup_indices()) } else { 1 };
                basis.push((0..cosets * r).collect());
            }
            basis.push(Vec::new());
            SubChains { elements: pair.subgroup_indices().to_vec(), basis }
        });
        Ok(OppositionChains { frame, complex, sub })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.frame.group
    }

    /// Type labels `i_1, ..., i_m` of the filtration.
    pub fn order(&self) -> &[u32] {
        &self.frame.order
    }

    /// `m`, the number of types; `C_*` lives in degrees `0..=m+1`.
    pub fn len(&self) -> usize {
        self.frame.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.order.is_empty()
    }

    /// `v_p` as an opposition-complex vertex.
    pub fn vertex(&self, p: usize) -> u32 {
        self.frame.vertices[p - 1]
    }

    /// `M_p` with its Levi action.
    pub fn link_module(&self, p: usize) -> &LinkModule {
        &self.frame.links[p - 1]
    }

    /// Coset representatives of `G/L_p`, indexed like the summands of `C_p`.
    pub fn coset_reps(&self, p: usize) -> &[u32] {
        &self.frame.reps[p - 1]
    }

    pub fn rank(&self, p: usize) -> usize {
        self.frame.rank(p)
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.len() + 1).map(|p| self.rank(p)).collect()
    }

    /// `C_*` as a complex of `G`-modules.
    pub fn equivariant(&self) -> &EquivariantComplex {
        &self.complex
    }

    pub fn module(&self, p: usize) -> &GModule {
        &self.complex.modules()[p]
    }

    /// `∂_p: C_p -> C_{p-1}` for `1 <= p <= m + 1`.
    pub fn boundary(&self, p: usize) -> &SparseIntMatrix {
        self.complex.boundary(p)
    }

    /// The underlying complex of abelian groups in degrees `0..=m+1`.
    pub fn chain_complex(&self) -> ZChainComplex {
        self.complex.underlying()
    }

    /// The chain `t_k (v_p * z_j)` of basis element `b` of `C_p`, as signed
    /// simplices of the opposition complex; for `p = m + 1` a top cycle.
    pub fn basis_chain(&self, p: usize, b: usize) -> Vec<(Simplex, BigInt)> {
        if p == self.len() + 1 {
            return self.frame.top.basis()[b].iter().map(|(i, c)| (self.frame.top_simplices[*i].clone(), c.clone())).collect();
        }
        self.frame.basis_chain(p, b).into_iter().collect()
    }

    /// Sorted elements of `G'`, when `C'_*` is present.
    pub fn sub_elements(&self) -> Option<&[u32]> {
        self.sub.as_ref().map(|s| s.elements.as_slice())
    }

    /// Basis indices of `C'_p` inside `C_p`, when `C'_*` is present.
    pub fn sub_basis(&self, p: usize) -> Option<&[usize]> {
        self.sub.as_ref().map(|s| s.basis[p].as_slice())
    }

    /// All sub-bases, degree by degree.
    pub fn sub_bases(&self) -> Option<&[Vec<usize>]> {
        self.sub.as_ref().map(|s| s.basis.as_slice())
    }

    /// `C'_*` as a complex of abelian groups.
    pub fn sub_complex(&self) -> Option<ZChainComplex> {
        let s = self.sub.as_ref()?;
        let ranks = s.basis.iter().map(Vec::len).collect();
        let diffs =
            (1..s.basis.len()).map(|p| self.boundary(p).select_cols(&s.basis[p]).select_rows(&s.basis[p - 1])).collect();
        Some(ZChainComplex::new_unchecked(0, ranks, diffs).expect("shapes agree"))
    }

    /// `ι: C'_* -> C_*`, verified to commute with the boundaries. In
    /// degree 0 it is obtained by the diagram chase
    /// `ι_0 = ∂_1 ι_1 (∂'_1)^{-1}` on the generator of `C'_0 = Z`.
    pub fn iota(&self) -> Result<ChainMap, HomologyError> {
        let s = self.sub.as_ref().ok_or_else(|| HomologyError::Invalid("no C'_* for this ordering".into()))?;
        let source = self.sub_complex().expect("present");
        let target = self.chain_complex();
        let inclusion = |p: usize| {
            let trip = s.basis[p].iter().enumerate().map(|(c, &r)| (r, c, 1i64));
            SparseIntMatrix::from_triplets(self.rank(p), s.basis[p].len(), trip).expect("in range")
        };
        let d1_sub = source.boundary(1);
        let (col, unit) = (0..d1_sub.cols())
            .find_map(|c| d1_sub.column(c).first().filter(|(_, x)| x.magnitude() == &1u32.into()).map(|(_, x)| (c, x.clone())))
            .ok_or_else(|| HomologyError::Check("∂'_1 has no unit column".into()))?;
        // x = unit * e_col satisfies ∂'_1 x = 1 since unit^2 = 1.
        let x = vec![(s.basis[1][col], unit)];
        let image = self.boundary(1).mul_vec(&x);
        let iota0 = SparseIntMatrix::from_columns(1, vec![image])?;
        let mut maps = vec![iota0];
        maps.extend((1..s.basis.len()).map(inclusion));
        ChainMap::new(source, target, maps)
    }
}

impl Frame {
    fn new(pair: &StabilityPair, order: &[u32], with_sub: bool) -> Result<Self, HomologyError> {
        let group = Arc::new(pair.cayley()?);
        if group.identity() != 0 {
            return Err(HomologyError::Invalid("the identity must be element 0".into()));
        }
        let perms = pair.opposition_permutations().to_vec();
        let o = pair.opposition().complex();
        let m = order.len();
        let filt = TypeFiltration::new(o, TypeSet::new(order.to_vec())?)?;
        if filt.len() != pair.type_order().len() {
            return Err(HomologyError::Invalid("the ordering must list every type once".into()));
        }
        let mut vertices = Vec::with_capacity(m);
        let mut links = Vec::with_capacity(m);
        for (i, &label) in order.iter().enumerate() {
            let c = pair
                .type_order()
                .iter()
                .position(|&x| x == label)
                .ok_or_else(|| HomologyError::Invalid(format!("unknown type label {label}")))?;
            let v = pair.v(c + 1);
            vertices.push(v);
            let act = |g: u32, x: u32| perms[g as usize][x as usize];
            links.push(LinkModule::at_vertex(&filt, v, i + 1, pair.levi(c + 1).to_vec(), act)?);
        }

        // With G' present its elements are visited first, so the cosets
        // meeting G' get the lowest indices and G' representatives.
        let mut reps = Vec::with_capacity(m);
        let mut coset_of = Vec::with_capacity(m);
        for (i, &v) in vertices.iter().enumerate() {
            let mut seen: HashMap<u32, usize> = HashMap::new();
            let mut r = Vec::new();
            let first = if with_sub { pair.subgroup_indices().to_vec() } else { Vec::new() };
            for g in std::iter::once(0).chain(first).chain(group.elements()) {
                let w = perms[g as usize][v as usize];
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(r.len());
                    r.push(g);
                }
            }
            if r.len() * links[i].levi().len() != group.order() {
                return Err(HomologyError::Check(format!("L_{} is not the stabilizer of v_{}", i + 1, i + 1)));
            }
            reps.push(r);
            coset_of.push(seen);
        }

        let top_dim = m as i64 - 1;
        let top = Lattice::new(o.count(top_dim), &kernel_basis(&o.boundary_matrix(top_dim)))?;
        let top_simplices = o.simplices(top_dim).to_vec();
        let top_index = top_simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Frame {
            group,
            perms,
            types: o.vertex_types().clone(),
            order: order.to_vec(),
            vertices,
            links,
            reps,
            coset_of,
            top,
            top_simplices,
            top_index,
        })
    }

    fn rank(&self, p: usize) -> usize {
        let m = self.order.len();
        match p {
            0 => 1,
            p if p <= m => self.reps[p - 1].len() * self.links[p - 1].rank(),
            p if p == m + 1 => self.top.rank(),
            _ => 0,
        }
    }

    /// Number of cosets of `L_p` met by `G'`; these come first.
    fn sub_cosets(&self, p: usize, sub: &[u32]) -> usize {
        let v = self.vertices[p - 1];
        let mut orbit: Vec<u32> = sub.iter().map(|&g| self.perms[g as usize][v as usize]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        debug_assert!(orbit.iter().all(|w| self.coset_of[p - 1][w] < orbit.len()));
        orbit.len()
    }

    fn apply(&self, g: u32, s: &[u32]) -> (i64, Simplex) {
        let mapped: Vec<u32> = s.iter().map(|&x| self.perms[g as usize][x as usize]).collect();
        sort_with_sign(mapped)
    }

    fn basis_chain(&self, p: usize, b: usize) -> Chain {
        let link = &self.links[p - 1];
        let r = link.rank();
        let (t, j) = (self.reps[p - 1][b / r], b % r);
        let v = self.vertices[p - 1];
        let mut chain = Chain::new();
        for (i, c) in &link.basis()[j] {
            let s: &[u32] = if p == 1 { &[] } else { &link.link().simplices(p as i64 - 2)[*i] };
            let (sign, joined) = join_apex(v, s).expect("v_p is not in its own link");
            let (sign2, moved) = self.apply(t, &joined);
            add_to(&mut chain, moved, c * (sign * sign2));
        }
        chain
    }

    /// Coordinates in `C_level` of a relative cycle of `(O_level, O_{level-1})`
    /// in degree `level - 1`: split each simplex at its vertex `w` of type
    /// `i_level` as `w * rest`, pull each `w`-summand back to `v_level` by the
    /// coset representative, and read off coordinates in `M_level`.
    fn decompose(&self, chain: &Chain, level: usize) -> Result<SparseVec, HomologyError> {
        if level == 0 {
            let total: BigInt = chain.values().sum();
            return Ok(if total.is_zero() { Vec::new() } else { vec![(0, total)] });
        }
        let label = self.order[level - 1];
        let mut by_vertex: BTreeMap<u32, Chain> = BTreeMap::new();
        for (s, c) in chain {
            let w = *s
                .iter()
                .find(|&&x| self.types[x as usize] == label)
                .ok_or_else(|| HomologyError::Check(format!("simplex {s:?} has no vertex of type {label}")))?;
            let rest: Simplex = s.iter().copied().filter(|&x| x != w).collect();
            let (sign, _) = join_apex(w, &rest).expect("w is not in rest");
            add_to(by_vertex.entry(w).or_default(), rest, c * sign);
        }
        let link = &self.links[level - 1];
        let r = link.rank();
        let mut out: SparseVec = Vec::new();
        for (w, y) in by_vertex {
            let k = *self.coset_of[level - 1]
                .get(&w)
                .ok_or_else(|| HomologyError::Check(format!("vertex {w} is not in the orbit of v_{level}")))?;
            let tinv = self.group.inv(self.reps[level - 1][k]);
            let mut pulled: SparseVec = Vec::with_capacity(y.len());
            for (rest, c) in y {
                if c.is_zero() {
                    continue;
                }
                let (sign, back) = self.apply(tinv, &rest);
                let idx = if level == 1 {
                    0
                } else {
                    link.link()
                        .index_of(&back)
                        .ok_or_else(|| HomologyError::Check(format!("{back:?} is not in the link of v_{level}")))?
                };
                pulled.push((idx, c * sign));
            }
            pulled.sort_by_key(|(i, _)| *i);
            let coords = link
                .coordinates(&pulled)
                .ok_or_else(|| HomologyError::Check(format!("component at vertex {w} is not a link cycle")))?;
            out.extend(coords.into_iter().map(|(i, c)| (k * r + i, c)));
        }
        out.sort_by_key(|(i, _)| *i);
        out.retain(|(_, c)| !c.is_zero());
        Ok(out)
    }

    /// `Ind_{L_p}^G M_p`: `g t_k = t_{k'} l` sends `(k, j)` to `(k', l z_j)`.
    fn induced_module(&self, p: usize) -> GModule {
        let link = &self.links[p - 1];
        let (reps, r) = (&self.reps[p - 1], link.rank());
        let v = self.vertices[p - 1];
        let action = self
            .group
            .elements()
            .map(|g| {
                let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
                for (k, &t) in reps.iter().enumerate() {
                    let gt = self.group.mul(g, t);
                    let k2 = self.coset_of[p - 1][&self.perms[gt as usize][v as usize]];
                    let l = self.group.mul(self.group.inv(reps[k2]), gt);
                    let li = link.levi().binary_search(&l).expect("l stabilizes v_p");
                    trip.extend(link.action(li).triplets().map(|(i, j, x)| (k2 * r + i, k * r + j, x.clone())));
                }
                SparseIntMatrix::from_triplets(reps.len() * r, reps.len() * r, trip).expect("in range")
            })
            .collect();
        GModule::new_unchecked(self.group.clone(), reps.len() * r, action)
    }

    /// The top homology of `O` with `G` permuting top simplices.
    fn top_module(&self) -> Result<GModule, HomologyError> {
        let basis = self.top.basis();
        let r = basis.len();
        let mut action = Vec::with_capacity(self.group.order());
        for g in self.group.elements() {
            let mut cols = Vec::with_capacity(r);
            for z in &basis {
                let mut img: SparseVec = z
                    .iter()
                    .map(|(i, c)| {
                        let (sign, s) = self.apply(g, &self.top_simplices[*i]);
                        (self.top_index[&s], c * sign)
                    })
                    .collect();
                img.sort_by_key(|(i, _)| *i);
                cols.push(self.top.coordinates(&img).map_err(|_| HomologyError::Check("G does not preserve top cycles".into()))?);
            }
            action.push(SparseIntMatrix::from_columns(r, cols)?);
        }
        Ok(GModule::new_unchecked(self.group.clone(), r, action))
    }

    fn assemble(&self) -> Result<EquivariantComplex, HomologyError> {
        let m = self.order.len();
        let mut modules = vec![GModule::trivial(self.group.clone(), 1)];
        modules.extend((1..=m).map(|p| self.induced_module(p)));
        modules.push(self.top_module()?);
        let mut boundaries = Vec::with_capacity(m + 1);
        for p in 1..=m {
            let cols = (0..self.rank(p))
                .map(|b| self.decompose(&boundary_of(&self.basis_chain(p, b)), p - 1))
                .collect::<Result<Vec<_>, _>>()?;
            boundaries.push(SparseIntMatrix::from_columns(self.rank(p - 1), cols)?);
        }
        // The top map is H(π) alone: a top cycle is already a relative cycle.
        let cols = self
            .top
            .basis()
            .iter()
            .map(|z| {
                let chain: Chain = z.iter().map(|(i, c)| (self.top_simplices[*i].clone(), c.clone())).collect();
                self.decompose(&chain, m)
            })
            .collect::<Result<Vec<_>, _>>()?;
        boundaries.push(SparseIntMatrix::from_columns(self.rank(m), cols)?);
        let complex = EquivariantComplex::unchecked(modules, boundaries)?;
        let mut gens = self.group.generating_set();
        gens.push(0);
        complex.check_equivariance(&gens)?;
        for module in complex.modules() {
            module.check(0, 20)?;
        }
        Ok(complex)
    }
}

fn add_to(chain: &mut Chain, s: Simplex, c: BigInt) {
    let e = chain.entry(s).or_insert_with(BigInt::zero);
    *e += c;
}

fn boundary_of(chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for (s, c) in chain {
        for i in 0..s.len() {
            let f: Simplex = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            add_to(&mut out, f, if i % 2 == 0 { c.clone() } else { -c });
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The four filtration facts at level `p` of one type ordering.
#[derive(Clone, Debug, Serialize)]
pub struct LevelCheck {
    pub p: usize,
    /// `H~_*(O_p)` vanishes off degree `p - 1` and is free there.
    pub spherical: bool,
    /// `H_*(O_p, O_{p-1}) ≅ ⊕_v H~_{*-1}(lk(v)_{p-1})` over type-`i_p` vertices.
    pub excision: bool,
    /// Free rank of `H_{p-1}(O_p, O_{p-1})`.
    pub relative_rank: usize,
    /// `[G : L_p] * rank M_p`.
    pub induced_rank: usize,
}

impl LevelCheck {
    pub fn passes(&self) -> bool {
        self.spherical && self.excision && self.relative_rank == self.induced_rank
    }
}

/// Filtration checks for one ordering, with exactness of its `C_*`.
#[derive(Clone, Debug, Serialize)]
pub struct OrderingCheck {
    pub order: Vec<u32>,
    pub levels: Vec<LevelCheck>,
    pub ranks: Vec<usize>,
    pub exact: bool,
}

impl OrderingCheck {
    pub fn passes(&self) -> bool {
        self.exact && self.levels.iter().all(LevelCheck::passes)
    }
}

/// Checks the filtration of the opposition complex by `order` level by
/// level against direct homology, then builds `C_*` and checks exactness.
pub fn check_ordering(pair: &StabilityPair, order: &[u32]) -> Result<OrderingCheck, HomologyError> {
    let o = pair.opposition().complex();
    let filt = TypeFiltration::new(o, TypeSet::new(order.to_vec())?)?;
    let chains = OppositionChains::with_order(pair, order)?;
    let group_order = chains.group().order();
    let mut levels = Vec::with_capacity(order.len());
    for p in 1..=order.len() {
        let (level, below) = (filt.level(p), filt.level(p - 1));
        let reduced = reduced_homology(level);
        let top = p as i64 - 1;
        let spherical = reduced.iter().all(|(d, h)| if d == top { h.is_free() } else { h.is_zero() });
        let relative = relative_homology(level, below)?;
        let label = filt.label(p);
        let mut summed: BTreeMap<i64, FgAbGroup> = BTreeMap::new();
        for v in level.vertices().into_iter().filter(|&v| level.type_of(v) == label) {
            for (d, h) in reduced_homology(&filt.lower_link(v, p)?).iter() {
                let e = summed.entry(d + 1).or_insert_with(FgAbGroup::zero);
                *e = e.direct_sum(h);
            }
        }
        let degrees: std::collections::BTreeSet<i64> =
            relative.iter().map(|(d, _)| d).chain(summed.keys().copied()).collect();
        let excision = degrees.into_iter().all(|d| relative.degree(d) == summed.get(&d).cloned().unwrap_or_else(FgAbGroup::zero));
        let link = chains.link_module(p);
        levels.push(LevelCheck {
            p,
            spherical,
            excision,
            relative_rank: relative.degree(top).free_rank(),
            induced_rank: group_order / link.levi().len() * link.rank(),
        });
    }
    let exact = chains.chain_complex().homology().is_zero();
    Ok(OrderingCheck { order: order.to_vec(), levels, ranks: chains.ranks(), exact })
}
