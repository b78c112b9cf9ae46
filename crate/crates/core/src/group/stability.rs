use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::{kernel_basis, Lattice, SparseIntMatrix, SparseVec};
use crate::coxeter::CoxeterType;
use crate::geometry::{
    coord, opposition_complex, Building, Caps, FMatrix, FiniteField, FormKind, HermitianForm, OppositionComplex, Subspace,
};
use crate::homology::GModule;
use crate::simplicial::{TypeFiltration, TypeSet, TypedComplex};

use super::action::strongly_transitive;
use super::{general_linear, isometry_group, BuildingAction, FiniteGroup, GroupError, MatrixGroup, MAX_GROUP_ORDER};

/// Families of classical groups with a stability pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    GL,
    SL,
    Sp,
    SO,
    U,
}

impl FromStr for Series {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(Series::GL),
            "SL" => Ok(Series::SL),
            "SP" => Ok(Series::Sp),
            "SO" => Ok(Series::SO),
            "U" => Ok(Series::U),
            _ => Err(GroupError::Invalid(format!("unknown series {s:?}"))),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::GL => "GL",
            Series::SL => "SL",
            Series::Sp => "Sp",
            Series::SO => "SO",
            Series::U => "U",
        };
        f.write_str(s)
    }
}

/// A group `G` acting strongly transitively on a building of rank `n + 1`,
/// together with a subgroup `G'` of the Levi subgroup `L_{n+1}` acting
/// strongly transitively on the link of `v_{n+1}^+`.
#[derive(Clone, Debug)]
pub struct StabilityPair {
    series: Series,
    n: usize,
    group: MatrixGroup,
    subgroup: MatrixGroup,
    subgroup_in_group: Vec<u32>,
    building: Building,
    link_building: Building,
    opposition: OppositionComplex,
    action: BuildingAction,
    opposition_perms: Vec<Vec<u32>>,
    order: Vec<u32>,
    v_plus: Vec<u32>,
    v_minus: Vec<u32>,
    v: Vec<u32>,
    levi: Vec<Vec<u32>>,
    levi_prime: Vec<Vec<u32>>,
}

/// Builds and validates the stability pair of `series` with parameter `n`
/// over `F_q`.
pub fn stability_pair(series: Series, n: usize, q: usize) -> Result<StabilityPair, GroupError> {
    StabilityPair::new(series, n, q, &Caps::default())
}

/// The permutation of opposition-complex vertices `(x, y)` induced by each
/// group element.
pub fn opposition_permutations(action: &BuildingAction, opposition: &OppositionComplex) -> Result<Vec<Vec<u32>>, GroupError> {
    (0..action.order() as u32)
        .map(|g| {
            opposition
                .pairs()
                .iter()
                .map(|&(x, y)| {
                    opposition
                        .vertex_of(action.apply(g, x), action.apply(g, y))
                        .ok_or_else(|| GroupError::Check("the group does not preserve opposition".into()))
                })
                .collect()
        })
        .collect()
}

/// `diag(1_before, a, 1_after)`.
fn pad_block(a: &FMatrix, before: usize, after: usize) -> FMatrix {
    let k = a.rows();
    let mut m = FMatrix::identity(before + k + after);
    for i in 0..k {
        for j in 0..k {
            m.set(before + i, before + j, a.get(i, j));
        }
    }
    m
}

impl StabilityPair {
    pub fn new(series: Series, n: usize, q: usize, caps: &Caps) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Invalid("n must be at least 1".into()));
        }
        let f = FiniteField::new(q)?;
        let m = n + 1;
        let (group, small, building, link_building, embed): (MatrixGroup, MatrixGroup, Building, Building, Box<dyn Fn(&FMatrix) -> FMatrix>) =
            match series {
                Series::GL | Series::SL => {
                    let big = if series == Series::GL { general_linear(&f, n + 2)? } else { super::special_linear(&f, n + 2)? };
                    // G' is the upper-left GL_{n+1} block for GL and SL_{n+1} for SL.
                    let small = if series == Series::GL { general_linear(&f, n + 1)? } else { super::special_linear(&f, n + 1)? };
                    let b = Building::type_a(&f, n + 2, caps)?;
                    let lb = Building::type_a(&f, n + 1, caps)?;
                    let embed: Box<dyn Fn(&FMatrix) -> FMatrix> = Box::new(|a: &FMatrix| pad_block(a, 0, 1));
                    (big, small, b, lb, embed)
                }
                Series::Sp | Series::SO | Series::U => {
                    let kind = match series {
                        Series::Sp => FormKind::Symplectic,
                        Series::SO => FormKind::SplitOrthogonal,
                        _ => FormKind::Unitary { eps_negative: false },
                    };
                    let form = HermitianForm::new(&f, kind, m)?;
                    let small_form = HermitianForm::new(&f, kind, n)?;
                    let b = Building::type_c(&form, caps)?;
                    let lb = Building::type_c(&small_form, caps)?;
                    let big = isometry_group(&form)?;
                    let small = isometry_group(&small_form)?;
                    let embed: Box<dyn Fn(&FMatrix) -> FMatrix> = Box::new(|a: &FMatrix| pad_block(a, 1, 1));
                    (big, small, b, lb, embed)
                }
            };
        let embedded: Vec<FMatrix> = small.elements().iter().map(embed).collect();
        let subgroup_in_group: Vec<u32> = embedded
            .iter()
            .map(|g| group.index_of(g).ok_or_else(|| GroupError::Check("G' is not contained in G".into())))
            .collect::<Result<_, _>>()?;
        let subgroup = group.subgroup(&subgroup_in_group)?;
        let mut subgroup_in_group = subgroup_in_group;
        subgroup_in_group.sort_unstable();

        // v_p^+ and v_p^- as coordinate subspaces; types i_p in filtration order.
        let amb = building.ambient();
        let (plus, minus, order): (Vec<Subspace>, Vec<Subspace>, Vec<u32>) = match building.ty() {
            CoxeterType::A => (
                (1..=m).map(|p| Subspace::coordinate(amb, &(0..p).collect::<Vec<_>>())).collect(),
                (1..=m).map(|p| Subspace::coordinate(amb, &(p..amb).collect::<Vec<_>>())).collect(),
                (1..=m as u32).collect(),
            ),
            CoxeterType::C => (
                (1..=m).map(|p| Subspace::coordinate(amb, &(p..=m).map(|i| coord(m, -(i as i32))).collect::<Vec<_>>())).collect(),
                (1..=m).map(|p| Subspace::coordinate(amb, &(p..=m).map(|i| coord(m, i as i32)).collect::<Vec<_>>())).collect(),
                (1..=m as u32).map(|p| m as u32 + 1 - p).collect(),
            ),
        };
        let vertex = |s: &Subspace| building.vertex_of(s).ok_or_else(|| GroupError::Check("v_p is not a vertex".into()));
        let v_plus: Vec<u32> = plus.iter().map(vertex).collect::<Result<_, _>>()?;
        let v_minus: Vec<u32> = minus.iter().map(vertex).collect::<Result<_, _>>()?;
        for p in 0..m {
            if !building.is_vertex_opposite(v_plus[p], v_minus[p]) {
                return Err(GroupError::Check(format!("v_{}^+ and v_{}^- are not opposite", p + 1, p + 1)));
            }
        }
        let opposition = opposition_complex(&building)?;
        let v: Vec<u32> = (0..m).map(|p| opposition.vertex_of(v_plus[p], v_minus[p]).expect("opposite pair")).collect();

        let action = BuildingAction::new(&group, &building)?;
        let all: Vec<u32> = (0..group.order() as u32).collect();
        if !strongly_transitive(&action, &building, &all) {
            return Err(GroupError::Check("G is not strongly transitive on the building".into()));
        }
        let opposition_perms = opposition_permutations(&action, &opposition)?;

        let levi: Vec<Vec<u32>> = (0..m).map(|p| action.stabilizer(&[v_plus[p], v_minus[p]])).collect();
        let levi_prime: Vec<Vec<u32>> =
            levi.iter().map(|l| l.iter().copied().filter(|g| subgroup_in_group.binary_search(g).is_ok()).collect()).collect();
        if levi_prime[m - 1].len() != subgroup_in_group.len() {
            return Err(GroupError::Check("G' is not contained in L_{n+1}".into()));
        }

        let pair = StabilityPair {
            series,
            n,
            group,
            subgroup,
            subgroup_in_group,
            building,
            link_building,
            opposition,
            action,
            opposition_perms,
            order,
            v_plus,
            v_minus,
            v,
            levi,
            levi_prime,
        };
        pair.check_link_embedding()?;
        let link_action = BuildingAction::new(&small, &pair.link_building)?;
        let all_small: Vec<u32> = (0..small.order() as u32).collect();
        if !strongly_transitive(&link_action, &pair.link_building, &all_small) {
            return Err(GroupError::Check("G' is not strongly transitive on the link".into()));
        }
        Ok(pair)
    }

    /// The link building sits in the link of `v_{n+1}^+`: for type A by
    /// `x -> x` inside the first `n + 1` coordinates, for type C by
    /// `x -> <e_{-(n+1)}> + x` on the middle coordinates. Checks that this
    /// is a bijection on chambers.
    fn check_link_embedding(&self) -> Result<(), GroupError> {
        let b = &self.building;
        let lb = &self.link_building;
        let f = b.field();
        let amb = b.ambient();
        let apex = self.v_plus[self.n];
        let image = |s: &Subspace| -> Option<u32> {
            let (shift, extra) = match b.ty() {
                CoxeterType::A => (0, None),
                CoxeterType::C => (1, Some(b.subspace(apex).basis()[0].clone())),
            };
            let mut rows: Vec<Vec<u8>> = s
                .basis()
                .iter()
                .map(|r| {
                    let mut v = vec![0u8; amb];
                    v[shift..shift + r.len()].copy_from_slice(r);
                    v
                })
                .collect();
            rows.extend(extra);
            b.vertex_of(&Subspace::span(f, amb, &rows))
        };
        let map: Vec<u32> = (0..lb.vertex_count() as u32)
            .map(|v| image(lb.subspace(v)).ok_or_else(|| GroupError::Check("link vertex is not a building vertex".into())))
            .collect::<Result<_, _>>()?;
        let mut images: Vec<Vec<u32>> = lb
            .chambers()
            .iter()
            .map(|c| {
                let mut s: Vec<u32> = c.iter().map(|&v| map[v as usize]).chain(std::iter::once(apex)).collect();
                s.sort_unstable();
                s
            })
            .collect();
        images.sort();
        images.dedup();
        let over_apex: Vec<&Vec<u32>> = b.chambers().iter().filter(|c| c.binary_search(&apex).is_ok()).collect();
        if images.len() != lb.chambers().len() || images.len() != over_apex.len() || !images.iter().all(|s| b.complex().contains(s)) {
            return Err(GroupError::Check("link building does not match the link of v_{n+1}^+".into()));
        }
        Ok(())
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &MatrixGroup {
        &self.subgroup
    }

    /// Sorted indices in `G` of the elements of `G'`.
    pub fn subgroup_indices(&self) -> &[u32] {
        &self.subgroup_in_group
    }

    pub fn building(&self) -> &Building {
        &self.building
    }

    pub fn link_building(&self) -> &Building {
        &self.link_building
    }

    pub fn opposition(&self) -> &OppositionComplex {
        &self.opposition
    }

    pub fn action(&self) -> &BuildingAction {
        &self.action
    }

    /// Permutation of opposition-complex vertices induced by each element.
    pub fn opposition_permutations(&self) -> &[Vec<u32>] {
        &self.opposition_perms
    }

    /// Image of an opposition-complex vertex under element `g`.
    pub fn act_on_pair(&self, g: u32, v: u32) -> u32 {
        self.opposition_perms[g as usize][v as usize]
    }

    /// Type labels `i_1, ..., i_{n+1}` in filtration order.
    pub fn type_order(&self) -> &[u32] {
        &self.order
    }

    pub fn filtration(&self) -> Result<TypeFiltration, GroupError> {
        let order = TypeSet::new(self.order.clone()).map_err(|e| GroupError::Invalid(e.to_string()))?;
        TypeFiltration::new(self.opposition.complex(), order).map_err(|e| GroupError::Invalid(e.to_string()))
    }

    /// `v_p` as an opposition-complex vertex, `1 <= p <= n + 1`.
    pub fn v(&self, p: usize) -> u32 {
        self.v[p - 1]
    }

    pub fn v_plus(&self, p: usize) -> u32 {
        self.v_plus[p - 1]
    }

    pub fn v_minus(&self, p: usize) -> u32 {
        self.v_minus[p - 1]
    }

    /// Sorted indices in `G` of `L_p = G_{v_p^+} ∩ G_{v_p^-}`.
    pub fn levi(&self, p: usize) -> &[u32] {
        &self.levi[p - 1]
    }

    /// Sorted indices in `G` of `L'_p = L_p ∩ G'`.
    pub fn levi_prime(&self, p: usize) -> &[u32] {
        &self.levi_prime[p - 1]
    }

    /// Matrix of element `g` of `G`.
    pub fn element(&self, g: u32) -> &FMatrix {
        self.group.element(g)
    }

    /// `M_p = H~_{p-2}(lk(v_p)_{p-1})` with its `L_p`-action.
    pub fn link_module(&self, p: usize) -> Result<LinkModule, GroupError> {
        let filt = self.filtration()?;
        LinkModule::new(self, &filt, p)
    }

    /// Multiplication table of `G`.
    pub fn cayley(&self) -> Result<FiniteGroup, GroupError> {
        if self.group.order() > MAX_GROUP_ORDER {
            return Err(GroupError::CapExceeded("group too large".into()));
        }
        self.group.cayley()
    }
}

/// The coefficient module `M_p`: top reduced cycles of the filtered link
/// `lk(v_p)_{p-1}`, with `L_p` acting through its action on the opposition
/// complex. For `p = 1` the link is empty and `M_1 = Z` is trivial.
#[derive(Clone, Debug)]
pub struct LinkModule {
    p: usize,
    link: TypedComplex,
    basis: Vec<SparseVec>,
    lattice: Option<Lattice>,
    levi: Vec<u32>,
    action: Vec<SparseIntMatrix>,
}

/// Sign of the permutation sorting `xs` (entries distinct).
fn sort_sign(xs: &[u32]) -> i64 {
    let mut inversions = 0;
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            if xs[i] > xs[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1 } else { -1 }
}

impl LinkModule {
    pub(crate) fn new(pair: &StabilityPair, filt: &TypeFiltration, p: usize) -> Result<Self, GroupError> {
        if p == 0 || p > pair.n + 1 {
            return Err(GroupError::Invalid(format!("p = {p} outside 1..={}", pair.n + 1)));
        }
        LinkModule::at_vertex(filt, pair.v(p), p, pair.levi(p).to_vec(), |g, v| pair.act_on_pair(g, v))
    }

    /// `M_p` for an arbitrary type-`i_p` vertex `v` of a filtered complex,
    /// with `levi` (sorted group indices) acting through `act`.
    pub fn at_vertex(
        filt: &TypeFiltration,
        v: u32,
        p: usize,
        levi: Vec<u32>,
        act: impl Fn(u32, u32) -> u32,
    ) -> Result<Self, GroupError> {
        if p == 1 {
            let action = vec![SparseIntMatrix::identity(1); levi.len()];
            let link = TypedComplex::empty(filt.level(0).vertex_types().clone());
            return Ok(LinkModule { p, link, basis: vec![vec![(0, BigInt::from(1))]], lattice: None, levi, action });
        }
        let link = filt.lower_link(v, p).map_err(|e| GroupError::Invalid(e.to_string()))?;
        let d = p as i64 - 2;
        let cycles = kernel_basis(&link.boundary_matrix(d));
        let lattice = Lattice::new(link.count(d), &cycles).map_err(|e| GroupError::Invalid(e.to_string()))?;
        let basis = lattice.basis();
        let r = basis.len();
        let mut action = Vec::with_capacity(levi.len());
        for &g in &levi {
            let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
            for (j, z) in basis.iter().enumerate() {
                let mut img: SparseVec = Vec::with_capacity(z.len());
                for (i, c) in z {
                    let s = &link.simplices(d)[*i];
                    let mapped: Vec<u32> = s.iter().map(|&x| act(g, x)).collect();
                    let sign = sort_sign(&mapped);
                    let mut t = mapped;
                    t.sort_unstable();
                    let k = link.index_of(&t).ok_or_else(|| GroupError::Check(format!("L_{p} does not stabilize the link")))?;
                    img.push((k, c * sign));
                }
                img.sort_by_key(|(k, _)| *k);
                let coords = lattice.coordinates(&img).map_err(|_| GroupError::Check("image of a cycle is not a cycle".into()))?;
                trip.extend(coords.into_iter().map(|(i, c)| (i, j, c)));
            }
            action.push(SparseIntMatrix::from_triplets(r, r, trip).expect("in range"));
        }
        Ok(LinkModule { p, link, basis, lattice: Some(lattice), levi, action })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn link(&self) -> &TypedComplex {
        &self.link
    }

    /// Cycles of `lk(v_p)_{p-1}` in degree `p - 2`, indexed by the link's
    /// simplices; for `p = 1` the single empty simplex.
    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Coordinates of a `(p-2)`-cycle of the link in [`Self::basis`].
    pub fn coordinates(&self, z: &[(usize, BigInt)]) -> Option<SparseVec> {
        match &self.lattice {
            Some(l) => l.coordinates(z).ok(),
            None => Some(z.to_vec()),
        }
    }

    /// Sorted indices in `G` of the acting Levi subgroup.
    pub fn levi(&self) -> &[u32] {
        &self.levi
    }

    /// Action matrix of the `i`-th element of [`Self::levi`].
    pub fn action(&self, i: usize) -> &SparseIntMatrix {
        &self.action[i]
    }

    /// As a module over `levi_group`, whose element `i` is `levi()[i]`.
    pub fn gmodule(&self, levi_group: Arc<FiniteGroup>) -> GModule {
        GModule::new_unchecked(levi_group, self.rank(), self.action.clone())
    }
}
