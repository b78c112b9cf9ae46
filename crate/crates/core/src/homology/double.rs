use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::SparseIntMatrix;
use crate::simplicial::ZChainComplex;

use super::bar::{bar_boundary, check_submodule, reduced_index};
use super::{ChainMap, GModule, HomologyError, SubPair};

/// A first-quadrant double complex of free abelian groups `D_{p,q}` on a
/// `width x height` grid with commuting differentials
/// `h: D_{p,q} -> D_{p-1,q}` and `v: D_{p,q} -> D_{p,q-1}`. Signs enter only
/// in the total differential `h + (-1)^p v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleComplexZ {
    ranks: Vec<Vec<usize>>,
    horizontal: Vec<Vec<SparseIntMatrix>>,
    vertical: Vec<Vec<SparseIntMatrix>>,
}

/// `Tot(D)` together with the position of each `D_{p,q}` inside it.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    complex: ZChainComplex,
    /// `offsets[n][p]` is the first coordinate of `D_{p,n-p}` in `Tot_n`.
    offsets: Vec<Vec<usize>>,
}

impl TotalComplex {
    pub fn complex(&self) -> &ZChainComplex {
        &self.complex
    }

    /// Coordinates of `D_{p,n-p}` inside `Tot_n`.
    pub fn block(&self, n: i64, p: i64) -> std::ops::Range<usize> {
        let Some(offs) = usize::try_from(n).ok().and_then(|n| self.offsets.get(n)) else { return 0..0 };
        match usize::try_from(p).ok() {
            Some(p) if p + 1 < offs.len() => offs[p]..offs[p + 1],
            _ => 0..0,
        }
    }

    /// Coordinates of `Tot_n` lying in columns `lo..=hi`.
    pub fn columns(&self, n: i64, lo: i64, hi: i64) -> Vec<usize> {
        (lo.max(0)..=hi).flat_map(|p| self.block(n, p)).collect()
    }
}

fn zero_map(rows: usize, cols: usize) -> SparseIntMatrix {
    SparseIntMatrix::zeros(rows, cols)
}

fn kron(a: &SparseIntMatrix, b: &SparseIntMatrix) -> SparseIntMatrix {
    let trip = a.triplets().flat_map(|(i, j, x)| {
        b.triplets().map(move |(k, l, y)| (i * b.rows() + k, j * b.cols() + l, x * y)).collect::<Vec<_>>()
    });
    SparseIntMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), trip).expect("in range")
}

impl DoubleComplexZ {
    /// `ranks[p][q]`, with `horizontal[p][q]` and `vertical[p][q]` leaving
    /// `D_{p,q}`. Checks shapes, `h^2 = v^2 = 0` and `hv = vh`.
    pub fn new(
        ranks: Vec<Vec<usize>>,
        horizontal: Vec<Vec<SparseIntMatrix>>,
        vertical: Vec<Vec<SparseIntMatrix>>,
    ) -> Result<Self, HomologyError> {
        let d = DoubleComplexZ { ranks, horizontal, vertical };
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<(), HomologyError> {
        let (w, h) = (self.width(), self.height());
        let bad = |m: String| Err(HomologyError::Invalid(m));
        if self.ranks.iter().any(|c| c.len() != h) || self.horizontal.len() != w || self.vertical.len() != w {
            return bad("ragged grid".into());
        }
        for p in 0..w as i64 {
            for q in 0..h as i64 {
                let (hm, vm) = (self.h(p, q), self.v(p, q));
                if hm.cols() != self.rank(p, q) || hm.rows() != self.rank(p - 1, q) {
                    return bad(format!("horizontal map at ({p}, {q}) has the wrong shape"));
                }
                if vm.cols() != self.rank(p, q) || vm.rows() != self.rank(p, q - 1) {
                    return bad(format!("vertical map at ({p}, {q}) has the wrong shape"));
                }
                if !self.h(p - 1, q).mul(&hm)?.is_zero() || !self.v(p, q - 1).mul(&vm)?.is_zero() {
                    return bad(format!("a differential squares to a nonzero map at ({p}, {q})"));
                }
                if self.v(p - 1, q).mul(&hm)? != self.h(p, q - 1).mul(&vm)? {
                    return bad(format!("differentials do not commute at ({p}, {q})"));
                }
            }
        }
        Ok(())
    }

    /// Number of columns `p`.
    pub fn width(&self) -> usize {
        self.ranks.len()
    }

    /// Number of rows `q`.
    pub fn height(&self) -> usize {
        self.ranks.first().map_or(0, Vec::len)
    }

    pub fn rank(&self, p: i64, q: i64) -> usize {
        if p < 0 || q < 0 {
            return 0;
        }
        self.ranks.get(p as usize).and_then(|c| c.get(q as usize)).copied().unwrap_or(0)
    }

    /// `h: D_{p,q} -> D_{p-1,q}`, zero outside the grid.
    pub fn h(&self, p: i64, q: i64) -> SparseIntMatrix {
        if p >= 0 && q >= 0 {
            if let Some(m) = self.horizontal.get(p as usize).and_then(|c| c.get(q as usize)) {
                return m.clone();
            }
        }
        zero_map(self.rank(p - 1, q), self.rank(p, q))
    }

    /// `v: D_{p,q} -> D_{p,q-1}`, zero outside the grid.
    pub fn v(&self, p: i64, q: i64) -> SparseIntMatrix {
        if p >= 0 && q >= 0 {
            if let Some(m) = self.vertical.get(p as usize).and_then(|c| c.get(q as usize)) {
                return m.clone();
            }
        }
        zero_map(self.rank(p, q - 1), self.rank(p, q))
    }

    /// Highest total degree.
    pub fn top_degree(&self) -> i64 {
        self.width() as i64 + self.height() as i64 - 2
    }

    /// The total complex, with `D_{p,n-p}` ordered by increasing `p` inside
    /// `Tot_n`.
    pub fn total(&self) -> TotalComplex {
        let top = self.top_degree();
        let offsets: Vec<Vec<usize>> = (0..=top.max(-1))
            .map(|n| {
                let mut o = vec![0usize];
                for p in 0..=n {
                    o.push(o[p as usize] + self.rank(p, n - p));
                }
                o
            })
            .collect();
        let ranks: Vec<usize> = offsets.iter().map(|o| *o.last().expect("nonempty")).collect();
        let mut diffs = Vec::new();
        for n in 1..=top {
            let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
            for p in 0..=n {
                let q = n - p;
                let col0 = offsets[n as usize][p as usize];
                if p >= 1 {
                    let row0 = offsets[n as usize - 1][p as usize - 1];
                    trip.extend(self.h(p, q).triplets().map(|(r, c, x)| (row0 + r, col0 + c, x.clone())));
                }
                if q >= 1 {
                    let row0 = offsets[n as usize - 1][p as usize];
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    trip.extend(self.v(p, q).triplets().map(|(r, c, x)| (row0 + r, col0 + c, x * sign)));
                }
            }
            diffs.push(
                SparseIntMatrix::from_triplets(ranks[n as usize - 1], ranks[n as usize], trip).expect("in range"),
            );
        }
        let complex = ZChainComplex::new_unchecked(0, ranks, diffs).expect("shapes agree");
        TotalComplex { complex, offsets }
    }

    /// `D^T_{q,p} = D_{p,q}` with the roles of the differentials exchanged.
    pub fn transpose(&self) -> DoubleComplexZ {
        let (w, h) = (self.width(), self.height());
        let ranks = (0..h).map(|q| (0..w).map(|p| self.ranks[p][q]).collect()).collect();
        let horizontal = (0..h).map(|q| (0..w).map(|p| self.vertical[p][q].clone()).collect()).collect();
        let vertical = (0..h).map(|q| (0..w).map(|p| self.horizontal[p][q].clone()).collect()).collect();
        DoubleComplexZ { ranks, horizontal, vertical }
    }

    /// The map `Tot(D) -> Tot(D^T)` that multiplies `D_{p,q}` by
    /// `(-1)^{pq}`, verified to commute with both total differentials.
    pub fn transpose_sign_map(&self) -> Result<ChainMap, HomologyError> {
        let t = self.transpose();
        let (src, dst) = (self.total(), t.total());
        let maps = (0..=self.top_degree().max(-1))
            .map(|n| {
                let trip = (0..=n).flat_map(|p| {
                    let q = n - p;
                    let sign = if (p * q) % 2 == 0 { 1i64 } else { -1 };
                    let (a, b) = (src.block(n, p), dst.block(n, q));
                    a.zip(b).map(move |(c, r)| (r, c, sign))
                });
                let rank = src.complex.rank(n);
                SparseIntMatrix::from_triplets(rank, rank, trip).expect("in range")
            })
            .collect();
        ChainMap::new(src.complex, dst.complex, maps)
    }

    /// `D_{p,q} = A_p ⊗ B_q` with `h = d ⊗ 1` and `v = 1 ⊗ d`, for complexes
    /// starting in degree zero.
    pub fn tensor(a: &ZChainComplex, b: &ZChainComplex) -> Result<DoubleComplexZ, HomologyError> {
        if a.start() != 0 || b.start() != 0 {
            return Err(HomologyError::Invalid("tensor factors must start in degree 0".into()));
        }
        let (w, h) = (a.ranks().len(), b.ranks().len());
        let ranks = (0..w).map(|p| (0..h).map(|q| a.ranks()[p] * b.ranks()[q]).collect()).collect();
        let id = |c: &ZChainComplex, k: usize| SparseIntMatrix::identity(c.ranks()[k]);
        let horizontal =
            (0..w).map(|p| (0..h).map(|q| kron(&a.boundary(p as i64), &id(b, q))).collect()).collect();
        let vertical =
            (0..w).map(|p| (0..h).map(|q| kron(&id(a, p), &b.boundary(q as i64))).collect()).collect();
        DoubleComplexZ::new(ranks, horizontal, vertical)
    }
}

/// A chain complex of `G`-modules `N_0 <- N_1 <- ...` with equivariant
/// boundaries.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    modules: Vec<GModule>,
    boundaries: Vec<SparseIntMatrix>,
}

impl EquivariantComplex {
    /// `boundaries[i]` maps `N_{i+1}` to `N_i`. Checks shapes, `d^2 = 0`
    /// and `d g = g d` for every group element.
    pub fn new(modules: Vec<GModule>, boundaries: Vec<SparseIntMatrix>) -> Result<Self, HomologyError> {
        let c = EquivariantComplex::unchecked(modules, boundaries)?;
        let all: Vec<u32> = c.modules[0].group().elements().collect();
        c.check_equivariance(&all)?;
        Ok(c)
    }

    /// Checks shapes, module groups and `d^2 = 0`, but not equivariance.
    pub(crate) fn unchecked(modules: Vec<GModule>, boundaries: Vec<SparseIntMatrix>) -> Result<Self, HomologyError> {
        if modules.is_empty() || boundaries.len() + 1 != modules.len() {
            return Err(HomologyError::Invalid("need one boundary between consecutive modules".into()));
        }
        let group = modules[0].group().clone();
        if modules.iter().any(|m| !std::sync::Arc::ptr_eq(m.group(), &group) && **m.group() != *group) {
            return Err(HomologyError::Invalid("modules over different groups".into()));
        }
        for (i, d) in boundaries.iter().enumerate() {
            if d.rows() != modules[i].rank() || d.cols() != modules[i + 1].rank() {
                return Err(HomologyError::Invalid(format!("boundary out of degree {} has the wrong shape", i + 1)));
            }
            if i > 0 && !boundaries[i - 1].mul(d)?.is_zero() {
                return Err(HomologyError::Invalid(format!("boundary squares to nonzero at degree {}", i + 1)));
            }
        }
        Ok(EquivariantComplex { modules, boundaries })
    }

    /// `d g = g d` for the listed elements; a generating set suffices.
    pub fn check_equivariance(&self, elements: &[u32]) -> Result<(), HomologyError> {
        for (i, d) in self.boundaries.iter().enumerate() {
            for &g in elements {
                if d.mul(self.modules[i + 1].action(g))? != self.modules[i].action(g).mul(d)? {
                    return Err(HomologyError::Check(format!("boundary out of degree {} is not equivariant for {g}", i + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn modules(&self) -> &[GModule] {
        &self.modules
    }

    pub fn boundary(&self, k: usize) -> &SparseIntMatrix {
        &self.boundaries[k - 1]
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// The underlying complex of abelian groups.
    pub fn underlying(&self) -> ZChainComplex {
        ZChainComplex::new_unchecked(0, self.modules.iter().map(GModule::rank).collect(), self.boundaries.clone())
            .expect("shapes agree")
    }
}

/// A subgroup and a subcomplex for it: `basis[q]` lists the basis vectors of
/// `N_q` spanning the subcomplex.
#[derive(Clone, Copy, Debug)]
pub struct SubComplex<'a> {
    pub elements: &'a [u32],
    pub basis: &'a [Vec<usize>],
}

/// `D_{p,q} = F_p(G) ⊗_G N_q` for `p <= pmax`, with the bar boundary
/// horizontally and `1 ⊗ d` vertically; relative to
/// `F_*(G') ⊗_{G'} N'_*` when `sub` is given.
pub fn bar_tensor(
    n: &EquivariantComplex,
    pmax: usize,
    sub: Option<&SubComplex<'_>>,
    budget: u128,
) -> Result<DoubleComplexZ, HomologyError> {
    bar_tensor_truncated(n, pmax, pmax + n.len(), sub, budget)
}

/// [`bar_tensor`] with every cell of total degree above `max_total`
/// replaced by zero. Total homology and every page entry are unchanged in
/// total degrees below `max_total`.
pub fn bar_tensor_truncated(
    n: &EquivariantComplex,
    pmax: usize,
    max_total: usize,
    sub: Option<&SubComplex<'_>>,
    budget: u128,
) -> Result<DoubleComplexZ, HomologyError> {
    let group = n.modules[0].group().clone();
    if let Some(s) = sub {
        if !group.is_subgroup(s.elements) {
            return Err(crate::group::GroupError::NotSubgroup.into());
        }
        if s.basis.len() != n.len() {
            return Err(HomologyError::Invalid("one sub-basis per degree is required".into()));
        }
        for (q, m) in n.modules.iter().enumerate() {
            check_submodule(m, &SubPair { elements: s.elements, basis: &s.basis[q] })?;
            if q > 0 {
                let d = n.boundary(q);
                let image_ok = s.basis[q]
                    .iter()
                    .all(|&j| d.column(j).iter().all(|(i, _)| s.basis[q - 1].binary_search(i).is_ok()));
                if !image_ok {
                    return Err(HomologyError::Invalid(format!("sub-basis in degree {q} is not a subcomplex")));
                }
            }
        }
    }
    let pair = |q: usize| sub.map(|s| SubPair { elements: s.elements, basis: &s.basis[q] });
    let order = group.order();
    let needed = (0..=pmax)
        .flat_map(|p| (0..n.len()).map(move |q| (p, q)))
        .filter(|&(p, q)| p + q <= max_total)
        .map(|(p, q)| super::bar_rank(order, n.modules[q].rank(), p, pair(q).as_ref()))
        .max()
        .unwrap_or(0);
    if needed > budget {
        return Err(HomologyError::Budget { needed, budget });
    }
    let maps: Vec<Vec<(Vec<u32>, usize)>> = (0..=pmax)
        .map(|p| {
            (0..n.len())
                .map(|q| {
                    if p + q > max_total {
                        (Vec::new(), 0)
                    } else {
                        reduced_index(order, p, n.modules[q].rank(), pair(q).as_ref())
                    }
                })
                .collect()
        })
        .collect();
    let ranks = maps.iter().map(|col| col.iter().map(|(_, c)| *c).collect()).collect();
    let mut horizontal = Vec::with_capacity(pmax + 1);
    let mut vertical = Vec::with_capacity(pmax + 1);
    for p in 0..=pmax {
        let mut hs = Vec::with_capacity(n.len());
        let mut vs = Vec::with_capacity(n.len());
        for q in 0..n.len() {
            let m = &n.modules[q];
            if p + q > max_total {
                hs.push(zero_map(if p == 0 { 0 } else { maps[p - 1][q].1 }, 0));
                vs.push(zero_map(if q == 0 { 0 } else { maps[p][q - 1].1 }, 0));
                continue;
            }
            hs.push(if p == 0 { zero_map(0, maps[p][q].1) } else { bar_boundary(m, p, &maps[p][q], &maps[p - 1][q]) });
            vs.push(if q == 0 {
                zero_map(0, maps[p][q].1)
            } else {
                tensor_vertical(order.pow(p as u32), n.boundary(q), &maps[p][q], &maps[p][q - 1])
            });
        }
        horizontal.push(hs);
        vertical.push(vs);
    }
    DoubleComplexZ::new(ranks, horizontal, vertical)
}

/// `1 ⊗ d` on `Z[G^p] ⊗ N_q` restricted to kept basis elements.
fn tensor_vertical(tuples: usize, d: &SparseIntMatrix, src: &(Vec<u32>, usize), dst: &(Vec<u32>, usize)) -> SparseIntMatrix {
    let (r_src, r_dst) = (d.cols(), d.rows());
    let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
    for t in 0..tuples {
        for j in 0..r_src {
            let c = src.0[t * r_src + j];
            if c == u32::MAX {
                continue;
            }
            for (i, x) in d.column(j) {
                let row = dst.0[t * r_dst + i];
                if row != u32::MAX {
                    trip.push((row as usize, c as usize, x.clone()));
                }
            }
        }
    }
    SparseIntMatrix::from_triplets(dst.1, src.1, trip).expect("in range")
}

/// Parameters of [`random_double_complex`].
#[derive(Clone, Copy, Debug)]
pub struct RandomGrid {
    pub max_width: usize,
    pub max_height: usize,
    pub max_rank: usize,
    pub max_entry: i64,
}

impl Default for RandomGrid {
    fn default() -> Self {
        RandomGrid { max_width: 4, max_height: 4, max_rank: 4, max_entry: 3 }
    }
}

type Dense = Vec<Vec<i64>>;

/// A seeded random double complex: a direct sum of tensor products of
/// one- and two-term complexes `Z -a-> Z` and of four-cell staircases,
/// followed by random unimodular base changes that keep every entry within
/// `max_entry`.
pub fn random_double_complex(seed: u64, cfg: RandomGrid) -> DoubleComplexZ {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.gen_range(1..=cfg.max_width);
    let h = rng.gen_range(1..=cfg.max_height);
    let mut ranks = vec![vec![0usize; h]; w];
    // Entries (p, q, row, col, value) of h and v, in cell-local indices.
    let mut hor: Vec<(usize, usize, usize, usize, i64)> = Vec::new();
    let mut ver: Vec<(usize, usize, usize, usize, i64)> = Vec::new();
    for _ in 0..rng.gen_range(1..=8) {
        if w >= 3 && h >= 2 && rng.gen_bool(0.25) {
            // Staircase (p,q) -> (p-1,q) <- (p-1,q+1) -> (p-2,q+1), which
            // carries a second-page differential when the maps are units.
            let p = rng.gen_range(2..w);
            let q = rng.gen_range(0..h - 1);
            let cells = [(p, q), (p - 1, q), (p - 1, q + 1), (p - 2, q + 1)];
            if cells.iter().any(|&(x, y)| ranks[x][y] >= cfg.max_rank) {
                continue;
            }
            let idx: Vec<usize> = cells
                .iter()
                .map(|&(x, y)| {
                    ranks[x][y] += 1;
                    ranks[x][y] - 1
                })
                .collect();
            let mut entry = || if rng.gen_bool(0.6) { 1 } else { rng.gen_range(-cfg.max_entry..=cfg.max_entry) };
            let (a, b, c) = (entry(), entry(), entry());
            hor.push((p, q, idx[1], idx[0], a));
            ver.push((p - 1, q + 1, idx[1], idx[2], b));
            hor.push((p - 1, q + 1, idx[3], idx[2], c));
            continue;
        }
        let span_p = w > 1 && rng.gen_bool(0.6);
        let span_q = h > 1 && rng.gen_bool(0.6);
        let p = rng.gen_range(usize::from(span_p)..w);
        let q = rng.gen_range(usize::from(span_q)..h);
        let ps: Vec<usize> = if span_p { vec![p, p - 1] } else { vec![p] };
        let qs: Vec<usize> = if span_q { vec![q, q - 1] } else { vec![q] };
        if ps.iter().any(|&x| qs.iter().any(|&y| ranks[x][y] >= cfg.max_rank)) {
            continue;
        }
        let a = rng.gen_range(-cfg.max_entry..=cfg.max_entry);
        let b = rng.gen_range(-cfg.max_entry..=cfg.max_entry);
        let mut idx = std::collections::HashMap::new();
        for &x in &ps {
            for &y in &qs {
                idx.insert((x, y), ranks[x][y]);
                ranks[x][y] += 1;
            }
        }
        if span_p {
            for &y in &qs {
                hor.push((p, y, idx[&(p - 1, y)], idx[&(p, y)], a));
            }
        }
        if span_q {
            for &x in &ps {
                ver.push((x, q, idx[&(x, q - 1)], idx[&(x, q)], b));
            }
        }
    }
    let cell = |rows: usize, cols: usize| vec![vec![0i64; cols]; rows];
    let mut hd: Vec<Vec<Dense>> =
        (0..w).map(|p| (0..h).map(|q| cell(if p > 0 { ranks[p - 1][q] } else { 0 }, ranks[p][q])).collect()).collect();
    let mut vd: Vec<Vec<Dense>> =
        (0..w).map(|p| (0..h).map(|q| cell(if q > 0 { ranks[p][q - 1] } else { 0 }, ranks[p][q])).collect()).collect();
    for (p, q, r, c, x) in hor {
        hd[p][q][r][c] += x;
    }
    for (p, q, r, c, x) in ver {
        vd[p][q][r][c] += x;
    }
    for _ in 0..rng.gen_range(0..=12) {
        let (p, q) = (rng.gen_range(0..w), rng.gen_range(0..h));
        let r = ranks[p][q];
        if r < 2 {
            continue;
        }
        let i = rng.gen_range(0..r);
        let j = (i + rng.gen_range(1..r)) % r;
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        // New basis x' = (I + c E_ij) x: rows of incoming maps gain c * row j,
        // columns of outgoing maps lose c * column i.
        let mut trial_h = hd.clone();
        let mut trial_v = vd.clone();
        if p + 1 < w {
            add_row(&mut trial_h[p + 1][q], i, j, c);
        }
        if q + 1 < h {
            add_row(&mut trial_v[p][q + 1], i, j, c);
        }
        add_col(&mut trial_h[p][q], j, i, -c);
        add_col(&mut trial_v[p][q], j, i, -c);
        let fits = |g: &Vec<Vec<Dense>>| g.iter().flatten().flatten().flatten().all(|x| x.abs() <= cfg.max_entry);
        if fits(&trial_h) && fits(&trial_v) {
            hd = trial_h;
            vd = trial_v;
        }
    }
    let to_sparse = |m: &Dense, rows: usize, cols: usize| {
        let trip = m.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &x)| (r, c, x)));
        SparseIntMatrix::from_triplets(rows, cols, trip.filter(|t| t.2 != 0)).expect("in range")
    };
    let horizontal = (0..w)
        .map(|p| (0..h).map(|q| to_sparse(&hd[p][q], if p > 0 { ranks[p - 1][q] } else { 0 }, ranks[p][q])).collect())
        .collect();
    let vertical = (0..w)
        .map(|p| (0..h).map(|q| to_sparse(&vd[p][q], if q > 0 { ranks[p][q - 1] } else { 0 }, ranks[p][q])).collect())
        .collect();
    DoubleComplexZ::new(ranks, horizontal, vertical).expect("direct sums of tensor products are double complexes")
}

fn add_row(m: &mut Dense, i: usize, j: usize, c: i64) {
    if m.is_empty() {
        return;
    }
    let src = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(src) {
        *x += c * y;
    }
}

fn add_col(m: &mut Dense, dst: usize, src: usize, c: i64) {
    for row in m.iter_mut() {
        row[dst] += c * row[src];
    }
}
