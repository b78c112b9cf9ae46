use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{kernel_basis, ColumnEchelon, FgAbGroup, SparseIntMatrix, SparseVec, Subquotient};

use super::{DoubleComplexZ, HomologyError, TotalComplex};

/// Which filtration of the total complex a spectral sequence comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Filtration by columns: `E^1 = H^v`, `E^2 = H^h H^v`.
    Columns,
    /// Filtration by rows: `E^1 = H^h`, `E^2 = H^v H^h`.
    Rows,
}

/// One entry `E^r_{p,q}` presented as `⊕ Z/orders[i]` (zero meaning `Z`),
/// with `d^r` given by the coordinates of the image of each generator in
/// the target entry.
#[derive(Clone, Debug)]
pub struct Spot {
    pub group: FgAbGroup,
    pub orders: Vec<BigInt>,
    pub differential: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    /// `spots[p][q]` in the oriented grid.
    pub spots: Vec<Vec<Spot>>,
}

impl Page {
    pub fn group(&self, p: i64, q: i64) -> FgAbGroup {
        if p < 0 || q < 0 {
            return FgAbGroup::zero();
        }
        self.spots.get(p as usize).and_then(|c| c.get(q as usize)).map_or_else(FgAbGroup::zero, |s| s.group.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.spots.iter().flatten().all(|s| s.group.is_zero())
    }
}

/// The spectral sequence of a filtered total complex, with every page
/// computed exactly as a subquotient of the original lattices.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    orientation: Orientation,
    width: usize,
    height: usize,
    pages: Vec<Page>,
}

/// Outcome of comparing the limit page with the filtered homology of the
/// total complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reconciliation {
    /// `H_n(Tot)` for every total degree.
    pub total: Vec<FgAbGroup>,
    /// Degrees where a graded piece differs from the limit page, or where the
    /// pieces fail to account for the rank and torsion order of `H_n`.
    pub mismatches: Vec<i64>,
}

impl Reconciliation {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Spot data computed on one page before the differential is known.
struct Raw {
    sq: Subquotient,
    /// Kernel vectors in `Tot_n` coordinates whose column-`p` parts generate
    /// the upper lattice.
    lifts: Vec<SparseVec>,
    upper: Vec<SparseVec>,
}

fn to_global(local: &[(usize, BigInt)], coords: &[usize]) -> SparseVec {
    let mut v: SparseVec = local.iter().map(|(i, x)| (coords[*i], x.clone())).collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

fn project(v: &[(usize, BigInt)], block: &std::ops::Range<usize>) -> SparseVec {
    v.iter().filter(|(i, _)| block.contains(i)).map(|(i, x)| (i - block.start, x.clone())).collect()
}

fn restricted_kernel(d: &SparseIntMatrix, cols: &[usize], rows: &[usize]) -> Vec<SparseVec> {
    let m = d.select_cols(cols).select_rows(rows);
    kernel_basis(&m).iter().map(|k| to_global(k, cols)).collect()
}

impl SpectralSequence {
    /// Computes pages `E^1 .. E^{last}` where `last` is at least `rmax` and
    /// at least the page from which all differentials vanish for grid
    /// reasons. Each page is checked against the homology of the previous
    /// one.
    pub fn of_double_complex(
        d: &DoubleComplexZ,
        orientation: Orientation,
        rmax: usize,
    ) -> Result<SpectralSequence, HomologyError> {
        let grid = match orientation {
            Orientation::Columns => d.clone(),
            Orientation::Rows => d.transpose(),
        };
        let (w, h) = (grid.width(), grid.height());
        let tot = grid.total();
        let last = rmax.max(w).max(2);
        let mut pages = Vec::with_capacity(last);
        for r in 1..=last {
            pages.push(page(&grid, &tot, r)?);
        }
        let ss = SpectralSequence { orientation, width: w, height: h, pages };
        for r in 1..last {
            ss.check_successor(r)?;
        }
        Ok(ss)
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Grid size in oriented coordinates.
    pub fn shape(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// `E^r`, for `1 <= r <= last`.
    pub fn page(&self, r: usize) -> Option<&Page> {
        r.checked_sub(1).and_then(|i| self.pages.get(i))
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    /// The limit page `E^∞`.
    pub fn limit(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// First page from which nothing changes.
    pub fn stabilizes_at(&self) -> usize {
        let mut r = self.pages.len();
        while r > 1 && self.pages[r - 2].spots.iter().flatten().zip(self.pages[r - 1].spots.iter().flatten()).all(|(a, b)| a.group == b.group) {
            r -= 1;
        }
        r
    }

    /// Verifies `H(E^r, d^r) ≅ E^{r+1}` at every spot.
    fn check_successor(&self, r: usize) -> Result<(), HomologyError> {
        let (cur, next) = (&self.pages[r - 1], &self.pages[r]);
        let ri = r as i64;
        for p in 0..self.width as i64 {
            for q in 0..self.height as i64 {
                let here = &cur.spots[p as usize][q as usize];
                let incoming = self.spot(cur, p + ri, q - ri + 1);
                let outgoing = self.spot(cur, p - ri, q + ri - 1);
                let hom = presentation_homology(incoming, here, outgoing)
                    .map_err(|e| HomologyError::Check(format!("d^{r} at ({p}, {q}) does not square to zero: {e}")))?;
                if hom != next.spots[p as usize][q as usize].group {
                    return Err(HomologyError::Check(format!(
                        "homology of E^{r} at ({p}, {q}) is {hom}, but E^{} there is {}",
                        r + 1,
                        next.spots[p as usize][q as usize].group
                    )));
                }
            }
        }
        Ok(())
    }

    fn spot<'a>(&self, page: &'a Page, p: i64, q: i64) -> Option<&'a Spot> {
        if p < 0 || q < 0 || p >= self.width as i64 || q >= self.height as i64 {
            return None;
        }
        Some(&page.spots[p as usize][q as usize])
    }

    /// Compares `E^∞` with the graded pieces `F_p H_n / F_{p-1} H_n` of the
    /// homology of the total complex of `d` (the complex this sequence was
    /// built from).
    pub fn reconcile(&self, d: &DoubleComplexZ) -> Result<Reconciliation, HomologyError> {
        let grid = match self.orientation {
            Orientation::Columns => d.clone(),
            Orientation::Rows => d.transpose(),
        };
        let tot = grid.total();
        let c = tot.complex();
        let limit = self.limit();
        let mut total = Vec::new();
        let mut mismatches = Vec::new();
        for n in 0..=grid.top_degree() {
            let hn = c.homology_in(n);
            let dn = c.boundary(n);
            let boundaries = c.boundary(n + 1).columns_vec();
            let rank = c.rank(n);
            let all_rows: Vec<usize> = (0..dn.rows()).collect();
            let mut prev: Vec<SparseVec> = boundaries.clone();
            let mut free = 0usize;
            let mut torsion = BigInt::one();
            let mut bad = false;
            for p in 0..self.width as i64 {
                let cols = tot.columns(n, 0, p);
                let mut upper = restricted_kernel(&dn, &cols, &all_rows);
                upper.extend(boundaries.iter().cloned());
                let piece = Subquotient::new(rank, &upper, &prev)?.group().clone();
                if piece != limit.group(p, n - p) {
                    bad = true;
                }
                free += piece.free_rank();
                torsion *= piece.torsion_order();
                prev = upper;
            }
            if free != hn.free_rank() || torsion != hn.torsion_order() {
                bad = true;
            }
            if bad {
                mismatches.push(n);
            }
            total.push(hn);
        }
        Ok(Reconciliation { total, mismatches })
    }

    /// Structured text: one grid per page, rows printed from the top.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let orient = match self.orientation {
            Orientation::Columns => "columns",
            Orientation::Rows => "rows",
        };
        let _ = writeln!(s, "spectral-sequence orientation={orient} width={} height={}", self.width, self.height);
        for page in &self.pages {
            let _ = writeln!(s, "page {}", page.r);
            for q in (0..self.height).rev() {
                let row: Vec<String> = (0..self.width).map(|p| page.spots[p][q].group.to_string()).collect();
                let _ = writeln!(s, "  q={q}: {}", row.join(" | "));
            }
        }
        s
    }

    /// Groups of every page as strings, `[r-1][p][q]`.
    pub fn grid_strings(&self) -> Vec<Vec<Vec<String>>> {
        self.pages
            .iter()
            .map(|pg| pg.spots.iter().map(|col| col.iter().map(|s| s.group.to_string()).collect()).collect())
            .collect()
    }
}

fn raw_spot(grid: &DoubleComplexZ, tot: &TotalComplex, r: usize, p: i64, q: i64) -> Result<Raw, HomologyError> {
    let c = tot.complex();
    let n = p + q;
    let r = r as i64;
    let block = tot.block(n, p);
    let z_cols = tot.columns(n, p - r + 1, p);
    let z_rows = tot.columns(n - 1, p - r + 1, p);
    let lifts = restricted_kernel(&c.boundary(n), &z_cols, &z_rows);
    let upper: Vec<SparseVec> = lifts.iter().map(|x| project(x, &block)).collect();
    let b_cols = tot.columns(n + 1, p, p + r - 1);
    let b_rows = tot.columns(n, p + 1, p + r - 1);
    let d_up = c.boundary(n + 1);
    let lower: Vec<SparseVec> = restricted_kernel(&d_up, &b_cols, &b_rows)
        .iter()
        .map(|y| project(&d_up.mul_vec(y), &block))
        .collect();
    let sq = Subquotient::new(grid.rank(p, q), &upper, &lower)?;
    Ok(Raw { sq, lifts, upper })
}

fn page(grid: &DoubleComplexZ, tot: &TotalComplex, r: usize) -> Result<Page, HomologyError> {
    let (w, h) = (grid.width() as i64, grid.height() as i64);
    let mut raws: Vec<Vec<Raw>> = Vec::with_capacity(w as usize);
    for p in 0..w {
        raws.push((0..h).map(|q| raw_spot(grid, tot, r, p, q)).collect::<Result<_, _>>()?);
    }
    let c = tot.complex();
    let ri = r as i64;
    let mut spots = Vec::with_capacity(w as usize);
    for p in 0..w {
        let mut col = Vec::with_capacity(h as usize);
        for q in 0..h {
            let raw = &raws[p as usize][q as usize];
            let (tp, tq) = (p - ri, q + ri - 1);
            let differential = if tp < 0 || tq >= h {
                vec![Vec::new(); raw.sq.generators().len()]
            } else {
                let target = &raws[tp as usize][tq as usize].sq;
                let lifter = ColumnEchelon::from_generators(&raw.upper, true);
                let transforms = lifter.transforms();
                let dn = c.boundary(p + q);
                let tblock = tot.block(p + q - 1, tp);
                raw.sq
                    .generators()
                    .iter()
                    .map(|g| {
                        let coeffs = lifter.coordinates(g).expect("generators lie in the upper lattice");
                        let mut x: Vec<(usize, BigInt)> = Vec::new();
                        for (b, cb) in &coeffs {
                            for (i, t) in &transforms[*b] {
                                x.extend(raw.lifts[*i].iter().map(|(k, v)| (*k, v * cb * t)));
                            }
                        }
                        let x = crate::algebra::normalize_vec(x);
                        let image = project(&dn.mul_vec(&x), &tblock);
                        target.coords(&image).expect("boundaries of lifts are cycles of the target")
                    })
                    .collect()
            };
            col.push(Spot { group: raw.sq.group().clone(), orders: raw.sq.orders().to_vec(), differential });
        }
        spots.push(col);
    }
    Ok(Page { r, spots })
}

/// Homology at `here` of `incoming -> here -> outgoing`, each entry given by
/// generator orders and the differential in generator coordinates.
fn presentation_homology(incoming: Option<&Spot>, here: &Spot, outgoing: Option<&Spot>) -> Result<FgAbGroup, HomologyError> {
    let k = here.orders.len();
    let unit = |i: usize, x: BigInt| -> SparseVec { if x.is_zero() { Vec::new() } else { vec![(i, x)] } };
    let dense_to_sparse = |v: &[BigInt]| -> SparseVec {
        v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
    };
    let cycles: Vec<SparseVec> = match outgoing {
        None => (0..k).map(|i| unit(i, BigInt::one())).collect(),
        Some(t) => {
            let kc = t.orders.len();
            let mut cols: Vec<SparseVec> = here.differential.iter().map(|v| dense_to_sparse(v)).collect();
            cols.extend(t.orders.iter().enumerate().map(|(i, o)| unit(i, o.clone())));
            let m = SparseIntMatrix::from_columns(kc, cols)?;
            kernel_basis(&m)
                .into_iter()
                .map(|v| v.into_iter().filter(|(i, _)| *i < k).collect())
                .collect()
        }
    };
    let mut images: Vec<SparseVec> = here.orders.iter().enumerate().map(|(i, o)| unit(i, o.clone())).collect();
    if let Some(s) = incoming {
        images.extend(s.differential.iter().map(|v| dense_to_sparse(v)));
    }
    Ok(Subquotient::new(k, &cycles, &images)?.group().clone())
}
