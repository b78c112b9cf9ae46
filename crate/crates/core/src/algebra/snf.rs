use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::abelian::invariant_factors_of_diagonal;
use super::{IntMatrix, SparseIntMatrix};

/// Invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmithForm {
    rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Invariant factors `>= 2`.
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// All `rank` invariant factors, ones included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let ones = self.rank - self.factors.len();
        std::iter::repeat_n(<BigInt as One>::one(), ones).chain(self.factors.iter().cloned()).collect()
    }
}

/// `left * m * right == diag`, with `left_inv * left == I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub form: SmithForm,
    pub diag: IntMatrix,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
}

/// Invariant factors of `m` via sparse elimination. Runs in `i64` while no
/// intermediate overflows and restarts over arbitrary precision otherwise.
pub fn snf(m: &SparseIntMatrix) -> SmithForm {
    let diag = match columns_as::<i64>(m) {
        Some(cols) => match Eliminator::new(m.rows(), cols).run() {
            Some(d) => d,
            None => big_run(m),
        },
        None => big_run(m),
    };
    let rank = diag.len();
    SmithForm { rank, factors: invariant_factors_of_diagonal(diag) }
}

fn big_run(m: &SparseIntMatrix) -> Vec<BigInt> {
    let cols = columns_as::<BigInt>(m).expect("BigInt conversion is total");
    Eliminator::new(m.rows(), cols).run().expect("BigInt arithmetic cannot overflow")
}

fn columns_as<C: Coeff>(m: &SparseIntMatrix) -> Option<Vec<Vec<(usize, C)>>> {
    m.columns()
        .iter()
        .map(|col| col.iter().map(|(r, v)| C::from_big(v).map(|x| (*r, x))).collect())
        .collect()
}

/// Ring operations for elimination; `None` signals overflow.
trait Coeff: Clone + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// `x * a + y * b`
    fn lin(x: &Self, a: &Self, y: &Self, b: &Self) -> Option<Self>;
    /// Quotient when `d` divides `a`.
    fn exact_div(a: &Self, d: &Self) -> Option<Self>;
    /// `(g, x, y)` with `g = gcd(a, b) = x*a + y*b`, `g > 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    /// Remainder of `a` modulo `g` in `(-|g|/2, |g|/2]`.
    fn rem_sym(a: &Self, g: &Self) -> Option<Self>;
    fn unit() -> Self;
    fn nil() -> Self;
}

impl Coeff for i64 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn lin(x: &Self, a: &Self, y: &Self, b: &Self) -> Option<Self> {
        let v = (*x as i128) * (*a as i128) + (*y as i128) * (*b as i128);
        i64::try_from(v).ok()
    }
    fn exact_div(a: &Self, d: &Self) -> Option<Self> {
        if *d == 0 || a % d != 0 {
            return None;
        }
        a.checked_div(*d)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = (*a as i128).extended_gcd(&(*b as i128));
        let (mut g, mut x, mut y) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            x = -x;
            y = -y;
        }
        Some((i64::try_from(g).ok()?, i64::try_from(x).ok()?, i64::try_from(y).ok()?))
    }
    fn rem_sym(a: &Self, g: &Self) -> Option<Self> {
        let m = (*g as i128).abs();
        let mut r = (*a as i128).rem_euclid(m);
        if 2 * r > m {
            r -= m;
        }
        i64::try_from(r).ok()
    }
    fn unit() -> Self {
        1
    }
    fn nil() -> Self {
        0
    }
}

impl Coeff for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn lin(x: &Self, a: &Self, y: &Self, b: &Self) -> Option<Self> {
        Some(x * a + y * b)
    }
    fn exact_div(a: &Self, d: &Self) -> Option<Self> {
        let (q, r) = a.div_rem(d);
        Zero::is_zero(&r).then_some(q)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn rem_sym(a: &Self, g: &Self) -> Option<Self> {
        let m = g.abs();
        let mut r = a.mod_floor(&m);
        if &r * 2 > m {
            r -= &m;
        }
        Some(r)
    }
    fn unit() -> Self {
        One::one()
    }
    fn nil() -> Self {
        Zero::zero()
    }
}

/// `x * a + y * b` on sparse columns.
fn col_lin<C: Coeff>(x: &C, a: &[(usize, C)], y: &C, b: &[(usize, C)]) -> Option<Vec<(usize, C)>> {
    let zero = C::nil();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(usize::MAX, |e| e.0);
        let rb = b.get(j).map_or(usize::MAX, |e| e.0);
        let (row, va, vb) = if ra < rb {
            i += 1;
            (ra, &a[i - 1].1, &zero)
        } else if rb < ra {
            j += 1;
            (rb, &zero, &b[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (ra, &a[i - 1].1, &b[j - 1].1)
        };
        let v = C::lin(x, va, y, vb)?;
        if !v.is_nil() {
            out.push((row, v));
        }
    }
    Some(out)
}

fn entry<C>(col: &[(usize, C)], row: usize) -> &C {
    let p = col.binary_search_by_key(&row, |e| e.0).expect("entry present");
    &col[p].1
}

/// Sparse elimination producing a diagonal (not yet in divisibility order)
/// that is equivalent to the input matrix.
struct Eliminator<C> {
    cols: Vec<Vec<(usize, C)>>,
    row_cols: Vec<BTreeSet<usize>>,
    /// Columns keyed by `(len, index)` that may contain a unit.
    active: BTreeSet<(usize, usize)>,
    /// Columns keyed by `(len, index)` known to contain no unit.
    no_unit: BTreeSet<(usize, usize)>,
    diag: Vec<BigInt>,
}

impl<C: Coeff> Eliminator<C> {
    fn new(rows: usize, cols: Vec<Vec<(usize, C)>>) -> Self {
        let mut row_cols = vec![BTreeSet::new(); rows];
        let mut active = BTreeSet::new();
        for (c, col) in cols.iter().enumerate() {
            for (r, _) in col {
                row_cols[*r].insert(c);
            }
            if !col.is_empty() {
                active.insert((col.len(), c));
            }
        }
        Eliminator { cols, row_cols, active, no_unit: BTreeSet::new(), diag: Vec::new() }
    }

    fn run(mut self) -> Option<Vec<BigInt>> {
        loop {
            if let Some(&(len, c)) = self.active.first() {
                let unit = self.cols[c]
                    .iter()
                    .filter(|(_, v)| v.is_unit())
                    .min_by_key(|(r, _)| (self.row_cols[*r].len(), *r))
                    .map(|(r, _)| *r);
                match unit {
                    Some(r) => self.pivot(r, c)?,
                    None => {
                        self.active.remove(&(len, c));
                        self.no_unit.insert((len, c));
                    }
                }
            } else if let Some(&(_, c)) = self.no_unit.first() {
                let r = self.smallest_in_column(c);
                self.pivot(r, c)?;
            } else {
                return Some(self.diag);
            }
        }
    }

    fn smallest_in_column(&self, c: usize) -> usize {
        let mut best: Option<&(usize, C)> = None;
        for e in &self.cols[c] {
            best = match best {
                None => Some(e),
                Some(b) if e.1.abs_lt(&b.1) => Some(e),
                Some(b)
                    if !b.1.abs_lt(&e.1) && self.row_cols[e.0].len() < self.row_cols[b.0].len() =>
                {
                    Some(e)
                }
                keep => keep,
            };
        }
        best.expect("nonempty column").0
    }

    fn set_col(&mut self, c: usize, new: Vec<(usize, C)>) {
        let old = std::mem::take(&mut self.cols[c]);
        self.active.remove(&(old.len(), c));
        self.no_unit.remove(&(old.len(), c));
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < new.len() {
            let ro = old.get(i).map_or(usize::MAX, |e| e.0);
            let rn = new.get(j).map_or(usize::MAX, |e| e.0);
            if ro < rn {
                self.row_cols[ro].remove(&c);
                i += 1;
            } else if rn < ro {
                self.row_cols[rn].insert(c);
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        if !new.is_empty() {
            self.active.insert((new.len(), c));
        }
        self.cols[c] = new;
    }

    /// Eliminates with the pivot starting at `(r, c)` until column `c`
    /// splits off as a single diagonal entry.
    fn pivot(&mut self, mut r: usize, c: usize) -> Option<()> {
        loop {
            let others: Vec<usize> = self.row_cols[r].iter().copied().filter(|&x| x != c).collect();
            for c2 in others {
                let g = entry(&self.cols[c], r).clone();
                let a = entry(&self.cols[c2], r).clone();
                if let Some(q) = C::exact_div(&a, &g) {
                    let new2 = col_lin(&C::unit(), &self.cols[c2], &q.neg()?, &self.cols[c])?;
                    self.set_col(c2, new2);
                } else {
                    let (d, x, y) = C::ext_gcd(&g, &a)?;
                    let u = C::exact_div(&a, &d)?.neg()?;
                    let v = C::exact_div(&g, &d)?;
                    let new_c = col_lin(&x, &self.cols[c], &y, &self.cols[c2])?;
                    let new2 = col_lin(&u, &self.cols[c], &v, &self.cols[c2])?;
                    self.set_col(c, new_c);
                    self.set_col(c2, new2);
                }
            }
            // Row r is now supported only in column c, so row operations
            // against row r touch column c alone.
            let g = entry(&self.cols[c], r).clone();
            let mut reduced = Vec::with_capacity(self.cols[c].len());
            for (r2, b) in &self.cols[c] {
                if *r2 == r {
                    reduced.push((r, b.clone()));
                } else {
                    let m = C::rem_sym(b, &g)?;
                    if !m.is_nil() {
                        reduced.push((*r2, m));
                    }
                }
            }
            self.set_col(c, reduced);
            if self.cols[c].len() == 1 {
                self.diag.push(g.to_big().abs());
                self.set_col(c, Vec::new());
                return Some(());
            }
            r = self.smallest_in_column(c);
        }
    }
}

/// Smith normal form with unimodular transforms, by dense elimination.
pub fn snf_with_transforms(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut left_inv = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    // Each row operation E is applied to `a` and `left`; its inverse is
    // applied on the right of `left_inv`.
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = min_abs_entry(&a, t) else { break };
        swap_rows(&mut a, &mut left, &mut left_inv, t, pr);
        swap_cols(&mut a, &mut right, t, pc);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                add_row(&mut a, &mut left, &mut left_inv, i, t, &-q);
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                add_col(&mut a, &mut right, j, t, &-q);
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                let (pr, pc) = min_abs_entry_cross(&a, t);
                swap_rows(&mut a, &mut left, &mut left_inv, t, pr);
                swap_cols(&mut a, &mut right, t, pc);
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(a.get(i, j) % a.get(t, t)).is_zero());
            match bad {
                Some((i, _)) => add_row(&mut a, &mut left, &mut left_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
            left_inv.negate_col(t);
        }
        t += 1;
    }
    let diag_entries: Vec<BigInt> = (0..t).map(|i| a.get(i, i).clone()).collect();
    let factors = diag_entries.iter().filter(|d| !d.is_one()).cloned().collect();
    SmithDecomposition { form: SmithForm { rank: t, factors }, diag: a, left, left_inv, right }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.magnitude() < a.get(bi, bj).magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t` of the trailing block.
fn min_abs_entry_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let key = |i: usize, j: usize, best: &mut (usize, usize)| {
        let v = a.get(i, j);
        let b = a.get(best.0, best.1);
        if !v.is_zero() && (b.is_zero() || v.magnitude() < b.magnitude()) {
            *best = (i, j);
        }
    };
    for i in t..a.rows() {
        key(i, t, &mut best);
    }
    for j in t..a.cols() {
        key(t, j, &mut best);
    }
    best
}

fn swap_rows(a: &mut IntMatrix, left: &mut IntMatrix, left_inv: &mut IntMatrix, i: usize, j: usize) {
    a.swap_rows(i, j);
    left.swap_rows(i, j);
    left_inv.swap_cols(i, j);
}

fn swap_cols(a: &mut IntMatrix, right: &mut IntMatrix, i: usize, j: usize) {
    a.swap_cols(i, j);
    right.swap_cols(i, j);
}

/// `row[dst] += f * row[src]`.
fn add_row(a: &mut IntMatrix, left: &mut IntMatrix, left_inv: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    a.add_row_multiple(dst, src, f);
    left.add_row_multiple(dst, src, f);
    left_inv.add_col_multiple(src, dst, &-f);
}

fn add_col(a: &mut IntMatrix, right: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    a.add_col_multiple(dst, src, f);
    right.add_col_multiple(dst, src, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(rows: &[Vec<i64>]) -> SparseIntMatrix {
        SparseIntMatrix::from_dense(&IntMatrix::from_rows(rows).unwrap())
    }

    #[test]
    fn small_examples() {
        let f = snf(&sparse(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(snf(&SparseIntMatrix::identity(3)).diagonal(), vec![BigInt::one(); 3]);
        assert_eq!(snf(&SparseIntMatrix::zeros(2, 2)).rank(), 0);
        assert_eq!(snf(&SparseIntMatrix::zeros(0, 0)).rank(), 0);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 3;
        let m = sparse(&[vec![big, big - 1], vec![big - 2, big + 5]]);
        let f = snf(&m);
        let det = BigInt::from(big) * BigInt::from(big + 5) - BigInt::from(big - 1) * BigInt::from(big - 2);
        let prod: BigInt = f.diagonal().iter().product();
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        let d = snf_with_transforms(&m);
        assert_eq!(d.left.mul(&m).unwrap().mul(&d.right).unwrap(), d.diag);
        assert_eq!(d.left_inv.mul(&d.left).unwrap(), IntMatrix::identity(3));
        assert_eq!(d.form, snf(&SparseIntMatrix::from_dense(&m)));
        assert_eq!(d.form.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }
}
