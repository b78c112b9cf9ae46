use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraError, IntMatrix};

/// A sparse integer vector: `(index, value)` pairs sorted by index with no
/// stored zeros.
pub type SparseVec = Vec<(usize, BigInt)>;

/// `a + c * b` for sparse vectors.
pub(crate) fn axpy(a: &[(usize, BigInt)], c: &BigInt, b: &[(usize, BigInt)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = c * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `x * a + y * b`.
pub(crate) fn lin_comb(x: &BigInt, a: &[(usize, BigInt)], y: &BigInt, b: &[(usize, BigInt)]) -> SparseVec {
    let scaled: SparseVec = a.iter().map(|(i, v)| (*i, x * v)).filter(|(_, v)| !v.is_zero()).collect();
    axpy(&scaled, y, b)
}

pub(crate) fn sparse_get(v: &[(usize, BigInt)], idx: usize) -> Option<&BigInt> {
    v.binary_search_by_key(&idx, |(i, _)| *i).ok().map(|p| &v[p].1)
}

/// Normalizes an unsorted list of `(index, value)` pairs by summing
/// duplicates and dropping zeros.
pub(crate) fn normalize(mut v: Vec<(usize, BigInt)>) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Exact sparse integer matrix, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseIntMatrix { rows: n, cols: (0..n).map(|i| vec![(i, BigInt::one())]).collect() }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are
    /// summed and zeros dropped.
    pub fn from_triplets<I, T>(rows: usize, cols: usize, triplets: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
        T: Into<BigInt>,
    {
        let mut buckets: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(AlgebraError::OutOfBounds { row: r, col: c, rows, cols });
            }
            buckets[c].push((r, v.into()));
        }
        Ok(SparseIntMatrix { rows, cols: buckets.into_iter().map(normalize).collect() })
    }

    /// Builds a matrix from already-normalized sparse columns.
    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Result<Self, AlgebraError> {
        for (c, col) in cols.iter().enumerate() {
            let sorted = col.windows(2).all(|w| w[0].0 < w[1].0);
            if !sorted || col.iter().any(|(_, v)| v.is_zero()) {
                return Err(AlgebraError::DimensionMismatch(format!("column {c} is not normalized")));
            }
            if let Some((r, _)) = col.last() {
                if *r >= rows {
                    return Err(AlgebraError::OutOfBounds { row: *r, col: c, rows, cols: cols.len() });
                }
            }
        }
        Ok(SparseIntMatrix { rows, cols })
    }

    pub(crate) fn from_columns_unchecked(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.iter().all(|(r, v)| *r < rows && !v.is_zero())));
        SparseIntMatrix { rows, cols }
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let cols = (0..m.cols())
            .map(|c| (0..m.rows()).filter_map(|r| {
                let v = m.get(r, c);
                (!v.is_zero()).then(|| (r, v.clone()))
            }).collect())
            .collect();
        SparseIntMatrix { rows: m.rows(), cols }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols.len());
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn columns_vec(&self) -> Vec<SparseVec> {
        self.cols.clone()
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        sparse_get(&self.cols[c], r).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// All nonzero entries sorted by `(row, col)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        let mut all: Vec<(usize, usize, &BigInt)> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
            .collect();
        all.sort_by_key(|(r, c, _)| (*r, *c));
        all.into_iter()
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        SparseIntMatrix { rows: self.cols.len(), cols }
    }

    pub fn mul_vec(&self, x: &[(usize, BigInt)]) -> SparseVec {
        let mut acc: Vec<(usize, BigInt)> = Vec::new();
        for (j, xj) in x {
            for (r, v) in &self.cols[*j] {
                acc.push((*r, v * xj));
            }
        }
        normalize(acc)
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix, AlgebraError> {
        if self.cols() != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let cols = other.cols.iter().map(|c| self.mul_vec(c)).collect();
        Ok(SparseIntMatrix { rows: self.rows, cols })
    }

    pub fn add(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix, AlgebraError> {
        if self.rows != other.rows || self.cols() != other.cols() {
            return Err(AlgebraError::DimensionMismatch("cannot add matrices of different shapes".into()));
        }
        let one = BigInt::one();
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| axpy(a, &one, b)).collect();
        Ok(SparseIntMatrix { rows: self.rows, cols })
    }

    pub fn scale(&self, c: &BigInt) -> SparseIntMatrix {
        if c.is_zero() {
            return SparseIntMatrix::zeros(self.rows, self.cols());
        }
        let cols = self.cols.iter().map(|col| col.iter().map(|(r, v)| (*r, v * c)).collect()).collect();
        SparseIntMatrix { rows: self.rows, cols }
    }

    /// Keeps the given rows (in the given order) and renumbers them.
    pub fn select_rows(&self, keep: &[usize]) -> SparseIntMatrix {
        let mut map = vec![usize::MAX; self.rows];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let cols = self
            .cols
            .iter()
            .map(|col| {
                let mut c: SparseVec =
                    col.iter().filter(|(r, _)| map[*r] != usize::MAX).map(|(r, v)| (map[*r], v.clone())).collect();
                c.sort_by_key(|(r, _)| *r);
                c
            })
            .collect();
        SparseIntMatrix { rows: keep.len(), cols }
    }

    pub fn select_cols(&self, keep: &[usize]) -> SparseIntMatrix {
        SparseIntMatrix { rows: self.rows, cols: keep.iter().map(|&c| self.cols[c].clone()).collect() }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &SparseIntMatrix, b: &SparseIntMatrix, c: &SparseIntMatrix, d: &SparseIntMatrix) -> Result<SparseIntMatrix, AlgebraError> {
        if a.rows != b.rows || c.rows != d.rows || a.cols() != c.cols() || b.cols() != d.cols() {
            return Err(AlgebraError::DimensionMismatch("incompatible block shapes".into()));
        }
        let top = a.rows;
        let mut cols = Vec::with_capacity(a.cols() + b.cols());
        for (x, y) in a.cols.iter().zip(&c.cols).chain(b.cols.iter().zip(&d.cols)) {
            let mut col = x.clone();
            col.extend(y.iter().map(|(r, v)| (r + top, v.clone())));
            cols.push(col);
        }
        Ok(SparseIntMatrix { rows: a.rows + c.rows, cols })
    }

    pub fn hstack(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix, AlgebraError> {
        if self.rows != other.rows {
            return Err(AlgebraError::DimensionMismatch("hstack needs equal row counts".into()));
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(SparseIntMatrix { rows: self.rows, cols })
    }

    /// Serializes to the coordinate text format: a header `rows cols nnz`
    /// followed by one `row col value` line per entry, sorted by (row, col).
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols(), self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<SparseIntMatrix, AlgebraError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| AlgebraError::Parse("missing header".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| AlgebraError::Parse(format!("bad header token {t:?}"))))
            .collect::<Result<_, _>>()?;
        let [rows, cols, nnz] = h[..] else {
            return Err(AlgebraError::Parse("header must be `rows cols nnz`".into()));
        };
        let mut triplets = Vec::with_capacity(nnz);
        let mut last: Option<(usize, usize)> = None;
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(AlgebraError::Parse(format!("bad entry line {line:?}")));
            }
            let r: usize = t[0].parse().map_err(|_| AlgebraError::Parse(format!("bad row in {line:?}")))?;
            let c: usize = t[1].parse().map_err(|_| AlgebraError::Parse(format!("bad col in {line:?}")))?;
            let v: BigInt = t[2].parse().map_err(|_| AlgebraError::Parse(format!("bad value in {line:?}")))?;
            if v.is_zero() {
                return Err(AlgebraError::Parse(format!("explicit zero entry in {line:?}")));
            }
            if last.is_some_and(|l| l >= (r, c)) {
                return Err(AlgebraError::Parse("entries must be strictly sorted by (row, col)".into()));
            }
            last = Some((r, c));
            triplets.push((r, c, v));
        }
        if triplets.len() != nnz {
            return Err(AlgebraError::Parse(format!("header announces {nnz} entries, found {}", triplets.len())));
        }
        SparseIntMatrix::from_triplets(rows, cols, triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_and_order() {
        let m = SparseIntMatrix::from_triplets(3, 2, [(2, 0, 5), (0, 1, -1), (0, 0, 3), (1, 1, 0)]).unwrap();
        let text = m.to_text();
        assert_eq!(text, "3 2 3\n0 0 3\n0 1 -1\n2 0 5\n");
        assert_eq!(SparseIntMatrix::from_text(&text).unwrap(), m);
    }

    #[test]
    fn rejects_out_of_bounds_and_bad_text() {
        assert!(SparseIntMatrix::from_triplets(2, 2, [(2, 0, 1)]).is_err());
        assert!(SparseIntMatrix::from_text("2 2 1\n1 1 0\n").is_err());
        assert!(SparseIntMatrix::from_text("2 2 2\n1 1 1\n0 0 1\n").is_err());
        assert!(SparseIntMatrix::from_text("2 2 2\n0 0 1\n").is_err());
    }

    #[test]
    fn products_and_blocks() {
        let a = SparseIntMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 1, 2), (1, 1, 3)]).unwrap();
        let p = a.mul(&a).unwrap();
        assert_eq!(p.get(0, 1), BigInt::from(8));
        let z = SparseIntMatrix::zeros(2, 2);
        let b = SparseIntMatrix::block(&a, &z, &z, &a).unwrap();
        assert_eq!(b.get(3, 3), BigInt::from(3));
        assert_eq!(b.nnz(), 6);
        assert_eq!(a.transpose().get(1, 0), BigInt::from(2));
    }
}
