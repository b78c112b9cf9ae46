use std::fmt;

use super::{FiniteField, GeometryError};

/// Square or rectangular matrix over a finite field, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| self.row(r).iter().map(u8::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl FMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        FMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    /// Diagonal matrix.
    pub fn diagonal(d: &[u8]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn mul(&self, f: &FiniteField, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = FMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, f: &FiniteField, v: &[u8]) -> Vec<u8> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0u8, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Entrywise application of the field involution.
    pub fn conj(&self, f: &FiniteField) -> FMatrix {
        FMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f.conj(x)).collect() }
    }

    pub fn determinant(&self, f: &FiniteField) -> u8 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1u8;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a.get(r, c) != 0) else { return 0 };
            if p != c {
                a.swap_rows(p, c);
                det = f.neg(det);
            }
            let pv = a.get(c, c);
            det = f.mul(det, pv);
            let pinv = f.inv(pv);
            for r in c + 1..n {
                let factor = f.mul(a.get(r, c), pinv);
                if factor != 0 {
                    a.add_row_multiple(f, r, c, f.neg(factor));
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<FMatrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut a = self.clone();
        let mut inv = FMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| a.get(r, c) != 0)?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let s = f.inv(a.get(c, c));
            a.scale_row(f, c, s);
            inv.scale_row(f, c, s);
            for r in 0..n {
                let factor = a.get(r, c);
                if r != c && factor != 0 {
                    let nf = f.neg(factor);
                    a.add_row_multiple(f, r, c, nf);
                    inv.add_row_multiple(f, r, c, nf);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, f: &FiniteField, r: usize, s: u8) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, f.mul(v, s));
        }
    }

    /// `row[dst] += s * row[src]`.
    fn add_row_multiple(&mut self, f: &FiniteField, dst: usize, src: usize, s: u8) {
        for c in 0..self.cols {
            let v = f.add(self.get(dst, c), f.mul(s, self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[&FMatrix]) -> FMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = FMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(off + r, off + c, b.get(r, c));
                }
            }
            off += b.rows;
        }
        m
    }

    /// The square submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> FMatrix {
        let mut m = FMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(f: &FiniteField, rows: &[Vec<u8>], n: usize) -> (Vec<Vec<u8>>, Vec<usize>) {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let s = f.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = f.neg(m[i][c]);
                for j in 0..n {
                    let v = f.add(m[i][j], f.mul(factor, m[r][j]));
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// A subspace of `F^n` stored by its canonical reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn span(f: &FiniteField, n: usize, vecs: &[Vec<u8>]) -> Subspace {
        Subspace { n, rows: rref(f, vecs, n).0 }
    }

    pub fn zero(n: usize) -> Subspace {
        Subspace { n, rows: Vec::new() }
    }

    pub fn whole(n: usize) -> Subspace {
        Subspace { n, rows: FMatrix::identity(n).data.chunks(n.max(1)).take(n).map(<[u8]>::to_vec).collect() }
    }

    /// Span of standard basis vectors with the given coordinate indices.
    pub fn coordinate(n: usize, coords: &[usize]) -> Subspace {
        let mut idx = coords.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let rows = idx
            .iter()
            .map(|&i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { n, rows }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn contains(&self, f: &FiniteField, v: &[u8]) -> bool {
        let mut all = self.rows.clone();
        all.push(v.to_vec());
        rref(f, &all, self.n).0.len() == self.dim()
    }

    pub fn contains_subspace(&self, f: &FiniteField, other: &Subspace) -> bool {
        self.sum(f, other).dim() == self.dim()
    }

    pub fn sum(&self, f: &FiniteField, other: &Subspace) -> Subspace {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Subspace::span(f, self.n, &all)
    }

    pub fn intersection_dim(&self, f: &FiniteField, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(f, other).dim()
    }

    /// `self + other = F^n` and `self ∩ other = 0`.
    pub fn is_complement(&self, f: &FiniteField, other: &Subspace) -> bool {
        self.dim() + other.dim() == self.n && self.sum(f, other).dim() == self.n
    }

    /// Image under `v -> g v`.
    pub fn image(&self, f: &FiniteField, g: &FMatrix) -> Subspace {
        let vs: Vec<Vec<u8>> = self.rows.iter().map(|r| g.mul_vec(f, r)).collect();
        Subspace::span(f, self.n, &vs)
    }

    /// Solutions `x` of `rows . x = 0` for the given row list, as a subspace.
    pub fn annihilator(f: &FiniteField, n: usize, rows: &[Vec<u8>]) -> Subspace {
        let (r, pivots) = rref(f, rows, n);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<u8>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0u8; n];
                v[fc] = 1;
                for (row, &pc) in r.iter().zip(&pivots) {
                    v[pc] = f.neg(row[fc]);
                }
                v
            })
            .collect();
        Subspace::span(f, n, &basis)
    }

    /// Text form: rows separated by `;`, entries by spaces.
    pub fn to_text(&self) -> String {
        self.rows.iter().map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join(";")
    }

    pub fn from_text(f: &FiniteField, n: usize, s: &str) -> Result<Subspace, GeometryError> {
        let mut rows = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let row: Vec<u8> = part
                .split_whitespace()
                .map(|t| t.parse::<u8>().ok().filter(|&x| (x as usize) < f.order()))
                .collect::<Option<_>>()
                .ok_or_else(|| GeometryError::Parse(format!("bad row {part:?}")))?;
            if row.len() != n {
                return Err(GeometryError::Parse(format!("row {part:?} has wrong length")));
            }
            rows.push(row);
        }
        let s = Subspace::span(f, n, &rows);
        if s.dim() != rows.len() {
            return Err(GeometryError::Parse("rows are dependent".into()));
        }
        Ok(s)
    }
}

/// All `k`-dimensional subspaces of `F_q^n`, ordered by pivot columns and
/// then by free entries.
pub fn enumerate_subspaces_in(f: &FiniteField, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let q = f.order() as u8;
    for pivots in combinations(n, k) {
        // Free positions: (row i, column c) with c > pivot_i and c not a pivot.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (p + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u8; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            let mut c = code;
            for &(i, col) in free.iter().rev() {
                rows[i][col] = (c % q as u64) as u8;
                c /= q as u64;
            }
            out.push(Subspace { n, rows });
        }
    }
    out
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_determinant() {
        let f = FiniteField::new(3).unwrap();
        let m = FMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), FMatrix::identity(3));
        // 1*(1-0) - 2*(0-2) = 5 = 2 mod 3
        assert_eq!(m.determinant(&f), 2);
    }

    #[test]
    fn annihilator_dimension() {
        let f = FiniteField::new(2).unwrap();
        let a = Subspace::annihilator(&f, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&f, &[1, 1, 1, 1]));
    }
}
