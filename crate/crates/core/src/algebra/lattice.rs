use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sparse::{axpy, lin_comb};
use super::{snf_with_transforms, AlgebraError, FgAbGroup, IntMatrix, SparseIntMatrix, SparseVec};

/// Incremental column echelon form of a lattice in `Z^n`. Every basis vector
/// has a distinct pivot, namely its largest nonzero row, with a positive
/// pivot entry.
#[derive(Clone, Debug, Default)]
pub struct ColumnEchelon {
    basis: BTreeMap<usize, Row>,
    track: bool,
    kernel: Vec<SparseVec>,
    inserted: usize,
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    transform: SparseVec,
}

fn lead(v: &[(usize, BigInt)]) -> Option<(usize, &BigInt)> {
    v.last().map(|(r, x)| (*r, x))
}

impl ColumnEchelon {
    /// With `track`, each basis vector remembers its expression in the
    /// inserted generators and relations among generators are collected.
    pub fn new(track: bool) -> Self {
        ColumnEchelon { track, ..Default::default() }
    }

    pub fn from_generators<'a>(gens: impl IntoIterator<Item = &'a SparseVec>, track: bool) -> Self {
        let mut e = ColumnEchelon::new(track);
        for g in gens {
            e.insert(g.clone());
        }
        e
    }

    pub fn insert(&mut self, v: SparseVec) {
        let idx = self.inserted;
        self.inserted += 1;
        let t = if self.track { vec![(idx, BigInt::one())] } else { Vec::new() };
        self.insert_with(v, t);
    }

    fn insert_with(&mut self, mut v: SparseVec, mut t: SparseVec) {
        loop {
            let Some((p, a)) = lead(&v) else {
                if self.track && !t.is_empty() {
                    self.kernel.push(t);
                }
                return;
            };
            let a = a.clone();
            let Some(b) = self.basis.get_mut(&p) else {
                if a.is_negative() {
                    v.iter_mut().for_each(|(_, x)| *x = -std::mem::take(x));
                    t.iter_mut().for_each(|(_, x)| *x = -std::mem::take(x));
                }
                self.basis.insert(p, Row { vec: v, transform: t });
                return;
            };
            let g = lead(&b.vec).expect("basis vectors are nonzero").1.clone();
            let (q, r) = a.div_rem(&g);
            if r.is_zero() {
                let nq = -q;
                v = axpy(&v, &nq, &b.vec);
                if self.track {
                    t = axpy(&t, &nq, &b.transform);
                }
            } else {
                // Unimodular 2x2 step: the pivot becomes gcd(g, a) and the
                // partner's pivot entry vanishes.
                let e = g.extended_gcd(&a);
                let (d, x, y) = if e.gcd.is_negative() { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
                let u = -(&a / &d);
                let w = &g / &d;
                let new_b = lin_comb(&x, &b.vec, &y, &v);
                let new_v = lin_comb(&u, &b.vec, &w, &v);
                if self.track {
                    let new_bt = lin_comb(&x, &b.transform, &y, &t);
                    t = lin_comb(&u, &b.transform, &w, &t);
                    b.transform = new_bt;
                }
                b.vec = new_b;
                v = new_v;
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors ordered by pivot row.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.basis.values().map(|r| r.vec.clone()).collect()
    }

    /// Pivot rows in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis.keys().copied().collect()
    }

    /// Expressions of the basis vectors in the inserted generators.
    pub fn transforms(&self) -> Vec<SparseVec> {
        self.basis.values().map(|r| r.transform.clone()).collect()
    }

    /// A basis of the relation lattice among the inserted generators.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Coordinates of `v` in [`Self::basis`], or the unreduced remainder.
    pub fn coordinates(&self, v: &[(usize, BigInt)]) -> Result<SparseVec, SparseVec> {
        let index: BTreeMap<usize, usize> = self.basis.keys().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut v = v.to_vec();
        let mut coords: Vec<(usize, BigInt)> = Vec::new();
        while let Some((p, a)) = lead(&v) {
            let Some(b) = self.basis.get(&p) else { return Err(v) };
            let g = lead(&b.vec).expect("nonzero").1;
            let (q, r) = a.div_rem(g);
            if !r.is_zero() {
                return Err(v);
            }
            v = axpy(&v, &-&q, &b.vec);
            coords.push((index[&p], q));
        }
        coords.sort_by_key(|(i, _)| *i);
        Ok(coords)
    }
}

/// A basis of the kernel of `m`, as sparse column vectors in `Z^{m.cols()}`.
pub fn kernel_basis(m: &SparseIntMatrix) -> Vec<SparseVec> {
    let e = ColumnEchelon::from_generators(m.columns(), true);
    let mut k = e.kernel().to_vec();
    // Columns that were zero from the start are kernel vectors too; they are
    // recorded by `insert_with` as unit transforms.
    k.sort();
    k
}

/// A sublattice of `Z^n` held in column echelon form.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    echelon: ColumnEchelon,
}

impl Lattice {
    pub fn new(ambient: usize, gens: &[SparseVec]) -> Result<Self, AlgebraError> {
        check_ambient(ambient, gens)?;
        Ok(Lattice { ambient, echelon: ColumnEchelon::from_generators(gens, false) })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> Vec<SparseVec> {
        self.echelon.basis()
    }

    pub fn contains(&self, v: &[(usize, BigInt)]) -> bool {
        self.echelon.coordinates(v).is_ok()
    }

    pub fn coordinates(&self, v: &[(usize, BigInt)]) -> Result<SparseVec, AlgebraError> {
        self.echelon.coordinates(v).map_err(|_| AlgebraError::NotContained { witness: v.to_vec() })
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }
}

fn check_ambient(ambient: usize, gens: &[SparseVec]) -> Result<(), AlgebraError> {
    for g in gens {
        if let Some((r, _)) = g.last() {
            if *r >= ambient {
                return Err(AlgebraError::DimensionMismatch(format!("vector index {r} outside Z^{ambient}")));
            }
        }
    }
    Ok(())
}

/// The quotient `U / V` of lattices `V <= U <= Z^n`, with explicit
/// generators and a coordinate map.
#[derive(Clone, Debug)]
pub struct Subquotient {
    group: FgAbGroup,
    u: Lattice,
    /// Change of coordinates from the echelon basis of `U` to the adapted
    /// basis; rows past `gens.len()` are the trivial summands.
    left: IntMatrix,
    /// Indices into the adapted basis that survive in the quotient.
    kept: Vec<usize>,
    /// Order of each kept generator; zero marks an infinite cyclic summand.
    orders: Vec<BigInt>,
    gens: Vec<SparseVec>,
}

impl Subquotient {
    pub fn new(ambient: usize, u_gens: &[SparseVec], v_gens: &[SparseVec]) -> Result<Self, AlgebraError> {
        check_ambient(ambient, v_gens)?;
        let u = Lattice::new(ambient, u_gens)?;
        let k = u.rank();
        let mut cols = Vec::with_capacity(v_gens.len());
        for v in v_gens {
            let c = u.echelon.coordinates(v).map_err(|_| AlgebraError::NotContained { witness: v.clone() })?;
            cols.push(c);
        }
        let coord = SparseIntMatrix::from_columns_unchecked(k, cols).to_dense();
        let dec = snf_with_transforms(&coord);
        let rank = dec.form.rank();
        let basis = u.basis();
        let mut kept = Vec::new();
        let mut orders = Vec::new();
        let mut gens = Vec::new();
        for i in 0..k {
            let order = if i < rank { dec.diag.get(i, i).clone() } else { BigInt::zero() };
            if order.is_one() {
                continue;
            }
            // Adapted basis vector i is column i of basis * left_inv.
            let mut g: SparseVec = Vec::new();
            for (j, b) in basis.iter().enumerate() {
                let c = dec.left_inv.get(j, i);
                if !c.is_zero() {
                    g = axpy(&g, c, b);
                }
            }
            kept.push(i);
            orders.push(order);
            gens.push(g);
        }
        let free = orders.iter().filter(|o| o.is_zero()).count();
        let torsion = orders.iter().filter(|o| !o.is_zero()).cloned();
        let group = FgAbGroup::new(free, torsion);
        Ok(Subquotient { group, u, left: dec.left, kept, orders, gens })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    /// Ambient representatives of the cyclic generators of `U / V`.
    pub fn generators(&self) -> &[SparseVec] {
        &self.gens
    }

    /// Generator orders, zero meaning infinite.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Coordinates of the class of `x` in terms of [`Self::generators`],
    /// reduced into `[0, order)` for torsion generators.
    pub fn coords(&self, x: &[(usize, BigInt)]) -> Result<Vec<BigInt>, AlgebraError> {
        let c = self.u.coordinates(x)?;
        let mut out = Vec::with_capacity(self.kept.len());
        for (&i, order) in self.kept.iter().zip(&self.orders) {
            let mut s = BigInt::zero();
            for (j, v) in &c {
                s += self.left.get(i, *j) * v;
            }
            out.push(if order.is_zero() { s } else { s.mod_floor(order) });
        }
        Ok(out)
    }

    /// Whether `x` in `U` represents zero in `U / V`.
    pub fn is_trivial(&self, x: &[(usize, BigInt)]) -> Result<bool, AlgebraError> {
        Ok(self.coords(x)?.iter().all(Zero::is_zero))
    }

    pub fn upper(&self) -> &Lattice {
        &self.u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(i, x)| (*i, BigInt::from(*x))).collect()
    }

    #[test]
    fn kernel_of_hollow_triangle_boundary() {
        // edges 01, 02, 12 over vertices 0, 1, 2
        let d = SparseIntMatrix::from_triplets(3, 3, [(0, 0, -1), (1, 0, 1), (0, 1, -1), (2, 1, 1), (1, 2, -1), (2, 2, 1)])
            .unwrap();
        let k = kernel_basis(&d);
        assert_eq!(k.len(), 1);
        assert!(d.mul_vec(&k[0]).is_empty());
    }

    #[test]
    fn subquotient_examples() {
        let e = |i| v(&[(i, 1)]);
        let sq = Subquotient::new(2, &[e(0), e(1)], &[]).unwrap();
        assert_eq!(sq.group(), &FgAbGroup::free(2));
        let sq = Subquotient::new(1, &[e(0)], &[v(&[(0, 3)])]).unwrap();
        assert_eq!(sq.group(), &FgAbGroup::cyclic(3));
        assert_eq!(sq.coords(&v(&[(0, 7)])).unwrap().len(), 1);
        assert!(sq.is_trivial(&v(&[(0, 6)])).unwrap());
        let err = Subquotient::new(1, &[v(&[(0, 2)])], &[e(0)]).unwrap_err();
        assert!(matches!(err, AlgebraError::NotContained { .. }));
    }

    #[test]
    fn generators_have_stated_orders() {
        let u = [v(&[(0, 1), (1, 1)]), v(&[(1, 2), (2, 1)]), v(&[(2, 3)])];
        let w = [v(&[(0, 2), (1, 2)]), v(&[(1, 4), (2, 5)])];
        let sq = Subquotient::new(3, &u, &w).unwrap();
        for (g, o) in sq.generators().iter().zip(sq.orders()) {
            assert!(sq.upper().contains(g));
            if !o.is_zero() {
                let scaled: SparseVec = g.iter().map(|(i, x)| (*i, x * o)).collect();
                assert!(sq.is_trivial(&scaled).unwrap());
                assert!(!sq.is_trivial(g).unwrap());
            }
        }
    }
}
