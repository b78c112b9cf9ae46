use std::collections::{HashMap, HashSet};

use crate::geometry::{FMatrix, FiniteField, FormKind, HermitianForm};

use super::{closure, FiniteGroup, GroupError};

/// Largest group order enumerated by default.
pub const MAX_GROUP_ORDER: usize = 25_000;

/// A finite group of invertible matrices over `F_q`, stored as its full
/// element list. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: FiniteField,
    degree: usize,
    generators: Vec<FMatrix>,
    elements: Vec<FMatrix>,
    index: HashMap<FMatrix, u32>,
    form: Option<HermitianForm>,
}

/// Closure of `gens` under multiplication, bounded by `cap` elements.
pub fn generate_group(field: &FiniteField, degree: usize, gens: &[FMatrix], cap: usize) -> Result<MatrixGroup, GroupError> {
    MatrixGroup::generate(field, degree, gens, cap)
}

impl MatrixGroup {
    pub fn generate(field: &FiniteField, degree: usize, gens: &[FMatrix], cap: usize) -> Result<Self, GroupError> {
        for g in gens {
            if g.rows() != degree || g.cols() != degree || g.determinant(field) == 0 {
                return Err(GroupError::Invalid("generators must be invertible of the stated degree".into()));
            }
        }
        let elements = closure(FMatrix::identity(degree), gens, |a, b| a.mul(field, b), cap)?;
        Ok(Self::from_elements(field, degree, gens.to_vec(), elements))
    }

    fn from_elements(field: &FiniteField, degree: usize, generators: Vec<FMatrix>, elements: Vec<FMatrix>) -> Self {
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
        MatrixGroup { field: field.clone(), degree, generators, elements, index, form: None }
    }

    /// The subgroup consisting of `members` (indices into `self`). A small
    /// generating set is chosen greedily and its closure must reproduce
    /// exactly the member set.
    pub fn subgroup(&self, members: &[u32]) -> Result<MatrixGroup, GroupError> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::NotSubgroup);
        }
        let f = &self.field;
        let wanted: HashSet<u32> = members.iter().copied().collect();
        let mut gens: Vec<FMatrix> = Vec::new();
        let mut have: Vec<FMatrix> = vec![FMatrix::identity(self.degree)];
        let mut have_set: HashSet<u32> = HashSet::from([0]);
        for &m in &members {
            if have_set.contains(&m) {
                continue;
            }
            gens.push(self.elements[m as usize].clone());
            have = closure(FMatrix::identity(self.degree), &gens, |a, b| a.mul(f, b), members.len())
                .map_err(|_| GroupError::NotSubgroup)?;
            have_set = have.iter().map(|g| self.index_of(g).ok_or(GroupError::NotSubgroup)).collect::<Result<_, _>>()?;
            if !have_set.is_subset(&wanted) {
                return Err(GroupError::NotSubgroup);
            }
        }
        let mut sub = Self::from_elements(f, self.degree, gens, have);
        sub.form = self.form.clone();
        Ok(sub)
    }

    /// Elements satisfying `keep` (assumed to define a subgroup).
    pub fn filter(&self, keep: impl Fn(&FMatrix) -> bool) -> Result<MatrixGroup, GroupError> {
        let members: Vec<u32> = (0..self.order() as u32).filter(|&i| keep(&self.elements[i as usize])).collect();
        self.subgroup(&members)
    }

    /// Attaches a form after checking that every element preserves it.
    pub fn with_form(mut self, form: &HermitianForm) -> Result<Self, GroupError> {
        if let Some(g) = self.elements.iter().find(|g| !form.preserved_by(g)) {
            return Err(GroupError::Invalid(format!("element {g:?} does not preserve the form")));
        }
        self.form = Some(form.clone());
        Ok(self)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[FMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[FMatrix] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &FMatrix {
        &self.elements[i as usize]
    }

    pub fn form(&self) -> Option<&HermitianForm> {
        self.form.as_ref()
    }

    pub fn index_of(&self, g: &FMatrix) -> Option<u32> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &FMatrix) -> bool {
        self.index.contains_key(g)
    }

    /// Whether the element set is closed under products and inverses.
    pub fn is_closed(&self) -> bool {
        let f = &self.field;
        self.elements.iter().all(|a| a.inverse(f).is_some_and(|i| self.contains(&i)))
            && self.elements.iter().all(|a| self.generators.iter().all(|b| self.contains(&a.mul(f, b))))
    }

    /// Multiplication table, for orders within the table cap.
    pub fn cayley(&self) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::from_elements(&self.elements, |a, b| a.mul(&self.field, b))
    }

    /// Indices in `self` of the elements of `sub`.
    pub fn embedding_of(&self, sub: &MatrixGroup) -> Result<Vec<u32>, GroupError> {
        sub.elements.iter().map(|g| self.index_of(g).ok_or(GroupError::NotSubgroup)).collect()
    }
}

/// Transvection `I + a E_{ij}`.
pub fn transvection(n: usize, i: usize, j: usize, a: u8) -> FMatrix {
    let mut m = FMatrix::identity(n);
    m.set(i, j, a);
    m
}

fn diag_with(n: usize, i: usize, a: u8) -> FMatrix {
    let mut m = FMatrix::identity(n);
    m.set(i, i, a);
    m
}

/// Generators of `SL_n(F_q)`: transvections with an additive basis of
/// scalars (powers of a primitive element span `F_q` over `F_p`).
pub fn sl_generators(f: &FiniteField, n: usize) -> Vec<FMatrix> {
    let prim = f.primitive_element();
    let scalars: Vec<u8> = (0..f.degree()).map(|k| f.pow(prim, k as u32)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.extend(scalars.iter().map(|&a| transvection(n, i, j, a)));
            }
        }
    }
    out
}

/// Generators of `GL_n(F_q)`: those of `SL_n` and `diag(a, 1, ..., 1)` for a
/// primitive `a`.
pub fn gl_generators(f: &FiniteField, n: usize) -> Vec<FMatrix> {
    let mut out = sl_generators(f, n);
    if f.order() > 2 {
        out.push(diag_with(n, 0, f.primitive_element()));
    }
    out
}

pub fn general_linear(f: &FiniteField, n: usize) -> Result<MatrixGroup, GroupError> {
    check_order(gl_order(n, f.order()))?;
    MatrixGroup::generate(f, n, &gl_generators(f, n), MAX_GROUP_ORDER)
}

pub fn special_linear(f: &FiniteField, n: usize) -> Result<MatrixGroup, GroupError> {
    check_order(gl_order(n, f.order()) / (f.order() as u128 - 1))?;
    MatrixGroup::generate(f, n, &sl_generators(f, n), MAX_GROUP_ORDER)
}

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`, saturating.
pub fn gl_order(n: usize, q: usize) -> u128 {
    let q = q as u128;
    (0..n as u32).fold(1u128, |acc, i| acc.saturating_mul(q.saturating_pow(n as u32) - q.saturating_pow(i)))
}

fn check_order(order: u128) -> Result<(), GroupError> {
    if order > MAX_GROUP_ORDER as u128 {
        return Err(GroupError::CapExceeded(format!("group order {order} exceeds {MAX_GROUP_ORDER}")));
    }
    Ok(())
}

/// All matrices preserving `form` (and its quadratic form in the split
/// orthogonal case), found column by column: column `a` must pair with the
/// earlier columns as the basis vectors do.
pub fn isometry_group(form: &HermitianForm) -> Result<MatrixGroup, GroupError> {
    let f = form.field();
    let n = form.dim();
    let q = f.order();
    if (q as u128).saturating_pow((n * n) as u32) > 1 << 40 && n > 4 {
        return Err(GroupError::CapExceeded(format!("isometry search over F_{q}^{n} is too large")));
    }
    let vectors: Vec<Vec<u8>> = (0..q.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = (x % q) as u8;
                    x /= q;
                    d
                })
                .collect()
        })
        .collect();
    let orthogonal = form.kind() == FormKind::SplitOrthogonal;
    let basis: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
    let mut cols: Vec<Vec<u8>> = Vec::new();
    let mut found: Vec<FMatrix> = Vec::new();
    let mut stack: Vec<usize> = vec![0];
    // Depth-first search over candidate indices per column.
    while !stack.is_empty() {
        let a = stack.len() - 1;
        let top = &mut stack[a];
        if *top >= vectors.len() {
            stack.pop();
            cols.pop();
            continue;
        }
        let v = &vectors[*top];
        *top += 1;
        let ok = (if orthogonal { form.quadratic(v) == form.quadratic(&basis[a]) } else { true })
            && form.eval(v, v) == form.eval(&basis[a], &basis[a])
            && (0..a).all(|b| {
                form.eval(&cols[b], v) == form.eval(&basis[b], &basis[a]) && form.eval(v, &cols[b]) == form.eval(&basis[a], &basis[b])
            });
        if !ok {
            continue;
        }
        if a + 1 == n {
            let mut m = FMatrix::zeros(n, n);
            for (c, col) in cols.iter().chain(std::iter::once(v)).enumerate() {
                for (r, &x) in col.iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            found.push(m);
            if found.len() > MAX_GROUP_ORDER {
                return Err(GroupError::CapExceeded(format!("isometry group exceeds {MAX_GROUP_ORDER} elements")));
            }
        } else {
            cols.push(v.clone());
            stack.push(0);
        }
    }
    let id = FMatrix::identity(n);
    found.sort_by_key(|m| m != &id);
    let g = MatrixGroup::from_elements(f, n, found.clone(), found);
    g.with_form(form)
}
