use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FMatrix, FiniteField, GeometryError, Subspace};

/// Which classical geometry a form describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FormKind {
    /// Alternating, `J = id`, `eps = -1`.
    Symplectic,
    /// Symmetric with the split quadratic form `Q(x) = sum x_{-i} x_i`,
    /// `J = id`, `eps = +1`; isotropic means totally singular.
    SplitOrthogonal,
    /// `J` the nontrivial involution of `GF(q0^2)`.
    Unitary { eps_negative: bool },
}

/// An `eps`-hermitian form of Witt index `m` on `F^{2m}` in a hyperbolic
/// basis ordered `e_{-m}, ..., e_{-1}, e_1, ..., e_m`, with
/// `h(e_{-i}, e_i) = 1` and `h(e_i, e_{-i}) = eps`.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    field: FiniteField,
    kind: FormKind,
    witt: usize,
    eps: u8,
    gram: FMatrix,
}

impl HermitianForm {
    pub fn new(field: &FiniteField, kind: FormKind, witt: usize) -> Result<Self, GeometryError> {
        if witt == 0 {
            return Err(GeometryError::InvalidForm("Witt index must be positive".into()));
        }
        let eps = match kind {
            FormKind::Symplectic => field.neg(1),
            FormKind::SplitOrthogonal => 1,
            FormKind::Unitary { eps_negative } => {
                if !field.has_involution() {
                    return Err(GeometryError::InvalidForm(format!("GF({}) has no involution", field.order())));
                }
                if eps_negative { field.neg(1) } else { 1 }
            }
        };
        let n = 2 * witt;
        let mut gram = FMatrix::zeros(n, n);
        for i in 1..=witt as i32 {
            gram.set(coord(witt, -i), coord(witt, i), 1);
            gram.set(coord(witt, i), coord(witt, -i), eps);
        }
        let form = HermitianForm { field: field.clone(), kind, witt, eps, gram };
        form.validate(0)?;
        Ok(form)
    }

    pub fn symplectic(field: &FiniteField, witt: usize) -> Result<Self, GeometryError> {
        Self::new(field, FormKind::Symplectic, witt)
    }

    pub fn split_orthogonal(field: &FiniteField, witt: usize) -> Result<Self, GeometryError> {
        Self::new(field, FormKind::SplitOrthogonal, witt)
    }

    pub fn unitary(field: &FiniteField, witt: usize, eps_negative: bool) -> Result<Self, GeometryError> {
        Self::new(field, FormKind::Unitary { eps_negative }, witt)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn witt_index(&self) -> usize {
        self.witt
    }

    pub fn dim(&self) -> usize {
        2 * self.witt
    }

    pub fn eps(&self) -> u8 {
        self.eps
    }

    pub fn gram(&self) -> &FMatrix {
        &self.gram
    }

    /// The involution attached to the form (identity unless unitary).
    pub fn j(&self, a: u8) -> u8 {
        match self.kind {
            FormKind::Unitary { .. } => self.field.conj(a),
            _ => a,
        }
    }

    /// `h(v, w) = sum J(v_a) g_ab w_b`.
    pub fn eval(&self, v: &[u8], w: &[u8]) -> u8 {
        let f = &self.field;
        let mut s = 0;
        for i in 1..=self.witt as i32 {
            let (a, b) = (coord(self.witt, -i), coord(self.witt, i));
            s = f.add(s, f.mul(self.j(v[a]), w[b]));
            s = f.add(s, f.mul(self.j(v[b]), f.mul(self.eps, w[a])));
        }
        s
    }

    /// `Q(x) = sum x_{-i} x_i`; meaningful for the orthogonal kind.
    pub fn quadratic(&self, v: &[u8]) -> u8 {
        let f = &self.field;
        (1..=self.witt as i32).fold(0, |s, i| f.add(s, f.mul(v[coord(self.witt, -i)], v[coord(self.witt, i)])))
    }

    /// Whether `v` is isotropic (singular for the orthogonal kind).
    pub fn is_isotropic_vector(&self, v: &[u8]) -> bool {
        self.eval(v, v) == 0 && (self.kind != FormKind::SplitOrthogonal || self.quadratic(v) == 0)
    }

    pub fn is_totally_isotropic(&self, x: &Subspace) -> bool {
        let b = x.basis();
        b.iter().all(|v| self.is_isotropic_vector(v)) && b.iter().enumerate().all(|(i, v)| b[i + 1..].iter().all(|w| self.eval(v, w) == 0))
    }

    /// `X^perp = { w : h(x, w) = 0 for all x in X }`.
    pub fn perp(&self, x: &Subspace) -> Subspace {
        let f = &self.field;
        let rows: Vec<Vec<u8>> = x
            .basis()
            .iter()
            .map(|v| {
                (0..self.dim())
                    .map(|b| (0..self.dim()).fold(0, |s, a| f.add(s, f.mul(self.j(v[a]), self.gram.get(a, b)))))
                    .collect()
            })
            .collect();
        Subspace::annihilator(f, self.dim(), &rows)
    }

    /// Whether `g` preserves the form (and the quadratic form, if any).
    pub fn preserved_by(&self, g: &FMatrix) -> bool {
        let f = &self.field;
        let n = self.dim();
        let lhs = g.conj_if(f, self.kind).transpose().mul(f, &self.gram).mul(f, g);
        if lhs != self.gram {
            return false;
        }
        self.kind != FormKind::SplitOrthogonal || (0..n).all(|k| self.quadratic(&g.column(k)) == 0)
    }

    /// Sesquilinearity, `eps`-hermitian symmetry and, in characteristic
    /// two, trace values, checked on seeded random vectors.
    pub fn validate(&self, seed: u64) -> Result<(), GeometryError> {
        let f = &self.field;
        let n = self.dim();
        let q = f.order() as u8;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let traces: Vec<u8> = f.elements().map(|a| f.add(a, f.mul(self.eps, self.j(a)))).collect();
        for _ in 0..64 {
            let v: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q)).collect();
            let w: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q)).collect();
            let a = rng.gen_range(0..q);
            let av: Vec<u8> = v.iter().map(|&x| f.mul(a, x)).collect();
            if self.eval(&av, &w) != f.mul(self.j(a), self.eval(&v, &w)) {
                return Err(GeometryError::InvalidForm("not semilinear in the first argument".into()));
            }
            if self.eval(&w, &v) != f.mul(self.j(self.eval(&v, &w)), self.eps) {
                return Err(GeometryError::InvalidForm("h(w, v) differs from eps h(v, w)^J".into()));
            }
            if f.characteristic() == 2 && !traces.contains(&self.eval(&v, &v)) {
                return Err(GeometryError::InvalidForm("form is not trace-valued".into()));
            }
        }
        Ok(())
    }
}

impl FMatrix {
    fn conj_if(&self, f: &FiniteField, kind: FormKind) -> FMatrix {
        match kind {
            FormKind::Unitary { .. } => self.conj(f),
            _ => self.clone(),
        }
    }
}

/// Coordinate position of `e_i`, `i` in `+-1..=+-m`.
pub fn coord(m: usize, i: i32) -> usize {
    if i < 0 { (m as i32 + i) as usize } else { m + i as usize - 1 }
}

/// Inverse of [`coord`].
pub fn label(m: usize, pos: usize) -> i32 {
    if pos < m { pos as i32 - m as i32 } else { (pos - m) as i32 + 1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_pairing() {
        let f = FiniteField::new(3).unwrap();
        let h = HermitianForm::symplectic(&f, 2).unwrap();
        let e = |i: i32| {
            let mut v = vec![0u8; 4];
            v[coord(2, i)] = 1;
            v
        };
        assert_eq!(h.eval(&e(-1), &e(1)), 1);
        assert_eq!(h.eval(&e(1), &e(-1)), 2);
        assert_eq!(h.eval(&e(1), &e(2)), 0);
        assert_eq!((0..4).map(|p| label(2, p)).collect::<Vec<_>>(), vec![-2, -1, 1, 2]);
    }

    #[test]
    fn unitary_needs_an_involution() {
        assert!(HermitianForm::unitary(&FiniteField::new(3).unwrap(), 1, false).is_err());
        assert!(HermitianForm::unitary(&FiniteField::new(4).unwrap(), 2, false).is_ok());
    }
}
