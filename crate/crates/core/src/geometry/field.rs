use std::fmt;
use std::sync::Arc;

use super::GeometryError;

/// Largest field order supported by the table representation.
pub const MAX_FIELD_ORDER: usize = 16;

/// A finite field `GF(p^e)` with `p^e <= 16`. Element `x` encodes the
/// polynomial `sum c_i t^i` with base-`p` digits `c_i`, reduced modulo the
/// lexicographically smallest monic irreducible of degree `e`.
#[derive(Clone)]
pub struct FiniteField(Arc<Tables>);

struct Tables {
    p: u8,
    e: u8,
    q: u8,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    conj: Vec<u8>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn prime_power(q: usize) -> Option<(u8, u8)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u8, e))
}

/// Coefficient lists, lowest degree first.
fn poly_mul_mod(a: &[u8], b: &[u8], modulus: &[u8], p: u8) -> Vec<u8> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u16; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p as u16;
        }
    }
    for d in (e..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        for (k, &m) in modulus.iter().enumerate() {
            let idx = d - e + k;
            prod[idx] = (prod[idx] + (p as u16 - c) * m as u16) % p as u16;
        }
    }
    prod.truncate(e);
    prod.resize(e, 0);
    prod.into_iter().map(|x| x as u8).collect()
}

fn digits(x: u8, p: u8, e: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(e as usize);
    let mut x = x;
    for _ in 0..e {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(d: &[u8], p: u8) -> u8 {
    d.iter().rev().fold(0u8, |acc, &c| acc * p + c)
}

/// Monic polynomials of degree `e` over `F_p` in lexicographic order of
/// their coefficient vectors (highest non-leading degree first).
fn first_irreducible(p: u8, e: u8) -> Vec<u8> {
    let count = (p as usize).pow(e as u32);
    for k in 0..count {
        // Coefficients c_{e-1} .. c_0 read as the base-p digits of k.
        let mut m = vec![0u8; e as usize + 1];
        m[e as usize] = 1;
        let mut r = k;
        for d in 0..e as usize {
            m[d] = (r % p as usize) as u8;
            r /= p as usize;
        }
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// No monic factor of degree `1..=e/2` divides `m`.
fn is_irreducible(m: &[u8], p: u8) -> bool {
    let e = m.len() - 1;
    if e == 1 {
        return true;
    }
    for d in 1..=e / 2 {
        for k in 0..(p as usize).pow(d as u32) {
            let mut f = vec![0u8; d + 1];
            f[d] = 1;
            let mut r = k;
            for c in f.iter_mut().take(d) {
                *c = (r % p as usize) as u8;
                r /= p as usize;
            }
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u8], f: &[u8], p: u8) -> Vec<u8> {
    let mut r: Vec<u16> = a.iter().map(|&x| x as u16).collect();
    let d = f.len() - 1;
    for top in (d..r.len()).rev() {
        let c = r[top] % p as u16;
        if c == 0 {
            continue;
        }
        for (k, &fk) in f.iter().enumerate() {
            let idx = top - d + k;
            r[idx] = (r[idx] + (p as u16 - c) * fk as u16) % p as u16;
        }
    }
    r.truncate(d);
    r.into_iter().map(|x| (x % p as u16) as u8).collect()
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, GeometryError> {
        if q > MAX_FIELD_ORDER {
            return Err(GeometryError::CapExceeded(format!("field order {q} exceeds {MAX_FIELD_ORDER}")));
        }
        let (p, e) = prime_power(q).ok_or(GeometryError::NotPrimePower(q))?;
        let qq = q as u8;
        let modulus = if e == 1 { vec![0, 1] } else { first_irreducible(p, e) };
        let n = q * q;
        let mut add = vec![0u8; n];
        let mut mul = vec![0u8; n];
        for a in 0..qq {
            let da = digits(a, p, e);
            for b in 0..qq {
                let db = digits(b, p, e);
                let s: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * q + b as usize] = undigits(&s, p);
                mul[a as usize * q + b as usize] = undigits(&poly_mul_mod(&da, &db, &modulus, p), p);
            }
        }
        let neg = (0..qq).map(|a| (0..qq).find(|&b| add[a as usize * q + b as usize] == 0).expect("additive inverse")).collect();
        let inv = (0..qq)
            .map(|a| if a == 0 { 0 } else { (1..qq).find(|&b| mul[a as usize * q + b as usize] == 1).unwrap_or(0) })
            .collect();
        let mut t = Tables { p, e, q: qq, modulus, add, mul, neg, inv, conj: (0..qq).collect() };
        if e % 2 == 0 {
            let q0 = (p as u32).pow(e as u32 / 2);
            t.conj = (0..qq).map(|a| pow_raw(&t, a, q0)).collect();
        }
        let f = FiniteField(Arc::new(t));
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let q = self.order() as u8;
        let bad = |what: &str| Err(GeometryError::FieldAxiom(format!("GF({q}): {what}")));
        for a in 0..q {
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return bad("missing inverse");
            }
            if self.conj(self.conj(a)) != a {
                return bad("involution is not of order two");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad("not commutative");
                }
                if self.conj(self.mul(a, b)) != self.mul(self.conj(a), self.conj(b))
                    || self.conj(self.add(a, b)) != self.add(self.conj(a), self.conj(b))
                {
                    return bad("involution is not a field automorphism");
                }
                for c in 0..q {
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                        || self.mul(a, self.mul(b, c)) != self.mul(self.mul(a, b), c)
                        || self.add(a, self.add(b, c)) != self.add(self.add(a, b), c)
                    {
                        return bad("ring axioms fail");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.0.q as usize
    }

    pub fn characteristic(&self) -> u8 {
        self.0.p
    }

    pub fn degree(&self) -> u8 {
        self.0.e
    }

    /// Coefficients of the defining polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    /// Whether the field carries a nontrivial involution.
    pub fn has_involution(&self) -> bool {
        self.0.e.is_multiple_of(2)
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }

    /// Multiplicative inverse; zero maps to zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.0.inv[a as usize]
    }

    /// The involution `J`: the `q0`-power map when `q = q0^2`, else the
    /// identity.
    #[inline]
    pub fn conj(&self, a: u8) -> u8 {
        self.0.conj[a as usize]
    }

    pub fn pow(&self, a: u8, k: u32) -> u8 {
        pow_raw(&self.0, a, k)
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.0.q
    }

    pub fn units(&self) -> impl Iterator<Item = u8> {
        1..self.0.q
    }

    /// The image of an integer under `Z -> F`.
    pub fn from_int(&self, k: i64) -> u8 {
        let p = self.0.p as i64;
        k.rem_euclid(p) as u8
    }

    /// Smallest element generating the multiplicative group.
    pub fn primitive_element(&self) -> u8 {
        let n = self.order() as u32 - 1;
        self.units()
            .find(|&a| (1..n).all(|k| self.pow(a, k) != 1))
            .expect("multiplicative group is cyclic")
    }
}

fn pow_raw(t: &Tables, a: u8, k: u32) -> u8 {
    let q = t.q as usize;
    let mut r = 1u8;
    for _ in 0..k {
        r = t.mul[r as usize * q + a as usize];
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.order(), q);
            let g = f.primitive_element();
            assert_eq!(f.pow(g, q as u32 - 1), 1);
        }
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(25).is_err());
    }

    #[test]
    fn gf4_involution_is_frobenius() {
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert!(f.has_involution());
        for a in f.elements() {
            assert_eq!(f.conj(a), f.mul(a, a));
        }
        let f3 = FiniteField::new(3).unwrap();
        assert!(f3.elements().all(|a| f3.conj(a) == a));
    }
}
