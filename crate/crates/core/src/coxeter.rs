//! Finite Coxeter systems of types A and C realised by signed permutations,
//! their Coxeter complexes and the opposition involution.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplicial::{Simplex, TypedComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("unsupported Coxeter type {0:?}")]
    UnsupportedType(String),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("relation check failed: {0}")]
    Relation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoxeterType {
    A,
    C,
}

impl std::str::FromStr for CoxeterType {
    type Err = CoxeterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(CoxeterType::A),
            "C" | "c" => Ok(CoxeterType::C),
            _ => Err(CoxeterError::UnsupportedType(s.to_string())),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoxeterType::A => "A",
            CoxeterType::C => "C",
        })
    }
}

/// Symmetric matrix with unit diagonal and off-diagonal entries `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    m: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    pub fn new(m: Vec<Vec<u32>>) -> Result<Self, CoxeterError> {
        let n = m.len();
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::InvalidMatrix("not square".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                if x != m[j][i] {
                    return Err(CoxeterError::InvalidMatrix(format!("asymmetric at ({i}, {j})")));
                }
                if (i == j) != (x == 1) || x == 0 {
                    return Err(CoxeterError::InvalidMatrix(format!("bad entry {x} at ({i}, {j})")));
                }
            }
        }
        Ok(CoxeterMatrix { m })
    }

    /// Matrix of the linear diagram of the given type.
    pub fn linear(ty: CoxeterType, rank: usize) -> Self {
        let mut m = vec![vec![2; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for i in 0..rank.saturating_sub(1) {
            let v = if ty == CoxeterType::C && i == 0 { 4 } else { 3 };
            m[i][i + 1] = v;
            m[i + 1][i] = v;
        }
        CoxeterMatrix { m }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.m[i][j]
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }
}

/// A signed permutation in one-line notation: `w(i) = self.0[i - 1]`,
/// extended by `w(-i) = -w(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm(pub Vec<i16>);

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm((1..=n as i16).collect())
    }

    pub fn apply(&self, i: i16) -> i16 {
        let v = self.0[i.unsigned_abs() as usize - 1];
        if i < 0 { -v } else { v }
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut out = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            let s = if v < 0 { -1 } else { 1 };
            out[v.unsigned_abs() as usize - 1] = s * (i as i16 + 1);
        }
        SignedPerm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v == i as i16 + 1)
    }
}

/// A finite Coxeter system with its elements enumerated in order of
/// length.
#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    ty: CoxeterType,
    rank: usize,
    matrix: CoxeterMatrix,
    gens: Vec<SignedPerm>,
    elements: Vec<SignedPerm>,
    lengths: Vec<usize>,
    index: HashMap<SignedPerm, usize>,
    /// `right[w][i]` is the index of `w * s_i`.
    right: Vec<Vec<usize>>,
}

pub fn build_system(ty: CoxeterType, rank: usize) -> Result<CoxeterSystem, CoxeterError> {
    CoxeterSystem::new(ty, rank)
}

impl CoxeterSystem {
    pub fn new(ty: CoxeterType, rank: usize) -> Result<Self, CoxeterError> {
        if rank == 0 {
            return Err(CoxeterError::ZeroRank);
        }
        let letters = match ty {
            CoxeterType::A => rank + 1,
            CoxeterType::C => rank,
        };
        let gens: Vec<SignedPerm> = (1..=rank)
            .map(|i| {
                let mut p = SignedPerm::identity(letters);
                match ty {
                    CoxeterType::A => p.0.swap(i - 1, i),
                    CoxeterType::C if i == 1 => p.0[0] = -1,
                    CoxeterType::C => p.0.swap(i - 2, i - 1),
                }
                p
            })
            .collect();
        let id = SignedPerm::identity(letters);
        let mut elements = vec![id.clone()];
        let mut lengths = vec![0];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for s in &gens {
                let ws = elements[w].compose(s);
                if !index.contains_key(&ws) {
                    index.insert(ws.clone(), elements.len());
                    lengths.push(lengths[w] + 1);
                    queue.push_back(elements.len());
                    elements.push(ws);
                }
            }
        }
        let right = elements.iter().map(|w| gens.iter().map(|s| index[&w.compose(s)]).collect()).collect();
        let sys = CoxeterSystem { ty, rank, matrix: CoxeterMatrix::linear(ty, rank), gens, elements, lengths, index, right };
        sys.verify()?;
        Ok(sys)
    }

    fn verify(&self) -> Result<(), CoxeterError> {
        let factorial: usize = (1..=self.rank + usize::from(self.ty == CoxeterType::A)).product();
        let expected = match self.ty {
            CoxeterType::A => factorial,
            CoxeterType::C => factorial << self.rank,
        };
        if self.order() != expected {
            return Err(CoxeterError::Relation(format!("order {} differs from {expected}", self.order())));
        }
        for i in 0..self.rank {
            for j in 0..self.rank {
                let prod = self.gens[i].compose(&self.gens[j]);
                let m = self.matrix.get(i, j);
                let mut p = prod.clone();
                for k in 1..=m {
                    if p.is_identity() != (k == m) {
                        return Err(CoxeterError::Relation(format!("(s_{} s_{})^{k}", i + 1, j + 1)));
                    }
                    p = p.compose(&prod);
                }
            }
        }
        Ok(())
    }

    pub fn ty(&self) -> CoxeterType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[SignedPerm] {
        &self.gens
    }

    pub fn element(&self, w: usize) -> &SignedPerm {
        &self.elements[w]
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn index_of(&self, w: &SignedPerm) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    /// The unique element of maximal length.
    pub fn longest_element(&self) -> usize {
        (0..self.order()).max_by_key(|&w| self.lengths[w]).expect("nonempty")
    }

    /// `j` with `w0 s_i w0 = s_j` (0-based).
    pub fn opposite_generator(&self, i: usize) -> usize {
        let w0 = &self.elements[self.longest_element()];
        let c = w0.compose(&self.gens[i]).compose(w0);
        self.gens.iter().position(|s| *s == c).expect("w0 normalizes S")
    }

    /// Elements of the standard parabolic subgroup generated by the
    /// generators with indices in `subset` (0-based).
    pub fn parabolic(&self, subset: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut k = 0;
        while k < out.len() {
            let w = out[k];
            for &i in subset {
                let ws = self.right[w][i];
                if !seen[ws] {
                    seen[ws] = true;
                    out.push(ws);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }
}

/// The Coxeter complex `Sigma(W, S)`: vertices are the cosets
/// `w <S \ {s_i}>` of type `i` (1-based); chambers are the elements.
#[derive(Clone, Debug)]
pub struct CoxeterComplex {
    system: CoxeterSystem,
    complex: TypedComplex,
    /// `vertex_of[i][w]`: vertex id of the type-`(i+1)` coset containing `w`.
    vertex_of: Vec<Vec<u32>>,
    /// `(type, minimal coset element)` per vertex id.
    vertices: Vec<(usize, usize)>,
}

pub fn coxeter_complex(w: &CoxeterSystem) -> CoxeterComplex {
    CoxeterComplex::new(w.clone())
}

impl CoxeterComplex {
    pub fn new(system: CoxeterSystem) -> Self {
        let n = system.rank();
        let mut vertex_of = vec![vec![u32::MAX; system.order()]; n];
        let mut vertices = Vec::new();
        let mut types = Vec::new();
        for (i, row) in vertex_of.iter_mut().enumerate() {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let para = system.parabolic(&others);
            for w in 0..system.order() {
                if row[w] != u32::MAX {
                    continue;
                }
                let id = vertices.len() as u32;
                // w is the first element of its coset in index order.
                for &u in &para {
                    row[system.mul(w, u)] = id;
                }
                vertices.push((i + 1, w));
                types.push(i as u32 + 1);
            }
        }
        let chambers = (0..system.order()).map(|w| (0..n).map(|i| vertex_of[i][w]).collect::<Vec<_>>());
        let complex = TypedComplex::from_maximal(Arc::new(types), chambers).expect("cosets of distinct types");
        CoxeterComplex { system, complex, vertex_of, vertices }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn complex(&self) -> &TypedComplex {
        &self.complex
    }

    /// `(type, representative element)` of a vertex.
    pub fn vertex(&self, v: u32) -> (usize, usize) {
        self.vertices[v as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// The chamber `w`, as a sorted simplex.
    pub fn chamber(&self, w: usize) -> Simplex {
        let mut s: Simplex = self.vertex_of.iter().map(|row| row[w]).collect();
        s.sort_unstable();
        s
    }

    pub fn vertex_of(&self, ty: usize, w: usize) -> u32 {
        self.vertex_of[ty - 1][w]
    }

    /// Opposition on vertices: `w W_i  ->  w w0 W_j` with `s_j = w0 s_i w0`.
    pub fn opposite_vertex(&self, v: u32) -> u32 {
        let (ty, w) = self.vertex(v);
        let w0 = self.system.longest_element();
        let j = self.system.opposite_generator(ty - 1);
        self.vertex_of[j][self.system.mul(w, w0)]
    }

    pub fn opposition_map(&self, s: &[u32]) -> Simplex {
        let mut out: Simplex = s.iter().map(|&v| self.opposite_vertex(v)).collect();
        out.sort_unstable();
        out
    }

    /// Every codimension-one face of a chamber lies in exactly two chambers.
    pub fn is_thin(&self) -> bool {
        panel_counts(&self.complex).values().all(|&c| c == 2)
    }
}

pub fn opposition_map(c: &CoxeterComplex, s: &[u32]) -> Simplex {
    c.opposition_map(s)
}

/// Number of chambers containing each panel of a pure complex.
pub(crate) fn panel_counts(k: &TypedComplex) -> HashMap<Simplex, usize> {
    let mut counts = HashMap::new();
    for ch in k.simplices(k.dim()) {
        for i in 0..ch.len() {
            let p: Simplex = ch.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    counts
}
