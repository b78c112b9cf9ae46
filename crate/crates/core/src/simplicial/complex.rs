use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{SparseIntMatrix, SparseVec};

use super::{HomologyGroups, SimplicialError, ZChainComplex};

/// A simplex as a strictly increasing list of global vertex ids.
pub type Simplex = Vec<u32>;

/// An ordered set of type labels; the order fixes the type filtration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeSet {
    labels: Vec<u32>,
}

impl TypeSet {
    pub fn new(labels: Vec<u32>) -> Result<Self, SimplicialError> {
        let mut seen = HashSet::new();
        for &l in &labels {
            if !seen.insert(l) {
                return Err(SimplicialError::RepeatedLabel(l));
            }
        }
        Ok(TypeSet { labels })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// 1-based position of `label` in the enumeration.
    pub fn position(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label).map(|i| i + 1)
    }

    /// Every enumeration of the same labels, in lexicographic order of
    /// positions.
    pub fn orderings(&self) -> Vec<TypeSet> {
        fn perms(rest: &mut Vec<u32>, acc: &mut Vec<u32>, out: &mut Vec<TypeSet>) {
            if rest.is_empty() {
                out.push(TypeSet { labels: acc.clone() });
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                acc.push(x);
                perms(rest, acc, out);
                acc.pop();
                rest.insert(i, x);
            }
        }
        let mut out = Vec::new();
        perms(&mut self.labels.clone(), &mut Vec::new(), &mut out);
        out
    }
}

/// A finite simplicial complex on a shared table of typed vertices. Faces
/// of each dimension are stored sorted; orientation follows vertex order.
#[derive(Clone, Debug)]
pub struct TypedComplex {
    vertex_types: Arc<Vec<u32>>,
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for TypedComplex {
    fn eq(&self, other: &Self) -> bool {
        self.faces == other.faces
            && self.faces.first().is_none_or(|vs| vs.iter().all(|v| self.type_of(v[0]) == other.type_of(v[0])))
    }
}

impl Eq for TypedComplex {}

/// Builds the face closure of the given simplices over the vertex table
/// `vertex_types` (vertex id `i` has type `vertex_types[i]`).
pub fn build_complex(vertex_types: Vec<u32>, maximal: &[Vec<u32>]) -> Result<TypedComplex, SimplicialError> {
    TypedComplex::from_maximal(Arc::new(vertex_types), maximal.iter().cloned())
}

impl TypedComplex {
    pub fn empty(vertex_types: Arc<Vec<u32>>) -> Self {
        TypedComplex { vertex_types, faces: Vec::new(), index: Vec::new() }
    }

    pub fn from_maximal<I>(vertex_types: Arc<Vec<u32>>, maximal: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut sets: Vec<HashSet<Simplex>> = Vec::new();
        for mut s in maximal {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            let mut seen: HashMap<u32, u32> = HashMap::new();
            for &v in &s {
                let t = *vertex_types.get(v as usize).ok_or(SimplicialError::UnknownVertex(v))?;
                if seen.insert(t, v).is_some() {
                    return Err(SimplicialError::DuplicateType { simplex: s.clone(), label: t });
                }
            }
            if sets.len() < s.len() {
                sets.resize_with(s.len(), HashSet::new);
            }
            if sets[s.len() - 1].contains(&s) {
                continue;
            }
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let face: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                sets[face.len() - 1].insert(face);
            }
        }
        Ok(Self::from_face_sets(vertex_types, sets))
    }

    fn from_face_sets(vertex_types: Arc<Vec<u32>>, sets: Vec<HashSet<Simplex>>) -> Self {
        let mut faces: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        while faces.last().is_some_and(Vec::is_empty) {
            faces.pop();
        }
        for f in &mut faces {
            f.sort_unstable();
        }
        let index = faces.iter().map(|f| f.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        TypedComplex { vertex_types, faces, index }
    }

    /// Keeps the simplices satisfying `keep`, which must be closed under
    /// taking faces.
    pub fn restrict(&self, keep: impl Fn(&[u32]) -> bool) -> TypedComplex {
        let sets: Vec<HashSet<Simplex>> =
            self.faces.iter().map(|fs| fs.iter().filter(|s| keep(s)).cloned().collect()).collect();
        let out = Self::from_face_sets(self.vertex_types.clone(), sets);
        debug_assert!(out.is_face_closed());
        out
    }

    fn is_face_closed(&self) -> bool {
        self.faces.iter().skip(1).all(|fs| fs.iter().all(|s| facets(s).all(|(_, f)| self.contains(&f))))
    }

    pub fn vertex_types(&self) -> &Arc<Vec<u32>> {
        &self.vertex_types
    }

    pub fn type_of(&self, v: u32) -> u32 {
        self.vertex_types[v as usize]
    }

    /// Sorted types of the vertices of `s`.
    pub fn type_of_simplex(&self, s: &[u32]) -> Vec<u32> {
        let mut t: Vec<u32> = s.iter().map(|&v| self.type_of(v)).collect();
        t.sort_unstable();
        t
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.faces.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Simplices of dimension `d` (the empty simplex for `d = -1`).
    pub fn simplices(&self, d: i64) -> &[Simplex] {
        static EMPTY: [Simplex; 1] = [Vec::new()];
        if d == -1 {
            return &EMPTY;
        }
        usize::try_from(d).ok().and_then(|i| self.faces.get(i)).map_or(&[], Vec::as_slice)
    }

    /// Number of `d`-simplices; one for `d = -1`.
    pub fn count(&self, d: i64) -> usize {
        self.simplices(d).len()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.contains(&[v])
    }

    /// Position of `s` among the simplices of its dimension.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.is_empty() {
            return Some(0);
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn is_subcomplex_of(&self, other: &TypedComplex) -> bool {
        self.all_simplices().all(|s| other.contains(s))
    }

    /// Simplices not contained in a larger one.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: HashSet<&[u32]> = HashSet::new();
        let mut out = Vec::new();
        for fs in self.faces.iter().rev() {
            for s in fs {
                if !covered.contains(s.as_slice()) {
                    out.push(s.clone());
                }
            }
            for s in fs {
                if s.len() > 1 {
                    for i in 0..s.len() {
                        let f: Vec<u32> = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
                        if let Some(k) = self.index_of(&f) {
                            covered.insert(self.faces[f.len() - 1][k].as_slice());
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `lk(v) = { s : v not in s, s + v in K }`.
    pub fn link(&self, v: u32) -> TypedComplex {
        let sets: Vec<HashSet<Simplex>> = self
            .faces
            .iter()
            .skip(1)
            .map(|fs| fs.iter().filter(|s| s.binary_search(&v).is_ok()).map(|s| without(s, v)).collect())
            .collect();
        Self::from_face_sets(self.vertex_types.clone(), sets)
    }

    /// Closed star: every simplex `s` with `s + v` in K.
    pub fn star(&self, v: u32) -> TypedComplex {
        let mut sets: Vec<HashSet<Simplex>> = vec![HashSet::new(); self.faces.len()];
        for fs in &self.faces {
            for s in fs.iter().filter(|s| s.binary_search(&v).is_ok()) {
                sets[s.len() - 1].insert(s.clone());
                if s.len() > 1 {
                    let f = without(s, v);
                    sets[f.len() - 1].insert(f);
                }
            }
        }
        Self::from_face_sets(self.vertex_types.clone(), sets)
    }

    /// Simplices containing `v`.
    pub fn residue(&self, v: u32) -> Vec<Simplex> {
        self.all_simplices().filter(|s| s.binary_search(&v).is_ok()).cloned().collect()
    }

    /// `d_k` of the augmented chain complex, `k >= 0`, columns indexed by
    /// `k`-simplices and rows by `(k-1)`-simplices.
    pub fn boundary_matrix(&self, k: i64) -> SparseIntMatrix {
        let cols: Vec<SparseVec> = self
            .simplices(k)
            .iter()
            .map(|s| {
                let mut col: SparseVec = facets(s)
                    .map(|(sign, f)| (self.index_of(&f).expect("face-closed"), BigInt::from(sign)))
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        SparseIntMatrix::from_columns(self.count(k - 1), cols).expect("facets are distinct")
    }

    /// Augmented chain complex in degrees `-1..=dim`.
    pub fn reduced_chain_complex(&self) -> ZChainComplex {
        let top = self.dim();
        let ranks = (-1..=top).map(|k| self.count(k)).collect();
        let diffs = (0..=top).map(|k| self.boundary_matrix(k)).collect();
        ZChainComplex::new_unchecked(-1, ranks, diffs).expect("shapes agree")
    }

    /// Chain complex of the pair `(self, sub)` in degrees `0..=dim`.
    pub fn relative_chain_complex(&self, sub: &TypedComplex) -> Result<ZChainComplex, SimplicialError> {
        if let Some(s) = sub.all_simplices().find(|s| !self.contains(s)) {
            return Err(SimplicialError::NotSubcomplex(s.clone()));
        }
        let keep: Vec<Vec<usize>> = (0..=self.dim())
            .map(|k| (0..self.count(k)).filter(|&i| !sub.contains(&self.simplices(k)[i])).collect())
            .collect();
        let ranks: Vec<usize> = keep.iter().map(Vec::len).collect();
        let diffs = (1..=self.dim())
            .map(|k| {
                let k_us = k as usize;
                self.boundary_matrix(k).select_cols(&keep[k_us]).select_rows(&keep[k_us - 1])
            })
            .collect();
        ZChainComplex::new_unchecked(0, ranks, diffs)
    }

    /// `f_{-1} - f_0 + f_1 - ...` with `f_{-1} = 1`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        (-1..=self.dim()).map(|k| if k.rem_euclid(2) == 0 { self.count(k) as i64 } else { -(self.count(k) as i64) }).sum()
    }

    /// `v <id> <type>` lines for every vertex, then `s <ids...>` lines for
    /// maximal simplices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.vertices() {
            let _ = writeln!(out, "v {v} {}", self.type_of(v));
        }
        for s in self.maximal_simplices() {
            let ids: Vec<String> = s.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "s {}", ids.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<TypedComplex, SimplicialError> {
        let bad = |l: &str| SimplicialError::Parse(format!("bad line {l:?}"));
        let mut types: Vec<(u32, u32)> = Vec::new();
        let mut maximal = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut it = line.split_whitespace();
            let tag = it.next().ok_or_else(|| bad(line))?;
            let nums: Vec<u32> = it.map(|t| t.parse().map_err(|_| bad(line))).collect::<Result<_, _>>()?;
            match (tag, nums.as_slice()) {
                ("v", [v, t]) => types.push((*v, *t)),
                ("s", ids) if !ids.is_empty() => maximal.push(ids.to_vec()),
                _ => return Err(bad(line)),
            }
        }
        let n = types.iter().map(|(v, _)| *v as usize + 1).max().unwrap_or(0);
        let mut table = vec![u32::MAX; n];
        for (v, t) in &types {
            table[*v as usize] = *t;
        }
        for s in &maximal {
            if let Some(&v) = s.iter().find(|&&v| table.get(v as usize).is_none_or(|t| *t == u32::MAX)) {
                return Err(SimplicialError::UnknownVertex(v));
            }
        }
        let mut k = TypedComplex::from_maximal(Arc::new(table), maximal)?;
        // Vertices without any listed simplex are isolated points.
        let isolated: Vec<Vec<u32>> = types.iter().filter(|(v, _)| !k.contains_vertex(*v)).map(|(v, _)| vec![*v]).collect();
        if !isolated.is_empty() {
            let all = k.maximal_simplices().into_iter().chain(isolated);
            k = TypedComplex::from_maximal(k.vertex_types.clone(), all)?;
        }
        Ok(k)
    }
}

/// Facets of `s` with their boundary signs `(-1)^i`.
pub(crate) fn facets(s: &[u32]) -> impl Iterator<Item = (i64, Simplex)> + '_ {
    (0..s.len()).map(move |i| {
        let f: Simplex = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
        (if i % 2 == 0 { 1 } else { -1 }, f)
    })
}

fn without(s: &[u32], v: u32) -> Simplex {
    s.iter().copied().filter(|&x| x != v).collect()
}

/// Sorts distinct vertex ids, returning the sign of the sorting permutation.
pub(crate) fn sort_with_sign(mut s: Vec<u32>) -> (i64, Simplex) {
    let mut sign = 1;
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (sign, s)
}

/// `apex * s` as a sorted simplex with the sign `(-1)^(position of apex)`.
pub(crate) fn join_apex(apex: u32, s: &[u32]) -> Option<(i64, Simplex)> {
    match s.binary_search(&apex) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = Vec::with_capacity(s.len() + 1);
            out.extend_from_slice(&s[..pos]);
            out.push(apex);
            out.extend_from_slice(&s[pos..]);
            Some((if pos % 2 == 0 { 1 } else { -1 }, out))
        }
    }
}

/// The cone `apex * z` of a `d`-chain of `source` as a `(d+1)`-chain of
/// `target`; satisfies `d(apex * z) = z - apex * dz` in augmented chains.
pub fn cone_chain(apex: u32, z: &[(usize, BigInt)], d: i64, source: &TypedComplex, target: &TypedComplex) -> Option<SparseVec> {
    let mut out = Vec::with_capacity(z.len());
    for (i, c) in z {
        let (sign, s) = join_apex(apex, &source.simplices(d)[*i])?;
        let j = target.index_of(&s)?;
        out.push((j, c * sign));
    }
    out.sort_by_key(|(j, _)| *j);
    Some(out)
}

/// Whether every simplex of `k` either contains `apex` or extends by it.
pub fn is_cone(k: &TypedComplex, apex: u32) -> bool {
    k.contains_vertex(apex)
        && k.all_simplices().all(|s| match join_apex(apex, s) {
            None => true,
            Some((_, t)) => k.contains(&t),
        })
}

pub fn reduced_homology(k: &TypedComplex) -> HomologyGroups {
    k.reduced_chain_complex().homology()
}

pub fn relative_homology(k: &TypedComplex, sub: &TypedComplex) -> Result<HomologyGroups, SimplicialError> {
    Ok(k.relative_chain_complex(sub)?.homology())
}
