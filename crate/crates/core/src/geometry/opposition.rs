use std::collections::HashMap;
use std::sync::Arc;

use crate::simplicial::{Simplex, TypedComplex};

use super::{Building, GeometryError};

/// The opposition complex of a building: vertices are pairs `(x, y)` of
/// opposite vertices, and a set of pairs is a simplex when its first
/// coordinates form a simplex opposite the simplex of its second
/// coordinates, matched vertexwise. A pair has the type of its first entry.
#[derive(Clone, Debug)]
pub struct OppositionComplex {
    pairs: Vec<(u32, u32)>,
    index: HashMap<(u32, u32), u32>,
    complex: TypedComplex,
}

pub fn opposition_complex(b: &Building) -> Result<OppositionComplex, GeometryError> {
    OppositionComplex::new(b)
}

impl OppositionComplex {
    pub fn new(b: &Building) -> Result<Self, GeometryError> {
        let btypes = b.complex().vertex_types();
        let n = b.vertex_count() as u32;
        // Pair ids sorted by (type, first, second).
        let mut pairs: Vec<(u32, u32)> =
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| b.is_vertex_opposite(x, y)).collect();
        pairs.sort_by_key(|&(x, y)| (btypes[x as usize], x, y));
        let index: HashMap<(u32, u32), u32> = pairs.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
        let types: Vec<u32> = pairs.iter().map(|&(x, _)| btypes[x as usize]).collect();
        let maximal: Vec<Vec<u32>> = opposite_chamber_pairs(b)
            .into_iter()
            .map(|(c, d)| c.iter().zip(&d).map(|(&x, &y)| index[&(x, y)]).collect())
            .collect();
        let complex = TypedComplex::from_maximal(Arc::new(types), maximal)?;
        Ok(OppositionComplex { pairs, index, complex })
    }

    pub fn complex(&self) -> &TypedComplex {
        &self.complex
    }

    pub fn pair(&self, v: u32) -> (u32, u32) {
        self.pairs[v as usize]
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn vertex_of(&self, x: u32, y: u32) -> Option<u32> {
        self.index.get(&(x, y)).copied()
    }

    /// Splits a simplex into its two building simplices, in matched order.
    pub fn split(&self, s: &[u32]) -> (Simplex, Simplex) {
        s.iter().map(|&v| self.pairs[v as usize]).unzip()
    }

    /// Joins two matched vertex lists into a simplex id list, if every
    /// matched pair is a vertex.
    pub fn join(&self, xs: &[u32], ys: &[u32]) -> Option<Simplex> {
        let mut s: Simplex = xs.iter().zip(ys).map(|(&x, &y)| self.vertex_of(x, y)).collect::<Option<_>>()?;
        s.sort_unstable();
        Some(s)
    }

    /// Checks that the simplices are exactly the vertexwise opposite pairs
    /// of simplices of the building. Quadratic in the number of simplices.
    pub fn matches_definition(&self, b: &Building) -> bool {
        let all: Vec<&Simplex> = b.complex().all_simplices().filter(|s| !s.is_empty()).collect();
        let dim = |v: u32| b.subspace(v).dim();
        let mut expected = 0usize;
        for s in &all {
            for t in &all {
                if s.len() != t.len() || !b.is_opposite(s, t) {
                    continue;
                }
                // Match each vertex of s to the vertex of t of opposite type.
                let ys: Option<Vec<u32>> = s
                    .iter()
                    .map(|&x| t.iter().copied().find(|&y| dim(y) as u32 == b.opposite_type(dim(x) as u32)))
                    .collect();
                let Some(ys) = ys else { return false };
                match self.join(s, &ys) {
                    Some(j) if self.complex.contains(&j) => expected += 1,
                    _ => return false,
                }
            }
        }
        let total: usize = (0..=self.complex.dim()).map(|d| self.complex.count(d)).sum();
        if total != expected {
            return false;
        }
        self.complex.all_simplices().filter(|s| !s.is_empty()).all(|s| {
            let (xs, ys) = self.split(s);
            let (mut xs, mut ys) = (xs, ys);
            xs.sort_unstable();
            ys.sort_unstable();
            b.complex().contains(&xs) && b.complex().contains(&ys) && b.is_opposite(&xs, &ys)
        })
    }
}

/// All ordered pairs `(c, d)` of opposite chambers, with `d` listed so that
/// `d[i]` is opposite `c[i]`.
pub(crate) fn opposite_chamber_pairs(b: &Building) -> Vec<(Simplex, Simplex)> {
    let chambers = b.chambers();
    let n = b.vertex_count() as u32;
    let mut out = Vec::new();
    for c in chambers {
        // candidates[i]: vertices opposite c[i].
        let candidates: Vec<Vec<u32>> = c.iter().map(|&x| (0..n).filter(|&y| b.is_vertex_opposite(x, y)).collect()).collect();
        let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
        while let Some(partial) = stack.pop() {
            if partial.len() == c.len() {
                out.push((c.clone(), partial));
                continue;
            }
            for &y in &candidates[partial.len()] {
                let incident = partial.iter().all(|&z| {
                    let mut e = vec![y, z];
                    e.sort_unstable();
                    b.complex().contains(&e)
                });
                if incident {
                    let mut next = partial.clone();
                    next.push(y);
                    stack.push(next);
                }
            }
        }
    }
    out
}
