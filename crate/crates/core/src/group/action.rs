use std::collections::{BTreeSet, HashSet};

use crate::geometry::{Building, FMatrix};
use crate::simplicial::Simplex;

use super::{GroupError, MatrixGroup};

/// Permutation of building vertices induced by `v -> g v`.
pub fn vertex_permutation(b: &Building, g: &FMatrix) -> Result<Vec<u32>, GroupError> {
    (0..b.vertex_count() as u32)
        .map(|v| {
            b.vertex_of(&b.subspace(v).image(b.field(), g))
                .ok_or_else(|| GroupError::Invalid(format!("element does not map vertex {v} into the building")))
        })
        .collect()
}

/// A matrix group acting on a building, with one vertex permutation per
/// element.
#[derive(Clone, Debug)]
pub struct BuildingAction {
    perms: Vec<Vec<u32>>,
}

impl BuildingAction {
    pub fn new(group: &MatrixGroup, b: &Building) -> Result<Self, GroupError> {
        let perms = group.elements().iter().map(|g| vertex_permutation(b, g)).collect::<Result<_, _>>()?;
        Ok(BuildingAction { perms })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn apply(&self, g: u32, v: u32) -> u32 {
        self.perms[g as usize][v as usize]
    }

    pub fn permutation(&self, g: u32) -> &[u32] {
        &self.perms[g as usize]
    }

    /// Image of a simplex, sorted.
    pub fn apply_simplex(&self, g: u32, s: &[u32]) -> Simplex {
        let mut t: Simplex = s.iter().map(|&v| self.apply(g, v)).collect();
        t.sort_unstable();
        t
    }

    /// Elements fixing every listed vertex.
    pub fn stabilizer(&self, vertices: &[u32]) -> Vec<u32> {
        (0..self.order() as u32).filter(|&g| vertices.iter().all(|&v| self.apply(g, v) == v)).collect()
    }

    pub fn orbit(&self, v: u32) -> Vec<u32> {
        let set: BTreeSet<u32> = self.perms.iter().map(|p| p[v as usize]).collect();
        set.into_iter().collect()
    }

    /// Orbit of a tuple of vertices under the elements in `within`.
    pub fn tuple_orbit(&self, within: &[u32], t: &[u32]) -> HashSet<Vec<u32>> {
        within.iter().map(|&g| t.iter().map(|&v| self.apply(g, v)).collect()).collect()
    }
}

/// Number of vertex orbits per vertex type.
pub fn orbit_sizes(action: &BuildingAction, b: &Building) -> Vec<(u32, usize)> {
    let mut seen = vec![false; b.vertex_count()];
    let mut out: Vec<(u32, usize)> = b.type_labels().into_iter().map(|t| (t, 0)).collect();
    for v in 0..b.vertex_count() as u32 {
        if seen[v as usize] {
            continue;
        }
        for w in action.orbit(v) {
            seen[w as usize] = true;
        }
        let t = b.complex().type_of(v);
        if let Some(e) = out.iter_mut().find(|(l, _)| *l == t) {
            e.1 += 1;
        }
    }
    out
}

/// Transitivity on ordered pairs of opposite chambers, which for a
/// spherical building is equivalent to transitivity on pairs of a chamber
/// and an apartment containing it.
pub fn strong_transitivity_check(group: &MatrixGroup, b: &Building) -> Result<bool, GroupError> {
    let action = BuildingAction::new(group, b)?;
    Ok(strongly_transitive(&action, b, &(0..group.order() as u32).collect::<Vec<_>>()))
}

pub(crate) fn strongly_transitive(action: &BuildingAction, b: &Building, within: &[u32]) -> bool {
    let chambers = b.chambers();
    let c0 = &chambers[0];
    let opposite: Vec<&Simplex> = chambers.iter().filter(|d| b.is_opposite(c0, d)).collect();
    let Some(d0) = opposite.first() else { return false };
    let total = chambers.len() * opposite.len();
    let orbit: HashSet<(Simplex, Simplex)> = within
        .iter()
        .map(|&g| (action.apply_simplex(g, c0), action.apply_simplex(g, d0)))
        .collect();
    orbit.len() == total
}

/// Direct check of transitivity on (chamber, apartment) incident pairs,
/// with apartments enumerated as convex hulls of opposite chamber pairs.
/// Quadratic in the number of chambers; meant for the smallest buildings.
pub fn apartment_transitivity_check(group: &MatrixGroup, b: &Building) -> Result<(bool, usize), GroupError> {
    let action = BuildingAction::new(group, b)?;
    let chambers = b.chambers();
    let adj = b.chamber_adjacency();
    let mut apartments: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in 0..chambers.len() {
        for d in (c + 1)..chambers.len() {
            if b.is_opposite(&chambers[c], &chambers[d]) {
                apartments.insert(b.apartment_through(&adj, c, d));
            }
        }
    }
    let incident: usize = apartments.iter().map(Vec::len).sum();
    let chamber_id = |s: &Simplex| chambers.binary_search(s).expect("image of a chamber is a chamber");
    let a0 = apartments.iter().next().expect("a building has an apartment").clone();
    let c0 = a0[0];
    let orbit: HashSet<(usize, Vec<usize>)> = (0..group.order() as u32)
        .map(|g| {
            let mut apt: Vec<usize> = a0.iter().map(|&e| chamber_id(&action.apply_simplex(g, &chambers[e]))).collect();
            apt.sort_unstable();
            (chamber_id(&action.apply_simplex(g, &chambers[c0])), apt)
        })
        .collect();
    Ok((orbit.len() == incident, apartments.len()))
}
