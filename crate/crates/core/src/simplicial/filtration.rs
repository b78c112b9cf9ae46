use super::{SimplicialError, TypeSet, TypedComplex};

/// The chain of subcomplexes `K_0 = {} <= K_1 <= ... <= K_m = K`, where
/// `K_p` keeps the simplices whose types lie among the first `p` labels.
#[derive(Clone, Debug)]
pub struct TypeFiltration {
    order: TypeSet,
    levels: Vec<TypedComplex>,
}

impl TypeFiltration {
    pub fn new(base: &TypedComplex, order: TypeSet) -> Result<Self, SimplicialError> {
        for v in base.vertices() {
            let t = base.type_of(v);
            if order.position(t).is_none() {
                return Err(SimplicialError::UnknownLabel(t));
            }
        }
        let mut levels = vec![TypedComplex::empty(base.vertex_types().clone())];
        for p in 1..=order.len() {
            let allowed = &order.labels()[..p];
            levels.push(base.restrict(|s| s.iter().all(|&v| allowed.contains(&base.type_of(v)))));
        }
        Ok(TypeFiltration { order, levels })
    }

    pub fn order(&self) -> &TypeSet {
        &self.order
    }

    /// Number of nonempty levels.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn level(&self, p: usize) -> &TypedComplex {
        &self.levels[p]
    }

    /// The label `i_p`.
    pub fn label(&self, p: usize) -> u32 {
        self.order.labels()[p - 1]
    }

    fn check(&self, v: u32, p: usize) -> Result<&TypedComplex, SimplicialError> {
        let lvl = self.levels.get(p).ok_or(SimplicialError::VertexNotInLevel { vertex: v, level: p })?;
        if lvl.contains_vertex(v) {
            Ok(lvl)
        } else {
            Err(SimplicialError::VertexNotInLevel { vertex: v, level: p })
        }
    }

    /// `lk(v)_p`, computed inside level `p`.
    pub fn link(&self, v: u32, p: usize) -> Result<TypedComplex, SimplicialError> {
        Ok(self.check(v, p)?.link(v))
    }

    /// `st(v)_p`, the closed star inside level `p`.
    pub fn star(&self, v: u32, p: usize) -> Result<TypedComplex, SimplicialError> {
        Ok(self.check(v, p)?.star(v))
    }

    /// `R(v)_p`, the simplices of level `p` containing `v`.
    pub fn residue(&self, v: u32, p: usize) -> Result<Vec<Vec<u32>>, SimplicialError> {
        Ok(self.check(v, p)?.residue(v))
    }

    /// `lk(v)_{p-1}` for a vertex of type `i_p`: the link of `v` in level
    /// `p` restricted to level `p - 1`.
    pub fn lower_link(&self, v: u32, p: usize) -> Result<TypedComplex, SimplicialError> {
        let below = &self.levels[p - 1];
        Ok(self.link(v, p)?.restrict(|s| below.contains(s)))
    }
}
