use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::coxeter::{panel_counts, CoxeterComplex, CoxeterSystem, CoxeterType};
use crate::simplicial::{Simplex, TypedComplex};

use super::form::{coord, label};
use super::{enumerate_subspaces_in, FiniteField, FormKind, GeometryError, HermitianForm, Subspace};

/// Size limits for geometric constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_q: usize,
    pub max_ambient: usize,
    /// Bound on the number of subspaces enumerated while building.
    pub max_subspaces: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_q: 4, max_ambient: 8, max_subspaces: 200_000 }
    }
}

impl Caps {
    pub fn check(&self, ambient: usize, q: usize) -> Result<(), GeometryError> {
        if q > self.max_q {
            return Err(GeometryError::CapExceeded(format!("q = {q} exceeds the cap {}", self.max_q)));
        }
        if ambient > self.max_ambient {
            return Err(GeometryError::CapExceeded(format!("dimension {ambient} exceeds the cap {}", self.max_ambient)));
        }
        Ok(())
    }

    /// Rejects enumerations of more than `max_subspaces` subspaces of
    /// dimensions `dims` in `F_q^ambient`.
    pub fn check_enumeration(&self, ambient: usize, q: usize, dims: impl IntoIterator<Item = usize>) -> Result<(), GeometryError> {
        let total = dims.into_iter().fold(0u128, |acc, k| acc.saturating_add(gaussian_binomial(ambient, k, q)));
        if total > self.max_subspaces {
            return Err(GeometryError::CapExceeded(format!(
                "{total} subspaces to enumerate exceeds the cap {}",
                self.max_subspaces
            )));
        }
        Ok(())
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`, saturating.
pub fn gaussian_binomial(n: usize, k: usize, q: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num = num.saturating_mul(q.saturating_pow((n - i) as u32) - 1);
        den = den.saturating_mul(q.saturating_pow((i + 1) as u32) - 1);
        if num == u128::MAX {
            return u128::MAX;
        }
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Outcome of an opposition test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OppositionCheck {
    Opposite,
    NotOpposite,
    /// The type profiles cannot be opposite; carries a diagnostic.
    TypeMismatch(String),
}

/// A spherical building realised as a flag complex of subspaces. Vertex
/// types are subspace dimensions.
#[derive(Clone, Debug)]
pub struct Building {
    ty: CoxeterType,
    rank: usize,
    field: FiniteField,
    ambient: usize,
    form: Option<HermitianForm>,
    complex: TypedComplex,
    subspaces: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    perps: Vec<Subspace>,
    apartment: TypedComplex,
    opposite_vertex: Vec<Vec<bool>>,
}

/// Flag complex of proper nonzero subspaces of `F_q^{ambient}`.
pub fn building_a(ambient: usize, q: usize) -> Result<Building, GeometryError> {
    Building::type_a(&FiniteField::new(q)?, ambient, &Caps::default())
}

/// Flag complex of nonzero totally isotropic subspaces for `form`.
pub fn building_c(form: &HermitianForm) -> Result<Building, GeometryError> {
    Building::type_c(form, &Caps::default())
}

impl Building {
    pub fn type_a(field: &FiniteField, ambient: usize, caps: &Caps) -> Result<Self, GeometryError> {
        if ambient < 2 {
            return Err(GeometryError::Invalid("type A needs ambient dimension at least 2".into()));
        }
        caps.check(ambient, field.order())?;
        caps.check_enumeration(ambient, field.order(), 1..ambient)?;
        let by_dim: Vec<Vec<Subspace>> = (1..ambient).map(|d| enumerate_subspaces_in(field, ambient, d)).collect();
        let apartment_vertices: Vec<Subspace> = (1..ambient)
            .flat_map(|d| crate::geometry::linalg::combinations(ambient, d))
            .map(|c| Subspace::coordinate(ambient, &c))
            .collect();
        Self::assemble(CoxeterType::A, ambient - 1, field, ambient, None, by_dim, apartment_vertices)
    }

    pub fn type_c(form: &HermitianForm, caps: &Caps) -> Result<Self, GeometryError> {
        let field = form.field();
        let m = form.witt_index();
        let ambient = form.dim();
        caps.check(ambient, field.order())?;
        caps.check_enumeration(ambient, field.order(), 1..=m)?;
        let by_dim: Vec<Vec<Subspace>> = (1..=m)
            .map(|d| enumerate_subspaces_in(field, ambient, d).into_iter().filter(|s| form.is_totally_isotropic(s)).collect())
            .collect();
        // Coordinate spans of index sets containing no pair {i, -i}.
        let mut apartment_vertices = Vec::new();
        for d in 1..=m {
            for c in crate::geometry::linalg::combinations(ambient, d) {
                let labels: Vec<i32> = c.iter().map(|&p| label(m, p)).collect();
                if labels.iter().all(|l| !labels.contains(&-l)) {
                    apartment_vertices.push(Subspace::coordinate(ambient, &c));
                }
            }
        }
        Self::assemble(CoxeterType::C, m, field, ambient, Some(form.clone()), by_dim, apartment_vertices)
    }

    fn assemble(
        ty: CoxeterType,
        rank: usize,
        field: &FiniteField,
        ambient: usize,
        form: Option<HermitianForm>,
        by_dim: Vec<Vec<Subspace>>,
        apartment_vertices: Vec<Subspace>,
    ) -> Result<Self, GeometryError> {
        let subspaces: Vec<Subspace> = by_dim.iter().flatten().cloned().collect();
        let types: Vec<u32> = subspaces.iter().map(|s| s.dim() as u32).collect();
        let index: HashMap<Subspace, u32> = subspaces.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        // children[i]: vertices one dimension up containing vertex i.
        let mut offsets = vec![0usize];
        for layer in &by_dim {
            offsets.push(offsets.last().unwrap() + layer.len());
        }
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); subspaces.len()];
        for d in 0..by_dim.len().saturating_sub(1) {
            for (i, small) in by_dim[d].iter().enumerate() {
                for (j, big) in by_dim[d + 1].iter().enumerate() {
                    if big.contains_subspace(field, small) {
                        children[offsets[d] + i].push((offsets[d + 1] + j) as u32);
                    }
                }
            }
        }
        let mut chambers: Vec<Vec<u32>> = Vec::new();
        let mut stack: Vec<Vec<u32>> = (0..by_dim[0].len() as u32).map(|v| vec![v]).collect();
        stack.reverse();
        while let Some(flag) = stack.pop() {
            if flag.len() == rank {
                chambers.push(flag);
                continue;
            }
            for &c in children[*flag.last().unwrap() as usize].iter().rev() {
                let mut next = flag.clone();
                next.push(c);
                stack.push(next);
            }
        }
        let complex = TypedComplex::from_maximal(Arc::new(types), chambers)?;
        let apt: Vec<u32> = apartment_vertices.iter().map(|s| index[s]).collect();
        let apartment = complex.restrict(|s| s.iter().all(|v| apt.contains(v)));
        let perps = match &form {
            Some(h) => subspaces.iter().map(|s| h.perp(s)).collect(),
            None => Vec::new(),
        };
        let mut b = Building {
            ty,
            rank,
            field: field.clone(),
            ambient,
            form,
            complex,
            subspaces,
            index,
            perps,
            apartment,
            opposite_vertex: Vec::new(),
        };
        let n = b.subspaces.len();
        b.opposite_vertex = (0..n).map(|u| (0..n).map(|v| b.vertices_opposite(u as u32, v as u32)).collect()).collect();
        Ok(b)
    }

    pub fn ty(&self) -> CoxeterType {
        self.ty
    }

    /// Rank of the Coxeter system (number of vertex types).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn form(&self) -> Option<&HermitianForm> {
        self.form.as_ref()
    }

    pub fn complex(&self) -> &TypedComplex {
        &self.complex
    }

    pub fn subspace(&self, v: u32) -> &Subspace {
        &self.subspaces[v as usize]
    }

    pub fn vertex_of(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.subspaces.len()
    }

    pub fn chambers(&self) -> &[Simplex] {
        self.complex.simplices(self.rank as i64 - 1)
    }

    pub fn standard_apartment(&self) -> &TypedComplex {
        &self.apartment
    }

    /// Labels in increasing order; type labels are dimensions.
    pub fn type_labels(&self) -> Vec<u32> {
        (1..=self.rank as u32).collect()
    }

    /// Type of the vertex opposite a vertex of type `t`.
    pub fn opposite_type(&self, t: u32) -> u32 {
        match self.ty {
            CoxeterType::A => self.ambient as u32 - t,
            CoxeterType::C => t,
        }
    }

    fn vertices_opposite(&self, u: u32, v: u32) -> bool {
        let (a, b) = (self.subspace(u), self.subspace(v));
        match self.ty {
            CoxeterType::A => a.is_complement(&self.field, b),
            CoxeterType::C => a.dim() == b.dim() && a.is_complement(&self.field, &self.perps[v as usize]),
        }
    }

    pub fn is_vertex_opposite(&self, u: u32, v: u32) -> bool {
        self.opposite_vertex[u as usize][v as usize]
    }

    /// Opposition of simplices: A-type pairs `V_i` with `V'_{k+1-i}` and
    /// asks for `V_i + V'_{k+1-i} = V` directly; C-type pairs equal
    /// dimensions and asks for `X + Y^perp = V`.
    pub fn check_opposite(&self, s: &[u32], t: &[u32]) -> OppositionCheck {
        let mut a: Vec<u32> = s.to_vec();
        let mut b: Vec<u32> = t.to_vec();
        let dim = |v: &u32| self.subspaces[*v as usize].dim();
        a.sort_by_key(dim);
        b.sort_by_key(dim);
        if self.ty == CoxeterType::A {
            b.reverse();
        }
        if a.len() != b.len() {
            return OppositionCheck::TypeMismatch(format!("simplices of sizes {} and {}", a.len(), b.len()));
        }
        for (x, y) in a.iter().zip(&b) {
            let (dx, dy) = (dim(x) as u32, dim(y) as u32);
            if self.opposite_type(dx) != dy {
                return OppositionCheck::TypeMismatch(format!("type {dx} cannot be opposite type {dy}"));
            }
        }
        if a.iter().zip(&b).all(|(x, y)| self.is_vertex_opposite(*x, *y)) {
            OppositionCheck::Opposite
        } else {
            OppositionCheck::NotOpposite
        }
    }

    pub fn is_opposite(&self, s: &[u32], t: &[u32]) -> bool {
        self.check_opposite(s, t) == OppositionCheck::Opposite
    }

    /// Per panel type (the missing vertex type), the least and greatest
    /// number of chambers on a panel.
    pub fn thickness(&self) -> BTreeMap<u32, (usize, usize)> {
        let mut out: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        let labels = self.type_labels();
        for (panel, count) in panel_counts(&self.complex) {
            let present = self.complex.type_of_simplex(&panel);
            let missing = *labels.iter().find(|l| !present.contains(l)).expect("panel misses one type");
            let e = out.entry(missing).or_insert((usize::MAX, 0));
            e.0 = e.0.min(count);
            e.1 = e.1.max(count);
        }
        out
    }

    /// Chamber adjacency through shared panels.
    pub fn chamber_adjacency(&self) -> Vec<Vec<usize>> {
        let chambers = self.chambers();
        let mut by_panel: HashMap<Simplex, Vec<usize>> = HashMap::new();
        for (c, ch) in chambers.iter().enumerate() {
            for i in 0..ch.len() {
                let p: Simplex = ch.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
                by_panel.entry(p).or_default().push(c);
            }
        }
        let mut adj = vec![Vec::new(); chambers.len()];
        for cs in by_panel.values() {
            for &a in cs {
                for &b in cs {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    /// Gallery distances from chamber `c`.
    pub fn gallery_distances(&self, adj: &[Vec<usize>], c: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[c] = 0;
        let mut queue = VecDeque::from([c]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Chambers on minimal galleries between two opposite chambers; this is
    /// the unique apartment containing both.
    pub fn apartment_through(&self, adj: &[Vec<usize>], c: usize, d: usize) -> Vec<usize> {
        let dc = self.gallery_distances(adj, c);
        let dd = self.gallery_distances(adj, d);
        (0..adj.len()).filter(|&e| dc[e] + dd[e] == dc[d]).collect()
    }

    /// An apartment, as a chamber list, containing the simplices `s` and
    /// `t`: `s` is extended to a chamber `c` and the apartments spanned by
    /// `c` and its opposite chambers are searched for a chamber over `t`.
    pub fn common_apartment(&self, adj: &[Vec<usize>], s: &[u32], t: &[u32]) -> Option<Vec<usize>> {
        let chambers = self.chambers();
        let over = |ch: &Simplex, x: &[u32]| x.iter().all(|v| ch.binary_search(v).is_ok());
        let c = chambers.iter().position(|ch| over(ch, s))?;
        for (d, dch) in chambers.iter().enumerate() {
            if !self.is_opposite(&chambers[c], dch) {
                continue;
            }
            let apt = self.apartment_through(adj, c, d);
            if apt.iter().any(|&e| over(&chambers[e], t)) {
                return Some(apt);
            }
        }
        None
    }

    /// Recovers a frame from an apartment: its rank-one vertices, with one
    /// basis vector each. In type C the vectors are rescaled to a hyperbolic
    /// basis. Returns `None` if the vertices do not form such a frame.
    pub fn frame_of_apartment(&self, apartment: &[usize]) -> Option<Vec<Vec<u8>>> {
        let f = &self.field;
        let chambers = self.chambers();
        let mut points: Vec<u32> = apartment
            .iter()
            .flat_map(|&c| chambers[c].iter().copied())
            .filter(|&v| self.subspace(v).dim() == 1)
            .collect();
        points.sort_unstable();
        points.dedup();
        if points.len() != self.ambient {
            return None;
        }
        let vecs: Vec<Vec<u8>> = points.iter().map(|&p| self.subspace(p).basis()[0].clone()).collect();
        if Subspace::span(f, self.ambient, &vecs).dim() != self.ambient {
            return None;
        }
        let Some(h) = &self.form else { return Some(vecs) };
        // Pair each point with its unique non-orthogonal partner.
        let m = h.witt_index();
        let mut used = vec![false; vecs.len()];
        let mut frame = vec![Vec::new(); self.ambient];
        let mut next = 1;
        for i in 0..vecs.len() {
            if used[i] {
                continue;
            }
            let partners: Vec<usize> = (0..vecs.len()).filter(|&j| j != i && h.eval(&vecs[i], &vecs[j]) != 0).collect();
            let [j] = partners[..] else { return None };
            if used[j] {
                return None;
            }
            used[i] = true;
            used[j] = true;
            let s = f.inv(h.eval(&vecs[i], &vecs[j]));
            let y: Vec<u8> = vecs[j].iter().map(|&x| f.mul(s, x)).collect();
            frame[coord(m, -next)] = vecs[i].clone();
            frame[coord(m, next)] = y;
            next += 1;
        }
        let ok = (0..self.ambient).all(|a| {
            (0..self.ambient).all(|b| h.eval(&frame[a], &frame[b]) == h.gram().get(a, b))
        });
        ok.then_some(frame)
    }

    /// Checks that the standard apartment is isomorphic to the Coxeter
    /// complex of the same type via `w W_i -> span{e_w(1..i)}` in type A and
    /// `w W_i -> span{e_w(i..m)}` in type C.
    pub fn apartment_matches_coxeter(&self) -> bool {
        let Ok(sys) = CoxeterSystem::new(self.ty, self.rank) else { return false };
        let cc = CoxeterComplex::new(sys);
        let m = self.rank;
        let image = |v: u32| -> Option<u32> {
            let (ty, w) = cc.vertex(v);
            let perm = &cc.system().element(w).0;
            let coords: Vec<usize> = match self.ty {
                CoxeterType::A => perm[..ty].iter().map(|&x| x as usize - 1).collect(),
                CoxeterType::C => perm[ty - 1..].iter().map(|&x| coord(m, x as i32)).collect(),
            };
            self.vertex_of(&Subspace::coordinate(self.ambient, &coords))
        };
        let mut map = Vec::with_capacity(cc.vertex_count());
        for v in 0..cc.vertex_count() as u32 {
            let Some(b) = image(v) else { return false };
            if !self.apartment.contains_vertex(b) {
                return false;
            }
            map.push(b);
        }
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != map.len() || sorted.len() != self.apartment.count(0) {
            return false;
        }
        let top = self.rank as i64 - 1;
        let imgs: Vec<Simplex> = cc
            .complex()
            .simplices(top)
            .iter()
            .map(|s| {
                let mut t: Simplex = s.iter().map(|&v| map[v as usize]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        imgs.len() == self.apartment.count(top) && imgs.iter().all(|s| self.apartment.contains(s))
    }

    /// Sidecar text: `<vertex> <type> <rows>` per vertex, rows of the
    /// echelon basis separated by `;`.
    pub fn sidecar(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# ambient {} q {}", self.ambient, self.field.order());
        for (v, s) in self.subspaces.iter().enumerate() {
            let _ = writeln!(out, "{v} {} {}", s.dim(), s.to_text());
        }
        out
    }

    /// Parses [`Self::sidecar`] output.
    pub fn parse_sidecar(text: &str) -> Result<Vec<(u32, Subspace)>, GeometryError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| GeometryError::Parse("empty sidecar".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (ambient, q) = match h[..] {
            ["#", "ambient", a, "q", q] => (
                a.parse::<usize>().map_err(|_| GeometryError::Parse("bad ambient".into()))?,
                q.parse::<usize>().map_err(|_| GeometryError::Parse("bad q".into()))?,
            ),
            _ => return Err(GeometryError::Parse(format!("bad header {header:?}"))),
        };
        let f = FiniteField::new(q)?;
        let mut out = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut parts = line.splitn(3, ' ');
            let v: u32 = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| GeometryError::Parse(line.into()))?;
            let d: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| GeometryError::Parse(line.into()))?;
            let s = Subspace::from_text(&f, ambient, parts.next().unwrap_or(""))?;
            if s.dim() != d {
                return Err(GeometryError::Parse(format!("vertex {v}: dimension mismatch")));
            }
            out.push((v, s));
        }
        Ok(out)
    }

    pub fn form_kind(&self) -> Option<FormKind> {
        self.form.as_ref().map(HermitianForm::kind)
    }
}
