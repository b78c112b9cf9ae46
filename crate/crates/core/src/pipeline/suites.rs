use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{snf, FgAbGroup};
use crate::geometry::{opposition_complex, Building, GeometryError, OppositionComplex};
use crate::group::{FiniteGroup, GroupError, StabilityPair};
use crate::homology::{
    check_ordering, group_homology, lhs_spectral_sequence, relative_group_homology, relative_lhs, stability_e1_page, GModule,
    HomologyError, OppositionChains,
};
use crate::simplicial::{reduced_homology, HomologyGroups, TypeSet, TypedComplex};

use super::report::{Claim, SuiteReport};
use super::{instance_building, RunConfig};

/// Vertex links are checked exhaustively up to this many vertices and on
/// a seeded sample of [`LINK_SAMPLE`] vertices beyond.
pub const EXHAUSTIVE_LINKS: usize = 64;
pub const LINK_SAMPLE: usize = 20;
/// Every type ordering is checked when there are at most this many.
const MAX_ORDERINGS: usize = 6;
/// Comparing the opposition complex with its definition is quadratic in
/// the number of building simplices.
const MAX_DEFINITION_SIMPLICES: usize = 20_000;

/// Why a construction could not be used by a suite.
#[derive(Clone, Debug)]
pub(crate) enum Blocked {
    /// Over a size cap or the budget: claims are skipped.
    Cap(String),
    /// A genuine error: claims fail.
    Error(String),
}

impl Blocked {
    fn claim(&self, name: &str) -> Claim {
        match self {
            Blocked::Cap(m) => Claim::skipped(name, m.clone()),
            Blocked::Error(m) => Claim::failed(name, m.clone()),
        }
    }
}

impl From<GeometryError> for Blocked {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::CapExceeded(_) => Blocked::Cap(e.to_string()),
            _ => Blocked::Error(e.to_string()),
        }
    }
}

impl From<GroupError> for Blocked {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded(_) | GroupError::Geometry(GeometryError::CapExceeded(_)) => Blocked::Cap(e.to_string()),
            _ => Blocked::Error(e.to_string()),
        }
    }
}

impl From<HomologyError> for Blocked {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Budget { .. } => Blocked::Cap(e.to_string()),
            HomologyError::Group(g) => g.into(),
            _ => Blocked::Error(e.to_string()),
        }
    }
}

pub(crate) struct Geometry {
    pub building: Building,
    pub opposition: OppositionComplex,
}

pub(crate) struct Chains {
    pub pair: StabilityPair,
    pub chains: OppositionChains,
}

/// Constructions shared by the suites of one run, built at most once.
pub(crate) struct Instance<'a> {
    config: &'a RunConfig,
    geometry: OnceLock<Result<Arc<Geometry>, Blocked>>,
    chains: OnceLock<Result<Arc<Chains>, Blocked>>,
}

impl<'a> Instance<'a> {
    pub fn new(config: &'a RunConfig) -> Self {
        Instance { config, geometry: OnceLock::new(), chains: OnceLock::new() }
    }

    pub fn geometry(&self) -> Result<Arc<Geometry>, Blocked> {
        self.geometry
            .get_or_init(|| {
                let c = self.config;
                let building = instance_building(c.series, c.n, c.q, &c.caps)?;
                let opposition = opposition_complex(&building)?;
                Ok(Arc::new(Geometry { building, opposition }))
            })
            .clone()
    }

    pub fn chains(&self) -> Result<Arc<Chains>, Blocked> {
        self.chains
            .get_or_init(|| {
                let c = self.config;
                let pair = StabilityPair::new(c.series, c.n, c.q, &c.caps)?;
                let chains = OppositionChains::new(&pair)?;
                Ok(Arc::new(Chains { pair, chains }))
            })
            .clone()
    }
}

fn groups_json(h: &HomologyGroups) -> Value {
    Value::Object(h.iter().map(|(d, g)| (d.to_string(), Value::String(g.to_string()))).collect())
}

/// First degree where `h` is not free and concentrated in degree `top`.
fn sphericity_witness(h: &HomologyGroups, top: i64) -> Option<String> {
    h.iter()
        .find(|(d, g)| if *d == top { !g.is_free() } else { !g.is_zero() })
        .map(|(d, g)| format!("reduced H_{d} = {g}"))
}

/// Free reduced homology concentrated in the top degree, of rank
/// `(-1)^dim` times the reduced Euler characteristic of the simplex counts.
fn spherical_claim(name: &str, k: &TypedComplex) -> Claim {
    let dim = k.dim();
    let h = reduced_homology(k);
    let counts: Vec<usize> = (0..=dim).map(|d| k.count(d)).collect();
    let chi = k.reduced_euler_characteristic();
    let oracle = if dim % 2 == 0 { chi } else { -chi };
    let rank = h.degree(dim).free_rank() as i64;
    let witness = sphericity_witness(&h, dim).or_else(|| (rank != oracle).then(|| format!("top rank {rank} but Euler oracle {oracle}")));
    Claim::new(
        name,
        witness.is_none(),
        format!("all degrees -1..={dim}"),
        json!({ "dimension": dim, "simplex_counts": counts, "reduced_homology": groups_json(&h), "euler_oracle": oracle }),
    )
    .with_witness(witness)
}

pub(crate) fn geometry(inst: &Instance) -> SuiteReport {
    const NAMES: [&str; 3] = ["building.apartment", "building.thickness", "opposition.definition"];
    let g = match inst.geometry() {
        Ok(g) => g,
        Err(b) => return SuiteReport::new("geometry", NAMES.iter().map(|n| b.claim(n)).collect()),
    };
    let b = &g.building;
    let cx = b.complex();
    let counts: Vec<usize> = (0..=cx.dim()).map(|d| cx.count(d)).collect();
    let thickness = b.thickness();
    let thin_panel = thickness.iter().find(|(_, (lo, _))| *lo < 2).map(|(t, (lo, _))| format!("panel of cotype {t} in {lo} chambers"));
    let mut claims = vec![
        Claim::new(
            NAMES[0],
            b.apartment_matches_coxeter(),
            "standard apartment",
            json!({ "type": format!("{:?}", b.ty()), "rank": b.rank(), "simplex_counts": counts }),
        )
        .with_witness(Some("standard apartment is not the Coxeter complex".into())),
        Claim::new(
            NAMES[1],
            thin_panel.is_none(),
            "all panels",
            Value::Object(thickness.iter().map(|(t, (lo, hi))| (t.to_string(), json!([lo, hi]))).collect()),
        )
        .with_witness(thin_panel),
    ];
    let total: usize = counts.iter().sum();
    claims.push(if total <= MAX_DEFINITION_SIMPLICES {
        let o = g.opposition.complex();
        Claim::new(
            NAMES[2],
            g.opposition.matches_definition(b),
            "all pairs of building simplices",
            json!({ "simplex_counts": (0..=o.dim()).map(|d| o.count(d)).collect::<Vec<_>>() }),
        )
        .with_witness(Some("opposition complex differs from the set of opposite pairs".into()))
    } else {
        Claim::skipped(NAMES[2], format!("{total} building simplices exceed {MAX_DEFINITION_SIMPLICES}"))
    });
    SuiteReport::new("geometry", claims)
}

/// Vertices whose links are checked: all of them for small complexes, a
/// seeded sample otherwise. Sorted.
pub fn link_sample(vertices: &[u32], seed: u64) -> Vec<u32> {
    let mut chosen: Vec<u32> = if vertices.len() <= EXHAUSTIVE_LINKS {
        vertices.to_vec()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        vertices.choose_multiple(&mut rng, LINK_SAMPLE).copied().collect()
    };
    chosen.sort_unstable();
    chosen
}

pub(crate) fn sphericity(inst: &Instance, seed: u64) -> SuiteReport {
    const NAMES: [&str; 3] = ["building.solomon_tits", "opposition.spherical", "opposition.vertex_links"];
    let g = match inst.geometry() {
        Ok(g) => g,
        Err(b) => return SuiteReport::new("sphericity", NAMES.iter().map(|n| b.claim(n)).collect()),
    };
    let o = g.opposition.complex();
    let vertices = o.vertices();
    let sample = link_sample(&vertices, seed);
    let top = o.dim() - 1;
    let mut witness = None;
    let mut ranks = Vec::with_capacity(sample.len());
    for &v in &sample {
        let h = reduced_homology(&o.link(v));
        if let Some(w) = sphericity_witness(&h, top) {
            witness = Some(format!("link of vertex {v}: {w}"));
            break;
        }
        ranks.push(h.degree(top).free_rank());
    }
    let range = if sample.len() == vertices.len() {
        format!("all {} vertices", vertices.len())
    } else {
        format!("{} of {} vertices, seed {seed}", sample.len(), vertices.len())
    };
    SuiteReport::new(
        "sphericity",
        vec![
            spherical_claim(NAMES[0], g.building.complex()),
            spherical_claim(NAMES[1], o),
            Claim::new(NAMES[2], witness.is_none(), range, json!({ "vertices": sample, "top_degree": top, "top_ranks": ranks }))
                .with_witness(witness),
        ],
    )
}

pub(crate) fn exactness(inst: &Instance) -> SuiteReport {
    let c = match inst.chains() {
        Ok(c) => c,
        Err(b) => return SuiteReport::new("exactness", vec![b.claim("cstar.orderings"), b.claim("cstar.iota")]),
    };
    let canonical = c.pair.type_order().to_vec();
    let mut orders: Vec<Vec<u32>> = vec![canonical.clone()];
    if let Ok(ts) = TypeSet::new(canonical.clone()) {
        let all = ts.orderings();
        if all.len() <= MAX_ORDERINGS {
            orders = all.into_iter().map(|t| t.labels().to_vec()).collect();
        }
    }
    let mut claims = Vec::new();
    for order in &orders {
        let name = format!("cstar.ordering{order:?}").replace(' ', "");
        claims.push(match check_ordering(&c.pair, order) {
            Ok(check) => {
                let witness = check
                    .levels
                    .iter()
                    .find(|l| !l.passes())
                    .map(|l| format!("level p = {}", l.p))
                    .or_else(|| (!check.exact).then(|| "C_* has nonzero homology".to_string()));
                Claim::new(
                    name,
                    check.passes(),
                    format!("levels 1..={}, all degrees", order.len()),
                    serde_json::to_value(&check).expect("serializes"),
                )
                .with_witness(witness)
            }
            Err(e) => Blocked::from(e).claim(&name),
        });
    }
    claims.push(match c.chains.iota() {
        Ok(f) => {
            let source = f.source();
            let ranks: Vec<usize> = source.ranks().to_vec();
            let injective = (source.start()..=source.top()).all(|k| {
                let m = f.at(k);
                snf(&m).rank() == m.cols()
            });
            Claim::new("cstar.iota", injective, "all degrees", json!({ "source_ranks": ranks }))
                .with_witness(Some("iota is not injective".into()))
        }
        Err(e) => Blocked::from(e).claim("cstar.iota"),
    });
    SuiteReport::new("exactness", claims)
}

pub(crate) fn e1(inst: &Instance, qmax: usize, budget: u128) -> SuiteReport {
    let c = match inst.chains() {
        Ok(c) => c,
        Err(b) => return SuiteReport::new("e1", vec![b.claim("e1.page")]),
    };
    let page = match stability_e1_page(&c.pair, &c.chains, qmax, budget) {
        Ok(p) => p,
        Err(e) => return SuiteReport::new("e1", vec![Blocked::from(e).claim("e1.page")]),
    };
    let show = |g: &Option<FgAbGroup>| g.as_ref().map_or(Value::Null, |g| Value::String(g.to_string()));
    let mut claims = Vec::new();
    for s in &page.spots {
        let name = format!("e1[{},{}]", s.p, s.q);
        claims.push(if s.skipped() {
            Claim::skipped(name, format!("over the budget of {budget} columns"))
        } else {
            Claim::new(&name, s.passes(), format!("p = {}, q = {}", s.p, s.q), json!({ "value": show(&s.value), "expected": show(&s.expected) }))
                .with_witness(Some(format!("E^1_{{{},{}}} = {} but expected {}", s.p, s.q, show(&s.value), show(&s.expected))))
        });
    }
    let row: Vec<_> = page.spots.iter().filter(|s| s.q == 0).collect();
    let nonzero = row.iter().find(|s| !s.value.as_ref().is_some_and(FgAbGroup::is_zero));
    claims.push(
        Claim::new(
            "e1.row_zero",
            nonzero.is_none(),
            format!("q = 0, 0 <= p <= {}", row.last().map_or(0, |s| s.p)),
            json!(row.iter().map(|s| show(&s.value)).collect::<Vec<_>>()),
        )
        .with_witness(nonzero.map(|s| format!("E^1_{{{},0}} = {}", s.p, show(&s.value)))),
    );
    for (label, totals) in [("quotient", &page.quotient_total), ("cone", &page.cone_total)] {
        for t in totals {
            let name = format!("e1.{label}_total[{}]", t.degree);
            claims.push(match &t.value {
                None => Claim::skipped(name, format!("over the budget of {budget} columns")),
                Some(h) => Claim::new(&name, h.is_zero(), format!("degree {}", t.degree), json!(h.to_string()))
                    .with_witness(Some(format!("H_{} = {h}", t.degree))),
            });
        }
    }
    SuiteReport::new("e1", claims)
}

fn element_of_order(g: &FiniteGroup, k: usize) -> Option<u32> {
    g.elements().find(|&x| {
        let (mut y, mut ord) = (x, 1);
        while y != g.identity() {
            y = g.mul(y, x);
            ord += 1;
        }
        ord == k
    })
}

/// Lyndon-Hochschild-Serre checks on `S_3 ⊳ C_3` and on `C_6 ⊳ C_3`
/// relative to `C_2`, through degree `top`.
pub(crate) fn lhs(top: usize, budget: u128) -> SuiteReport {
    let kmax = top + 1;
    let range = format!("degrees 0..={top}");
    let absolute = || -> Result<Claim, HomologyError> {
        let s3 = Arc::new(FiniteGroup::symmetric(3)?);
        let c3 = s3.generated_by(&[element_of_order(&s3, 3).expect("S_3 has 3-cycles")]);
        let m = GModule::trivial(s3, 1);
        let lhs = lhs_spectral_sequence(&m, &c3, kmax, budget)?;
        let direct = group_homology(&m, kmax, budget)?;
        let via = lhs.abutment();
        let ok = via == direct && lhs.reconciles()?;
        let witness = first_mismatch(&direct, &via);
        Ok(Claim::new("lhs.s3_over_c3", ok, &range, json!({ "direct": strings(&direct), "lhs": strings(&via) })).with_witness(witness))
    };
    let relative = || -> Result<Claim, HomologyError> {
        let c6 = Arc::new(FiniteGroup::cyclic(6)?);
        let c2 = c6.generated_by(&[element_of_order(&c6, 2).expect("C_6 has an involution")]);
        let c3 = c6.generated_by(&[element_of_order(&c6, 3).expect("C_6 has elements of order 3")]);
        let m = GModule::trivial(c6, 1);
        let lhs = relative_lhs(&m, &c2, &c3, kmax, budget)?;
        let direct = relative_group_homology(&m, &c2, kmax, budget)?;
        let via = lhs.abutment();
        let ok = via == direct && lhs.reconciles()?;
        let witness = first_mismatch(&direct, &via);
        Ok(Claim::new("lhs.relative_c6_c2_over_c3", ok, &range, json!({ "direct": strings(&direct), "lhs": strings(&via) }))
            .with_witness(witness))
    };
    let claims = [("lhs.s3_over_c3", absolute()), ("lhs.relative_c6_c2_over_c3", relative())]
        .into_iter()
        .map(|(name, r)| r.unwrap_or_else(|e| Blocked::from(e).claim(name)))
        .collect();
    SuiteReport::new("lhs", claims)
}

fn strings(gs: &[FgAbGroup]) -> Vec<String> {
    gs.iter().map(ToString::to_string).collect()
}

fn first_mismatch(a: &[FgAbGroup], b: &[FgAbGroup]) -> Option<String> {
    let k = (0..a.len().max(b.len())).find(|&k| a.get(k) != b.get(k))?;
    let show = |g: Option<&FgAbGroup>| g.map_or("missing".to_string(), ToString::to_string);
    Some(format!("degree {k}: direct {} but LHS {}", show(a.get(k)), show(b.get(k))))
}
