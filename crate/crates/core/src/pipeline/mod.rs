//! Orchestration: instance construction, verification suites, a content
//! addressed result cache, JSON reports and the stability-range calculator.

mod cache;
mod ranges;
mod report;
mod suites;

use std::fmt;
use std::io;
use std::path::PathBuf;
use std::str::FromStr;
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{opposition_complex, Building, Caps, FiniteField, FormKind, GeometryError, HermitianForm};
use crate::homology::DEFAULT_BUDGET;
use crate::group::Series;
use crate::simplicial::{reduced_homology, TypedComplex};

pub use cache::{content_hash, key_of, Cache, CacheEntry};
pub use ranges::{
    regions, stability_range_induction, ClosedForm, RangeError, Region, StabilityRangeRule, SL_REGIONS, SO_REGIONS, U_REGIONS,
};
pub use report::{Claim, ConfigSummary, Report, Status, SuiteReport, REPORT_SCHEMA};
pub use suites::{link_sample, EXHAUSTIVE_LINKS, LINK_SAMPLE};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl PipelineError {
    /// Over a size cap rather than wrong.
    pub fn is_cap(&self) -> bool {
        matches!(self, PipelineError::Geometry(GeometryError::CapExceeded(_)))
    }
}

/// The verification suites, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SuiteKind {
    Geometry,
    Sphericity,
    Exactness,
    E1,
    Lhs,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 5] = [SuiteKind::Geometry, SuiteKind::Sphericity, SuiteKind::Exactness, SuiteKind::E1, SuiteKind::Lhs];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Geometry => "geometry",
            SuiteKind::Sphericity => "sphericity",
            SuiteKind::Exactness => "exactness",
            SuiteKind::E1 => "e1",
            SuiteKind::Lhs => "lhs",
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = PipelineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PipelineError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub series: Series,
    pub n: usize,
    pub q: usize,
    /// `E^1` spots with `p + q <= qmax` are computed.
    pub qmax: usize,
    /// Column budget for bar-complex computations.
    pub budget: u128,
    pub caps: Caps,
    pub seed: u64,
    pub suites: Vec<SuiteKind>,
    pub cache: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(series: Series, n: usize, q: usize) -> Self {
        RunConfig {
            series,
            n,
            q,
            qmax: 2,
            budget: DEFAULT_BUDGET,
            caps: Caps::default(),
            seed: 0,
            suites: SuiteKind::ALL.to_vec(),
            cache: None,
            report: None,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.n == 0 {
            return Err(PipelineError::Config("n must be at least 1".into()));
        }
        if self.q < 2 {
            return Err(PipelineError::Config("q must be a prime power".into()));
        }
        if self.budget == 0 || self.caps.max_q == 0 || self.caps.max_ambient == 0 || self.caps.max_subspaces == 0 {
            return Err(PipelineError::Config("budget and caps must be positive".into()));
        }
        if self.suites.is_empty() {
            return Err(PipelineError::Config("no suites selected".into()));
        }
        Ok(())
    }

    pub fn summary(&self) -> ConfigSummary {
        let mut suites = self.suites.clone();
        suites.sort();
        suites.dedup();
        ConfigSummary {
            series: self.series.to_string(),
            n: self.n,
            q: self.q,
            qmax: self.qmax,
            budget: self.budget.to_string(),
            seed: self.seed,
            max_q: self.caps.max_q,
            max_ambient: self.caps.max_ambient,
            max_subspaces: self.caps.max_subspaces.to_string(),
            suites: suites.iter().map(|s| s.name().to_string()).collect(),
        }
    }

    /// Everything a suite result depends on.
    fn suite_key(&self, kind: SuiteKind) -> String {
        let mut summary = self.summary();
        summary.suites = vec![kind.name().to_string()];
        key_of(&("suite", env!("CARGO_PKG_VERSION"), summary))
    }
}

/// The building of the stability pair of `series` with parameter `n`:
/// type `A_{n+1}` on `F_q^{n+2}` for GL and SL, type `C_{n+1}` on the
/// symplectic, split orthogonal or unitary space of Witt index `n + 1`.
pub fn instance_building(series: Series, n: usize, q: usize, caps: &Caps) -> Result<Building, GeometryError> {
    caps.check(if matches!(series, Series::GL | Series::SL) { n + 2 } else { 2 * n + 2 }, q)?;
    let f = FiniteField::new(q)?;
    let kind = match series {
        Series::GL | Series::SL => return Building::type_a(&f, n + 2, caps),
        Series::Sp => FormKind::Symplectic,
        Series::SO => FormKind::SplitOrthogonal,
        Series::U => FormKind::Unitary { eps_negative: false },
    };
    Building::type_c(&HermitianForm::new(&f, kind, n + 1)?, caps)
}

/// Runs the selected suites, concurrently, reusing cached suite results,
/// and writes the report when a path is configured.
pub fn run_verification(config: &RunConfig) -> Result<Report, PipelineError> {
    config.validate()?;
    let cache = config.cache.as_ref().map(Cache::open).transpose()?;
    let mut kinds = config.suites.clone();
    kinds.sort();
    kinds.dedup();
    let instance = suites::Instance::new(config);
    let results: Vec<SuiteReport> = thread::scope(|scope| {
        let handles: Vec<_> = kinds
            .iter()
            .map(|&kind| {
                let (instance, cache) = (&instance, cache.as_ref());
                scope.spawn(move || {
                    let key = config.suite_key(kind);
                    if let Some(hit) = cache.and_then(|c| c.get::<SuiteReport>(&key)) {
                        return hit;
                    }
                    let report = match kind {
                        SuiteKind::Geometry => suites::geometry(instance),
                        SuiteKind::Sphericity => suites::sphericity(instance, config.seed),
                        SuiteKind::Exactness => suites::exactness(instance),
                        SuiteKind::E1 => suites::e1(instance, config.qmax, config.budget),
                        SuiteKind::Lhs => suites::lhs(config.qmax.max(2), config.budget),
                    };
                    if let Some(c) = cache {
                        // A failed write only costs a recomputation next time.
                        let _ = c.put(&key, &report);
                    }
                    report
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let report = Report::new(config.summary(), results);
    if let Some(path) = &config.report {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report)
}

/// Reduced homology of one complex, tagged with the hash of its text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub complex: String,
    pub input_hash: String,
    pub dimension: i64,
    pub simplex_counts: Vec<usize>,
    /// `(degree, group)` for every nonzero reduced homology group.
    pub reduced_homology: Vec<(i64, String)>,
}

impl BettiTable {
    pub fn compute(name: &str, k: &TypedComplex, cache: Option<&Cache>) -> BettiTable {
        let input_hash = content_hash(k.to_text().as_bytes());
        let key = key_of(&("homology", env!("CARGO_PKG_VERSION"), &input_hash));
        if let Some(hit) = cache.and_then(|c| c.get::<BettiTable>(&key)) {
            if hit.input_hash == input_hash {
                return BettiTable { complex: name.to_string(), ..hit };
            }
        }
        let h = reduced_homology(k);
        let table = BettiTable {
            complex: name.to_string(),
            input_hash,
            dimension: k.dim(),
            simplex_counts: (0..=k.dim()).map(|d| k.count(d)).collect(),
            reduced_homology: h.iter().filter(|(_, g)| !g.is_zero()).map(|(d, g)| (d, g.to_string())).collect(),
        };
        if let Some(c) = cache {
            let _ = c.put(&key, &table);
        }
        table
    }
}

/// Reduced homology of the building and of its opposition complex.
pub fn betti_tables(config: &RunConfig) -> Result<Vec<BettiTable>, PipelineError> {
    config.validate()?;
    let cache = config.cache.as_ref().map(Cache::open).transpose()?;
    let building = instance_building(config.series, config.n, config.q, &config.caps)?;
    let opposition = opposition_complex(&building)?;
    Ok(vec![
        BettiTable::compute("building", building.complex(), cache.as_ref()),
        BettiTable::compute("opposition", opposition.complex(), cache.as_ref()),
    ])
}
