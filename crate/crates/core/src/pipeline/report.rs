use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Tag identifying the layout of a serialized [`Report`].
pub const REPORT_SCHEMA: &str = "oppo.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Skipped,
    Fail,
}

impl Status {
    /// Fail dominates Skipped, which dominates Pass.
    pub fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
        statuses.into_iter().max().unwrap_or(Status::Pass)
    }

    /// 0 pass, 1 assertion failure, 2 budget or cap skip.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Skipped => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Skipped => "SKIPPED",
            Status::Fail => "FAIL",
        })
    }
}

/// One asserted fact with the range over which it was checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub status: Status,
    pub verified_range: String,
    /// Computed data backing the claim.
    pub detail: Value,
    /// Smallest failing item on failure, the reason on a skip.
    pub witness: Option<String>,
}

impl Claim {
    pub fn new(name: impl Into<String>, ok: bool, verified_range: impl Into<String>, detail: Value) -> Self {
        Claim {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            verified_range: verified_range.into(),
            detail,
            witness: None,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Claim { name: name.into(), status: Status::Skipped, verified_range: "none".into(), detail: Value::Null, witness: Some(reason.into()) }
    }

    pub fn failed(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Claim { name: name.into(), status: Status::Fail, verified_range: "none".into(), detail: Value::Null, witness: Some(reason.into()) }
    }

    /// Attaches a witness, kept only when the claim failed.
    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        if self.status == Status::Fail {
            self.witness = witness;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub status: Status,
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    pub fn new(name: &str, claims: Vec<Claim>) -> Self {
        SuiteReport { name: name.to_string(), status: Status::combine(claims.iter().map(|c| c.status)), claims }
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// The instance parameters a report was produced from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub series: String,
    pub n: usize,
    pub q: usize,
    pub qmax: usize,
    pub budget: String,
    pub seed: u64,
    pub max_q: usize,
    pub max_ambient: usize,
    pub max_subspaces: String,
    pub suites: Vec<String>,
}

/// Machine-readable outcome of a run. Serialization is deterministic in
/// the configuration and the crate version: no timings, no paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub config: ConfigSummary,
    pub status: Status,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn new(config: ConfigSummary, suites: Vec<SuiteReport>) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            status: Status::combine(suites.iter().map(|s| s.status)),
            suites,
        }
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
