//! Checks binding the exact index predictions to numerical measurements, and
//! the suite runner.

mod acceptance;
mod checks;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use acceptance::acceptance_checks;
pub use checks::{
    check_constant_one_inequality, check_fractional_embedding, check_gn_inequality, check_sobolev_ratio_dilation,
    density_convergence_check, membership_concordance, property_checks, DensityMode, MembershipCell,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    /// Named measurements; a `Fail` always includes the violating quantity.
    pub measured: BTreeMap<String, f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        CheckOutcome {
            name: name.into(),
            status: CheckStatus::Pass,
            measured: BTreeMap::new(),
            tolerance,
            notes: Vec::new(),
        }
    }

    pub fn measure(&mut self, key: impl Into<String>, v: f64) -> &mut Self {
        self.measured.insert(key.into(), v);
        self
    }

    pub fn note(&mut self, n: impl Into<String>) -> &mut Self {
        self.notes.push(n.into());
        self
    }

    /// Records `key = v` and fails the check unless `ok`.
    pub fn require(&mut self, key: impl Into<String>, v: f64, ok: bool) -> &mut Self {
        let key = key.into();
        if !ok {
            self.status = CheckStatus::Fail;
            self.notes.push(format!("violated: {key} = {v:e}"));
        }
        self.measured.insert(key, v);
        self
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = CheckStatus::Skip;
        self.notes.push(reason.into());
        self
    }

    pub fn fail(&mut self, reason: impl Into<String>) -> &mut Self {
        self.status = CheckStatus::Fail;
        self.notes.push(reason.into());
        self
    }

    /// Turns an error from inside a check into a `Fail` outcome.
    pub fn from_error(name: &str, e: crate::Error) -> Self {
        let mut o = CheckOutcome::new(name, 0.0);
        o.fail(format!("error: {e}"));
        o
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// A named check. Runs are pure: identical inputs give identical outcomes.
pub struct Check {
    pub name: &'static str,
    pub description: &'static str,
    pub run: fn() -> CheckOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// The twelve acceptance criteria.
    Acceptance,
    /// Embedding, interpolation and density property checks.
    Properties,
    All,
    Empty,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "acceptance" => Ok(Suite::Acceptance),
            "properties" => Ok(Suite::Properties),
            "all" => Ok(Suite::All),
            "empty" | "none" => Ok(Suite::Empty),
            _ => Err(crate::Error::InvalidParameter(format!(
                "unknown suite '{s}' (acceptance, properties, all, empty)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub suite: Option<Suite>,
    /// Only checks whose name contains one of these substrings run.
    pub filter: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub outcomes: Vec<CheckOutcome>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn registered_checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Acceptance => acceptance_checks(),
        Suite::Properties => property_checks(),
        Suite::All => {
            let mut v = acceptance_checks();
            v.extend(property_checks());
            v
        }
        Suite::Empty => Vec::new(),
    }
}

/// Runs the selected checks concurrently; the report is sorted by name. A
/// panicking or erroring check becomes a `Fail` and the rest still run.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let checks: Vec<Check> = registered_checks(cfg.suite.unwrap_or(Suite::Empty))
        .into_iter()
        .filter(|c| cfg.filter.is_empty() || cfg.filter.iter().any(|f| c.name.contains(f.as_str())))
        .collect();
    let mut outcomes: Vec<CheckOutcome> = checks
        .par_iter()
        .map(|c| {
            let mut o = std::panic::catch_unwind(c.run).unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                let mut o = CheckOutcome::new(c.name, 0.0);
                o.fail(format!("panicked: {msg}"));
                o
            });
            o.name = c.name.to_string();
            o
        })
        .collect();
    outcomes.sort_by(|a, b| a.name.cmp(&b.name));
    let mut summary = SuiteSummary::default();
    for o in &outcomes {
        match o.status {
            CheckStatus::Pass => summary.pass += 1,
            CheckStatus::Fail => summary.fail += 1,
            CheckStatus::Skip => summary.skip += 1,
        }
    }
    SuiteReport { outcomes, summary }
}
