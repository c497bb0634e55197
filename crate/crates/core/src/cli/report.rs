//! Report documents written by the subcommands.

use serde::Serialize;

use crate::checker::{CheckerConfig, Diagnostics, Inconclusive, OracleOutcome, Status, Verdict, Witness};
use crate::determinant::DegreeReport;
use crate::region::Region;

const TOOL: &str = env!("CARGO_PKG_NAME");
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Oracle margins below this multiple of the exclusion margin count as marginal.
pub const MARGINAL_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub region: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Inconclusive>,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_check: Option<DegreeReport>,
    pub config: CheckerConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl Report {
    pub fn new(
        command: &'static str,
        region: &Region,
        verdict: Verdict,
        degree_check: Option<DegreeReport>,
        config: &CheckerConfig,
        wall_time_ms: Option<f64>,
    ) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command,
            region: region.to_string(),
            status: verdict.status,
            witness: verdict.witness,
            reason: verdict.reason,
            diagnostics: verdict.diagnostics,
            degree_check,
            config: config.clone(),
            wall_time_ms,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub region: String,
    pub status: Status,
    /// "counterexample found" or "no counterexample at N samples".
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples: usize,
    pub vertex_members: u64,
    pub vertices_exhaustive: bool,
    pub min_boundary_margin: Option<f64>,
    pub robust_counterexample: bool,
    pub config: CheckerConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

fn oracle_label(o: &OracleOutcome) -> String {
    match o.verdict.status {
        Status::Unstable => "counterexample found".into(),
        _ => format!("no counterexample at {} samples", o.samples),
    }
}

impl OracleReport {
    pub fn new(region: &Region, o: OracleOutcome, config: &CheckerConfig, wall_time_ms: Option<f64>) -> Self {
        OracleReport {
            tool: TOOL,
            version: VERSION,
            command: "oracle",
            region: region.to_string(),
            status: o.verdict.status,
            label: oracle_label(&o),
            witness: o.verdict.witness.clone(),
            samples: o.samples,
            vertex_members: o.vertex_members,
            vertices_exhaustive: o.vertices_exhaustive,
            min_boundary_margin: o.min_boundary_margin,
            robust_counterexample: o.robust_counterexample,
            config: config.clone(),
            wall_time_ms,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Inconclusive>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub status: Status,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub min_boundary_margin: Option<f64>,
    pub robust_counterexample: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub region: String,
    pub check: CheckSummary,
    pub oracle: OracleSummary,
    pub agreement: bool,
    /// The oracle saw a member with normalized `|det|` on the boundary below
    /// `10 · exclusion_margin` and found no counterexample with a root
    /// clearly outside the region.
    pub marginal: bool,
    pub config: CheckerConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl CompareReport {
    pub fn new(region: &Region, check: Verdict, oracle: OracleOutcome, config: &CheckerConfig) -> Self {
        let agreement = check.status == oracle.verdict.status;
        let marginal = !oracle.robust_counterexample
            && oracle
                .min_boundary_margin
                .is_some_and(|m| m < MARGINAL_FACTOR * config.exclusion_margin);
        CompareReport {
            tool: TOOL,
            version: VERSION,
            command: "compare",
            region: region.to_string(),
            check: CheckSummary {
                status: check.status,
                witness: check.witness,
                reason: check.reason,
                diagnostics: check.diagnostics,
            },
            oracle: OracleSummary {
                status: oracle.verdict.status,
                label: oracle_label(&oracle),
                witness: oracle.verdict.witness,
                min_boundary_margin: oracle.min_boundary_margin,
                robust_counterexample: oracle.robust_counterexample,
            },
            agreement,
            marginal,
            config: config.clone(),
            wall_time_ms: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchEntry {
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Status>,
    pub agreement: bool,
    pub marginal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BatchEntry {
    pub fn from_report(file: String, r: CompareReport) -> Self {
        BatchEntry {
            file,
            check: Some(r.check.status),
            oracle: Some(r.oracle.status),
            agreement: r.agreement,
            marginal: r.marginal,
            error: None,
        }
    }

    pub fn error(file: String, message: String) -> Self {
        BatchEntry { file, check: None, oracle: None, agreement: false, marginal: false, error: Some(message) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Tally {
    pub total: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub marginal: usize,
    pub non_marginal_disagreements: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub tally: Tally,
    pub families: Vec<BatchEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl BatchReport {
    pub fn new(families: Vec<BatchEntry>, wall_time_ms: Option<f64>) -> Self {
        let mut tally = Tally { total: families.len(), ..Default::default() };
        for e in &families {
            if e.error.is_some() {
                tally.errors += 1;
                continue;
            }
            if e.marginal {
                tally.marginal += 1;
            }
            if e.agreement {
                tally.agreements += 1;
            } else {
                tally.disagreements += 1;
                if !e.marginal {
                    tally.non_marginal_disagreements += 1;
                }
            }
        }
        BatchReport { tool: TOOL, version: VERSION, command: "compare", tally, families, wall_time_ms }
    }
}
