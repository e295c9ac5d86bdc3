//! The versioned report document.

use loclab_core::nogo::{
    BatchSummary, BorchersOutcome, BuschReport, ConditionMatrix, ConjectureEntry, LeakageReport, LemmaSuiteReport,
    ZeroSetClass,
};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{Result, RunError};

pub const SCHEMA: &str = "loclab.report/v1";

/// Slack on probabilities and effect spectra before they count as
/// violations.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub config: ExperimentConfig,
    /// One entry per configured experiment, in config order.
    pub results: Vec<ExperimentResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentResult {
    Matrix {
        matrices: Vec<ConditionMatrix>,
        conjecture: Vec<ConjectureEntry>,
    },
    Leakage { runs: Vec<LeakageRun> },
    Busch { spectra: Vec<BuschSpectra> },
    Hegerfeldt { summary: BatchSummary<ZeroSetClass> },
    Borchers { summary: BatchSummary<BorchersOutcome> },
    Lemmas { report: LemmaSuiteReport },
}

impl ExperimentResult {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentResult::Matrix { .. } => "matrix",
            ExperimentResult::Leakage { .. } => "leakage",
            ExperimentResult::Busch { .. } => "busch",
            ExperimentResult::Hegerfeldt { .. } => "hegerfeldt",
            ExperimentResult::Borchers { .. } => "borchers",
            ExperimentResult::Lemmas { .. } => "lemmas",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageRun {
    pub system: String,
    /// Set when the system has no sharp localization or the initial
    /// region supports no state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub reports: Vec<LeakageReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuschSpectra {
    pub system: String,
    pub reports: Vec<BuschReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub experiment: usize,
    pub kind: String,
    pub seconds: f64,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parses a report, rejecting any other schema version.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Header {
            schema: String,
        }
        let header: Header = serde_json::from_str(text).map_err(|e| RunError::InvalidConfig(e.to_string()))?;
        if header.schema != SCHEMA {
            return Err(RunError::SchemaMismatch {
                expected: SCHEMA.to_string(),
                found: header.schema,
            });
        }
        serde_json::from_str(text).map_err(|e| RunError::InvalidConfig(e.to_string()))
    }

    pub fn matrices(&self) -> impl Iterator<Item = &ConditionMatrix> {
        self.results.iter().flat_map(|r| match r {
            ExperimentResult::Matrix { matrices, .. } => matrices.as_slice(),
            _ => &[],
        })
    }

    /// Invariants that must hold in every run whatever the system. A
    /// nonempty list means exit code 2.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.results {
            match r {
                ExperimentResult::Matrix { .. } => {}
                ExperimentResult::Leakage { runs } => {
                    for run in runs {
                        for l in &run.reports {
                            let p = l.leaked_probability;
                            if !(-BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&p) {
                                out.push(format!("{}: leakage probability {p:e} outside [0, 1]", run.system));
                            }
                            if l.time == 0.0 && p != 0.0 {
                                out.push(format!("{}: leakage {p:e} at t = 0", run.system));
                            }
                        }
                    }
                }
                ExperimentResult::Busch { .. } => {}
                ExperimentResult::Hegerfeldt { summary } => {
                    let n = summary.count(ZeroSetClass::Anomalous);
                    if n > 0 {
                        out.push(format!("{n} anomalous zero sets"));
                    }
                }
                ExperimentResult::Borchers { summary } => {
                    let n = summary.count(BorchersOutcome::Inconsistent);
                    if n > 0 {
                        out.push(format!("{n} inconsistent Borchers probes"));
                    }
                }
                ExperimentResult::Lemmas { report } => {
                    for (name, t) in [
                        ("invariance_forces_zero", &report.invariance_forces_zero),
                        ("covering_join_invariant", &report.covering_join_invariant),
                        ("root_lemma", &report.root_lemma),
                    ] {
                        if t.violations > 0 {
                            out.push(format!("{name}: {} violations", t.violations));
                        }
                    }
                }
            }
        }
        out
    }
}
