//! Machine-readable and human-readable renderings of a report.

use std::fmt::Write as _;

use loclab_core::axioms::{Outcome, Verdict};
use loclab_core::nogo::ConditionMatrix;
use loclab_core::spacetime::Region;
use serde::Serialize;

use crate::config::Format;
use crate::error::{Result, RunError};
use crate::report::{ExperimentResult, ReportDocument};

pub fn export(report: &ReportDocument, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(report.to_json()),
        Format::Csv => to_csv(report),
    }
}

/// Like [`export`] with the format given by name.
pub fn export_named(report: &ReportDocument, format: &str) -> Result<String> {
    export(report, format.parse()?)
}

/// One flattened measurement. Field order is the column order.
#[derive(Debug, Default, Serialize)]
pub struct CsvRow {
    pub experiment: &'static str,
    pub system: String,
    pub item: String,
    pub outcome: String,
    pub holds: Option<bool>,
    pub residual: Option<f64>,
    pub samples: Option<usize>,
    pub region: String,
    pub probe: String,
    pub gap: Option<f64>,
    pub time: Option<f64>,
    pub probability: Option<f64>,
    pub max_eigenvalue: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub count: Option<usize>,
    pub vacuous: Option<usize>,
    pub violations: Option<usize>,
}

fn sites(r: &Region) -> String {
    r.sites().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn snake<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

/// Matrix runs give one row per verdict; leakage one per time; Busch one
/// per region; batches one per outcome class; lemmas one per lemma.
pub fn csv_rows(report: &ReportDocument) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for r in &report.results {
        let experiment = r.kind();
        match r {
            ExperimentResult::Matrix { matrices, .. } => {
                for m in matrices {
                    for v in &m.verdicts {
                        rows.push(CsvRow {
                            experiment,
                            system: m.system_label.clone(),
                            item: v.condition.to_string(),
                            outcome: snake(&v.outcome),
                            holds: Some(v.holds),
                            residual: Some(v.residual),
                            samples: Some(v.samples_examined),
                            region: v.witness.as_ref().map(|w| w.regions.iter().map(sites).collect::<Vec<_>>().join(" | ")).unwrap_or_default(),
                            ..CsvRow::default()
                        });
                    }
                }
            }
            ExperimentResult::Leakage { runs } => {
                for run in runs {
                    for l in &run.reports {
                        rows.push(CsvRow {
                            experiment,
                            system: run.system.clone(),
                            item: "leaked_probability".into(),
                            region: sites(&l.initial),
                            probe: sites(&l.probe),
                            gap: Some(l.gap),
                            time: Some(l.time),
                            probability: Some(l.leaked_probability),
                            ..CsvRow::default()
                        });
                    }
                }
            }
            ExperimentResult::Busch { spectra } => {
                for s in spectra {
                    for b in &s.reports {
                        rows.push(CsvRow {
                            experiment,
                            system: s.system.clone(),
                            item: "effect_spectrum".into(),
                            residual: Some(b.gap_to_one),
                            region: sites(&b.region),
                            max_eigenvalue: Some(b.max_eigenvalue),
                            min_eigenvalue: Some(b.min_eigenvalue),
                            ..CsvRow::default()
                        });
                    }
                }
            }
            ExperimentResult::Hegerfeldt { summary } => {
                for (class, n) in &summary.counts {
                    rows.push(CsvRow {
                        experiment,
                        item: snake(class),
                        samples: Some(summary.instances),
                        count: Some(*n),
                        ..CsvRow::default()
                    });
                }
            }
            ExperimentResult::Borchers { summary } => {
                for (outcome, n) in &summary.counts {
                    rows.push(CsvRow {
                        experiment,
                        item: snake(outcome),
                        samples: Some(summary.instances),
                        count: Some(*n),
                        ..CsvRow::default()
                    });
                }
            }
            ExperimentResult::Lemmas { report } => {
                for (name, t) in [
                    ("invariance_forces_zero", &report.invariance_forces_zero),
                    ("covering_join_invariant", &report.covering_join_invariant),
                    ("root_lemma", &report.root_lemma),
                ] {
                    rows.push(CsvRow {
                        experiment,
                        item: name.into(),
                        holds: Some(t.violations == 0),
                        residual: Some(t.max_residual),
                        samples: Some(t.checked),
                        vacuous: Some(t.vacuous),
                        violations: Some(t.violations),
                        ..CsvRow::default()
                    });
                }
            }
        }
    }
    rows
}

pub fn to_csv(report: &ReportDocument) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = csv_rows(report);
    if rows.is_empty() {
        w.serialize(CsvRow::default()).map_err(csv_error)?;
        let text = String::from_utf8(w.into_inner().map_err(|e| RunError::UnsupportedFormat(e.to_string()))?)
            .expect("csv is utf-8");
        return Ok(text.lines().next().map(|h| format!("{h}\n")).unwrap_or_default());
    }
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| RunError::UnsupportedFormat(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn csv_error(e: csv::Error) -> RunError {
    RunError::UnsupportedFormat(format!("csv: {e}"))
}

fn glyph(v: &Verdict) -> &'static str {
    match v.outcome {
        Outcome::Pass => "✓",
        Outcome::Fail => "✗",
        Outcome::Inconclusive => "?",
        Outcome::NotApplicable => "–",
    }
}

fn cell(glyph: &str, residual: Option<f64>) -> String {
    let r = residual.map(|r| format!("{r:.1e}")).unwrap_or_default();
    format!("{glyph} {r:>7}")
}

/// Conditions down, systems across; `*` marks a theorem hypothesis.
pub fn matrix_table(matrices: &[ConditionMatrix]) -> String {
    let first = 26;
    let col = matrices
        .iter()
        .map(|m| m.system_label.chars().count() + 2)
        .max()
        .unwrap_or(0)
        .max(20);
    let mut out = String::new();
    let _ = write!(out, "{:<first$}", "condition");
    for m in matrices {
        let _ = write!(out, "{:>col$}", m.system_label);
    }
    out.push('\n');
    let Some(head) = matrices.first() else {
        return out;
    };
    for v in &head.verdicts {
        let c = v.condition;
        let _ = write!(out, "{:<first$}", c.as_str());
        for m in matrices {
            let v = m.verdict(c);
            let mark = if m.hypotheses.contains(&c) { "*" } else { " " };
            let _ = write!(out, "{:>col$}", format!("{}{mark}", cell(glyph(v), (v.outcome != Outcome::NotApplicable).then_some(v.residual))));
        }
        out.push('\n');
    }
    let _ = write!(out, "{:<first$}", "hypotheses hold");
    for m in matrices {
        let _ = write!(out, "{:>col$}", if m.hypotheses_hold { "yes " } else { "no " });
    }
    out.push('\n');
    let _ = write!(out, "{:<first$}", "conclusion");
    for m in matrices {
        let _ = write!(out, "{:>col$}", format!("{} ", snake(&m.conclusion_kind)));
    }
    out.push('\n');
    let _ = write!(out, "{:<first$}", "");
    for m in matrices {
        let g = if m.conclusion_holds { "✓" } else { "✗" };
        let _ = write!(out, "{:>col$}", format!("{} ", cell(g, Some(m.conclusion_residual))));
    }
    out.push_str("\n✓ pass  ✗ fail  ? inconclusive  – not applicable  * theorem hypothesis\n");
    out
}

/// Summary for a terminal.
pub fn human(report: &ReportDocument) -> String {
    let mut out = String::new();
    for (i, r) in report.results.iter().enumerate() {
        let _ = writeln!(out, "[{}] {}", i + 1, r.kind());
        match r {
            ExperimentResult::Matrix { matrices, conjecture } => {
                out.push_str(&matrix_table(matrices));
                for c in conjecture {
                    let _ = writeln!(
                        out,
                        "conjecture probe: {} meets the hypotheses, conclusion fails, trivial dynamics residual {:.1e}",
                        c.system, c.trivial_dynamics_residual
                    );
                }
            }
            ExperimentResult::Leakage { runs } => {
                for run in runs {
                    if let Some(why) = &run.skipped {
                        let _ = writeln!(out, "  {}: skipped ({why})", run.system);
                    }
                    for l in &run.reports {
                        let _ = writeln!(
                            out,
                            "  {}: gap {} t {} leaked {:.3e}",
                            run.system, l.gap, l.time, l.leaked_probability
                        );
                    }
                }
            }
            ExperimentResult::Busch { spectra } => {
                for s in spectra {
                    let worst = s.reports.iter().map(|b| b.gap_to_one).fold(f64::INFINITY, f64::min);
                    let lowest = s.reports.iter().map(|b| b.max_eigenvalue).fold(f64::INFINITY, f64::min);
                    let _ = writeln!(
                        out,
                        "  {}: {} regions, min gap to 1 {:.3e}, min top eigenvalue {:.3e}",
                        s.system,
                        s.reports.len(),
                        worst,
                        lowest
                    );
                }
            }
            ExperimentResult::Hegerfeldt { summary } => {
                for (k, n) in &summary.counts {
                    let _ = writeln!(out, "  {}: {n}/{}", snake(k), summary.instances);
                }
            }
            ExperimentResult::Borchers { summary } => {
                for (k, n) in &summary.counts {
                    let _ = writeln!(out, "  {}: {n}/{}", snake(k), summary.instances);
                }
            }
            ExperimentResult::Lemmas { report } => {
                for (name, t) in [
                    ("invariance_forces_zero", &report.invariance_forces_zero),
                    ("covering_join_invariant", &report.covering_join_invariant),
                    ("root_lemma", &report.root_lemma),
                ] {
                    let _ = writeln!(
                        out,
                        "  {name}: checked {} vacuous {} violations {} max residual {:.1e}",
                        t.checked, t.vacuous, t.violations, t.max_residual
                    );
                }
            }
        }
    }
    for v in report.violations() {
        let _ = writeln!(out, "VIOLATION: {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Experiment, ExperimentConfig, SystemSpec};
    use crate::run::run;

    fn report() -> ReportDocument {
        let c = ExperimentConfig::from_json(
            r#"{"systems":[{"name":"frozen","size":16},{"name":"newton_wigner","size":16}],
                "experiments":[{"kind":"matrix"},{"kind":"leakage","gap":4,"times":[0,1,2]},{"kind":"borchers","instances":3}]}"#,
        )
        .unwrap();
        run(&c).unwrap()
    }

    #[test]
    fn csv_row_counts_and_columns() {
        let r = report();
        let text = to_csv(&r).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header[..6], ["experiment", "system", "item", "outcome", "holds", "residual"]);
        let recs: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
        let count = |kind: &str| recs.iter().filter(|r| &r[0] == kind).count();
        assert_eq!(count("matrix"), 2 * 12);
        assert_eq!(count("leakage"), 2 * 3);
        let leak = recs.iter().find(|r| &r[0] == "leakage").unwrap();
        let col = |name: &str| header.iter().position(|h| h == name).unwrap();
        assert_eq!(&leak[col("gap")], "4.0");
        assert_eq!(&leak[col("time")], "0.0");
        assert_eq!(&leak[col("probability")], "0.0");
        let b: usize = recs
            .iter()
            .filter(|r| &r[0] == "borchers")
            .map(|r| r[col("count")].parse::<usize>().unwrap())
            .sum();
        assert_eq!(b, 3);
    }

    #[test]
    fn formats() {
        let r = report();
        assert_eq!(ReportDocument::from_json(&export(&r, Format::Json).unwrap()).unwrap(), r);
        assert!(matches!(export_named(&r, "xml"), Err(RunError::UnsupportedFormat(_))));
        let h = human(&r);
        assert!(h.contains("microcausality") && h.contains("✗"));
    }

    #[test]
    fn empty_report_has_a_header() {
        let r = ReportDocument {
            schema: crate::report::SCHEMA.into(),
            config: ExperimentConfig {
                systems: vec![SystemSpec::named("frozen")],
                experiments: vec![Experiment::Matrix],
                tolerances: Default::default(),
                output: Default::default(),
                seed: 0,
            },
            results: vec![],
            timings: None,
        };
        assert_eq!(to_csv(&r).unwrap().lines().count(), 1);
    }
}
