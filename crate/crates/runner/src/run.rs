//! Executes a configuration.

use std::time::Instant;

use loclab_core::axioms::RegionCatalog;
use loclab_core::modelzoo::AnySystem;
use loclab_core::nogo;
use loclab_core::spacetime::{self, Region};

use crate::catalog;
use crate::config::{Experiment, ExperimentConfig, SystemSpec};
use crate::error::{Result, RunError};
use crate::report::{BuschSpectra, ExperimentResult, LeakageRun, ReportDocument, Timing, SCHEMA};

/// Runs every experiment in config order. All systems are constructed
/// before the first experiment, so construction errors leave no output.
pub fn run(config: &ExperimentConfig) -> Result<ReportDocument> {
    config.validate()?;
    let systems = config
        .systems
        .iter()
        .map(|s| catalog::build_system(s).map(|sys| (s, sys)))
        .collect::<Result<Vec<_>>>()?;
    let mut results = Vec::with_capacity(config.experiments.len());
    let mut timings = Vec::new();
    for (i, e) in config.experiments.iter().enumerate() {
        let start = Instant::now();
        let failed = |err: nogo::NogoError| RunError::Experiment {
            experiment: e.kind().to_string(),
            reason: err.to_string(),
        };
        let result = match e {
            Experiment::Matrix => {
                let mut matrices = Vec::with_capacity(systems.len());
                for (spec, sys) in &systems {
                    let mut m = nogo::condition_matrix(sys, &config.tolerances).map_err(failed)?;
                    m.system_label = spec.label().to_string();
                    matrices.push(m);
                }
                let conjecture = nogo::conjecture_probe(&matrices);
                ExperimentResult::Matrix { matrices, conjecture }
            }
            Experiment::Leakage {
                initial,
                gap,
                probe_width,
                times,
            } => {
                let mut runs = Vec::with_capacity(systems.len());
                for (spec, sys) in &systems {
                    let Some(sharp) = sys.as_sharp() else {
                        runs.push(LeakageRun {
                            system: spec.label().to_string(),
                            skipped: Some("no sharp localization".into()),
                            reports: Vec::new(),
                        });
                        continue;
                    };
                    let (d, probe) = leakage_regions(spec, sys, initial.as_ref(), *gap, *probe_width)?;
                    let reports = times
                        .iter()
                        .map(|&t| nogo::superluminal_leakage(sharp, &d, &probe, t))
                        .collect::<nogo::Result<Vec<_>>>();
                    let (reports, skipped) = match reports {
                        Ok(r) => (r, None),
                        Err(e @ nogo::NogoError::NotLocalizable(_)) => (Vec::new(), Some(e.to_string())),
                        Err(e) => return Err(failed(e)),
                    };
                    runs.push(LeakageRun {
                        system: spec.label().to_string(),
                        skipped,
                        reports,
                    });
                }
                ExperimentResult::Leakage { runs }
            }
            Experiment::Busch { regions } => {
                let mut spectra = Vec::with_capacity(systems.len());
                for (spec, sys) in &systems {
                    let n = sys.model().sites;
                    let regions = match regions {
                        Some(r) => {
                            for d in r {
                                check_proper(spec, d, n)?;
                            }
                            r.clone()
                        }
                        None => RegionCatalog::build(sys.core(), &config.tolerances.region_pairs).regions,
                    };
                    let reports = regions
                        .iter()
                        .map(|d| nogo::busch_spectrum(sys.core(), d))
                        .collect::<nogo::Result<Vec<_>>>()
                        .map_err(failed)?;
                    spectra.push(BuschSpectra {
                        system: spec.label().to_string(),
                        reports,
                    });
                }
                ExperimentResult::Busch { spectra }
            }
            Experiment::Hegerfeldt { instances } => ExperimentResult::Hegerfeldt {
                summary: nogo::hegerfeldt_batch(config.seed, *instances).map_err(failed)?,
            },
            Experiment::Borchers { instances } => ExperimentResult::Borchers {
                summary: nogo::borchers_batch(config.seed, *instances).map_err(failed)?,
            },
            Experiment::Lemmas => {
                let all: Vec<AnySystem> = systems.iter().map(|(_, s)| s.clone()).collect();
                ExperimentResult::Lemmas {
                    report: nogo::appendix_lemma_suite(&all, &config.tolerances, config.seed).map_err(failed)?,
                }
            }
        };
        results.push(result);
        timings.push(Timing {
            experiment: i,
            kind: e.kind().to_string(),
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(ReportDocument {
        schema: SCHEMA.to_string(),
        config: config.clone(),
        results,
        timings: config.output.timings.then_some(timings),
    })
}

fn check_proper(spec: &SystemSpec, d: &Region, n: usize) -> Result<()> {
    if d.is_empty() || d.len() >= n || d.sites().iter().any(|&x| x >= n) {
        return Err(RunError::InvalidRegion {
            system: spec.name.clone(),
            reason: format!("{:?} must be a nonempty proper subset of 0..{n}", d.sites()),
        });
    }
    Ok(())
}

/// Initial arc and a probe arc starting exactly `gap` past its last site.
fn leakage_regions(
    spec: &SystemSpec,
    sys: &AnySystem,
    initial: Option<&Region>,
    gap: f64,
    probe_width: Option<usize>,
) -> Result<(Region, Region)> {
    let m = sys.model();
    let n = m.sites;
    let invalid = |reason: String| RunError::InvalidRegion {
        system: spec.name.clone(),
        reason,
    };
    let d = match initial {
        Some(d) => {
            check_proper(spec, d, n)?;
            d.clone()
        }
        None => Region::interval(n / 4, (n / 16).max(1), n),
    };
    let (start, len) = d
        .as_arc(n)
        .ok_or_else(|| invalid(format!("initial region {:?} is not an arc", d.sites())))?;
    let steps = gap / m.spacing;
    if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
        return Err(invalid(format!("gap {gap} is not a multiple of the spacing {}", m.spacing)));
    }
    let width = probe_width.unwrap_or((n / 16).max(1));
    let probe = Region::interval((start + len - 1 + steps.round() as usize) % n, width, n);
    let actual = spacetime::region_distance(m, &d, &probe);
    if !d.is_disjoint(&probe) || (actual - gap).abs() > 1e-9 * gap {
        return Err(invalid(format!(
            "no probe of width {width} fits at distance {gap} on {n} sites (got {actual})"
        )));
    }
    Ok((d, probe))
}
