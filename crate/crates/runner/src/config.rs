//! Experiment configuration files.

use std::path::PathBuf;

use loclab_core::axioms::TolerancePolicy;
use loclab_core::spacetime::Region;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Result, RunError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub name: String,
    /// Report label; defaults to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopping: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d0: Option<Region>,
}

impl SystemSpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            label: None,
            size: None,
            spacing: None,
            mass: None,
            hopping: None,
            d0: None,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    /// Every condition checker plus the theorem conclusion, per system.
    Matrix,
    /// Strictly localized state spreading into a separated probe region.
    /// Runs on sharp systems only.
    Leakage {
        /// Initial region; defaults to `N/16` sites starting at `N/4`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Region>,
        /// Distance to the probe in length units; must be a whole number
        /// of lattice spacings.
        gap: f64,
        /// Probe width in sites; defaults to `N/16`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_width: Option<usize>,
        times: Vec<f64>,
    },
    /// Extremal eigenvalues of the localizing operators.
    Busch {
        /// Defaults to the checker's region catalog.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        regions: Option<Vec<Region>>,
    },
    /// Zero-set dichotomy on random finite instances.
    Hegerfeldt {
        #[serde(default = "default_hegerfeldt")]
        instances: usize,
    },
    /// Borchers-lemma probes on random orthogonal projection pairs.
    Borchers {
        #[serde(default = "default_borchers")]
        instances: usize,
    },
    /// Lemma property suites over all configured systems.
    Lemmas,
}

fn default_hegerfeldt() -> usize {
    100
}

fn default_borchers() -> usize {
    20
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Matrix => "matrix",
            Experiment::Leakage { .. } => "leakage",
            Experiment::Busch { .. } => "busch",
            Experiment::Hegerfeldt { .. } => "hegerfeldt",
            Experiment::Borchers { .. } => "borchers",
            Experiment::Lemmas => "lemmas",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(RunError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Record wall-clock timings. Off by default so that reports are
    /// byte-identical across runs.
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub systems: Vec<SystemSpec>,
    pub experiments: Vec<Experiment>,
    #[serde(default)]
    pub tolerances: TolerancePolicy,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub seed: u64,
}

/// Command-line overrides of individual config fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub system: Option<String>,
    pub size: Option<usize>,
    pub mass: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| RunError::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// `--system` replaces the system list; `--size` and `--mass` apply to
    /// every system.
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(name) = &o.system {
            self.systems = vec![SystemSpec::named(name)];
        }
        for s in &mut self.systems {
            if o.size.is_some() {
                s.size = o.size;
            }
            if o.mass.is_some() {
                s.mass = o.mass;
            }
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if o.out.is_some() {
            self.output.path = o.out.clone();
        }
        if let Some(f) = o.format {
            self.output.format = f;
        }
    }

    /// Checks everything that can be checked without running an experiment.
    pub fn validate(&self) -> Result<()> {
        self.tolerances
            .validate()
            .map_err(|e| RunError::InvalidConfig(e.to_string()))?;
        if self.experiments.is_empty() {
            return Err(RunError::InvalidConfig("no experiments listed".into()));
        }
        let needs_systems = self
            .experiments
            .iter()
            .any(|e| !matches!(e, Experiment::Hegerfeldt { .. } | Experiment::Borchers { .. }));
        if needs_systems && self.systems.is_empty() {
            return Err(RunError::InvalidConfig("no systems listed".into()));
        }
        let mut labels: Vec<&str> = Vec::new();
        for s in &self.systems {
            catalog::resolve(s)?;
            if labels.contains(&s.label()) {
                return Err(RunError::InvalidConfig(format!("duplicate system label \"{}\"", s.label())));
            }
            labels.push(s.label());
        }
        for e in &self.experiments {
            match e {
                Experiment::Leakage { gap, times, .. } => {
                    if !(*gap > 0.0 && gap.is_finite()) {
                        return Err(RunError::InvalidConfig("leakage gap must be positive".into()));
                    }
                    if times.is_empty() {
                        return Err(RunError::InvalidConfig("leakage needs at least one time".into()));
                    }
                    if let Some(t) = times.iter().find(|&&t| !(t >= 0.0 && t < *gap)) {
                        return Err(RunError::InvalidConfig(format!(
                            "leakage time {t} is not spacelike-clear of gap {gap} (needs 0 <= t < gap / c)"
                        )));
                    }
                }
                Experiment::Hegerfeldt { instances } | Experiment::Borchers { instances } if *instances == 0 => {
                    return Err(RunError::InvalidConfig(format!("{} needs at least one instance", e.kind())));
                }
                _ => {}
            }
        }
        Ok(())
    }
}
