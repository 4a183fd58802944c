//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dbi_core::costs::{CostFunction, CostKind};
use dbi_core::dbr::{GeneratorPolicy, DEFAULT_MIN_RELATIVE_GAIN};
use dbi_core::generators::{gd_template, preset_seeded, GdConfig, GeneratorSpec, PRESET_NAMES};
use dbi_core::hamiltonians::{tfim, xxz, MAX_QUBITS};
use dbi_core::linalg::{Operator, StateVector};
use dbi_core::scheduling::ScheduleConfig;

use crate::ConfigError;

/// Largest chain accepted without `allow_large`.
pub const DEFAULT_QUBIT_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Tfim {
        #[serde(rename = "L")]
        qubits: usize,
        h: f64,
    },
    Xxz {
        #[serde(rename = "L")]
        qubits: usize,
        delta: f64,
    },
    /// An already diagonal Hamiltonian with the given entries; mostly for
    /// checking fixed points.
    Diagonal { entries: Vec<f64> },
}

impl ModelConfig {
    pub fn qubits(&self) -> usize {
        match self {
            ModelConfig::Tfim { qubits, .. } | ModelConfig::Xxz { qubits, .. } => *qubits,
            ModelConfig::Diagonal { entries } => entries.len().max(1).ilog2() as usize,
        }
    }

    /// Parameter checks that do not build the operator.
    pub fn check(&self) -> Result<(), ConfigError> {
        let (l, coupling) = match self {
            ModelConfig::Tfim { qubits, h } => (*qubits, *h),
            ModelConfig::Xxz { qubits, delta } => (*qubits, *delta),
            ModelConfig::Diagonal { entries } => {
                let n = entries.len();
                if n < 2 || !n.is_power_of_two() || n > 1 << MAX_QUBITS {
                    return Err(ConfigError::Invalid(format!(
                        "diagonal model needs 2^L entries with 1 <= L <= {MAX_QUBITS}, got {n}"
                    )));
                }
                if entries.iter().any(|x| !x.is_finite()) {
                    return Err(ConfigError::Invalid("diagonal entries must be finite".into()));
                }
                return Ok(());
            }
        };
        if !(2..=MAX_QUBITS).contains(&l) {
            return Err(ConfigError::Invalid(format!("L must lie in 2..={MAX_QUBITS}, got {l}")));
        }
        if !coupling.is_finite() {
            return Err(ConfigError::Invalid("model coupling must be finite".into()));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> dbi_core::Result<Operator<f64>> {
        match self {
            ModelConfig::Tfim { qubits, h } => tfim(*qubits, *h),
            ModelConfig::Xxz { qubits, delta } => xxz(*qubits, *delta),
            ModelConfig::Diagonal { entries } => Operator::from_diagonal(entries),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ScheduleScan,
    TaylorValidity,
    BhmmCompare,
    AdaptiveCompare,
    GcCompare,
    DbiRun,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::ScheduleScan => "schedule-scan",
            Experiment::TaylorValidity => "taylor-validity",
            Experiment::BhmmCompare => "bhmm-compare",
            Experiment::AdaptiveCompare => "adaptive-compare",
            Experiment::GcCompare => "gc-compare",
            Experiment::DbiRun => "dbi-run",
        }
    }
}

/// A preset name or an explicit generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorEntry {
    Preset(String),
    Spec(GeneratorSpec<f64>),
}

impl GeneratorEntry {
    pub fn label(&self) -> String {
        match self {
            GeneratorEntry::Preset(name) => name.clone(),
            GeneratorEntry::Spec(spec) => spec.tag(),
        }
    }
}

/// Basis-state index or a seeded random state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateConfig {
    Basis(usize),
    Random { seed: u64 },
}

impl Default for StateConfig {
    fn default() -> Self {
        StateConfig::Basis(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub experiment: Experiment,
    /// BHMM generators, or the fixed generator of scans.
    #[serde(default)]
    pub generators: Vec<GeneratorEntry>,
    /// Generator policy of `dbi-run`: `gww`, `bhmm:<preset>`,
    /// `gd:<family>` or `hamming`.
    #[serde(default = "default_policy")]
    pub policy: String,
    /// Adaptive policies of `adaptive-compare`.
    #[serde(default)]
    pub policies: Vec<String>,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default = "default_cost")]
    pub cost: String,
    #[serde(default)]
    pub reference_state: StateConfig,
    #[serde(default = "default_steps")]
    pub n_steps: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default)]
    pub allow_large: bool,
    #[serde(default)]
    pub gd: GdConfig,
    #[serde(default = "default_gain")]
    pub min_relative_gain: f64,
    #[serde(default = "default_orders")]
    pub taylor_orders: Vec<usize>,
}

fn default_policy() -> String {
    "gww".into()
}

fn default_cost() -> String {
    "f1".into()
}

fn default_steps() -> usize {
    10
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_gain() -> f64 {
    DEFAULT_MIN_RELATIVE_GAIN
}

fn default_orders() -> Vec<usize> {
    vec![2, 3, 5, 8]
}

/// BHMM generators compared when a config lists none.
pub const DEFAULT_BHMM: [&str; 10] =
    ["dephasing", "minmax", "maxmin", "shuffled", "sampled", "eigen", "b-constant", "b-linear", "b-quadratic", "nn-ising"];

/// Adaptive policies compared when a config lists none.
pub const DEFAULT_ADAPTIVE: [&str; 4] = ["gww", "gd:magnetic", "gd:nn-ising", "hamming"];

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let l = self.model.qubits();
        if l > DEFAULT_QUBIT_LIMIT && !self.allow_large {
            return Err(ConfigError::Invalid(format!(
                "L = {l} exceeds {DEFAULT_QUBIT_LIMIT}; set allow_large to run it anyway"
            )));
        }
        self.model.check()?;
        self.schedule.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.gd.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.cost_function()?;
        for g in &self.generators {
            self.generator_spec(g)?;
        }
        match self.experiment {
            Experiment::DbiRun => {
                self.parse_policy(&self.policy)?;
            }
            Experiment::AdaptiveCompare => {
                for p in self.adaptive_policies() {
                    self.parse_policy(&p)?;
                }
            }
            Experiment::TaylorValidity => {
                if self.taylor_orders.is_empty() || self.taylor_orders.iter().any(|&n| n < 2) {
                    return Err(ConfigError::Invalid("taylor_orders must be nonempty and at least 2".into()));
                }
            }
            _ => {}
        }
        if !(self.min_relative_gain >= 0.0) {
            return Err(ConfigError::Invalid("min_relative_gain must be nonnegative".into()));
        }
        Ok(())
    }

    /// Schedule with the config-wide seed filled in.
    pub fn schedule(&self) -> ScheduleConfig {
        let mut s = self.schedule.clone();
        s.rng_seed = s.rng_seed.or(Some(self.rng_seed));
        s
    }

    pub fn reference_state(&self) -> Result<StateVector<f64>, ConfigError> {
        let dim = 1usize << self.model.qubits();
        let state = match self.reference_state {
            StateConfig::Basis(i) => StateVector::basis(dim, i),
            StateConfig::Random { seed } => StateVector::random(dim, seed),
        };
        state.map_err(|e| ConfigError::Invalid(format!("reference_state: {e}")))
    }

    pub fn cost_function(&self) -> Result<CostFunction<f64>, ConfigError> {
        let kind: CostKind = self.cost.parse().map_err(|e: dbi_core::DbiError| ConfigError::Invalid(e.to_string()))?;
        let state = match kind {
            CostKind::Energy | CostKind::EnergyFluctuation => Some(self.reference_state()?),
            _ => None,
        };
        CostFunction::new(kind, None, state).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn generator_spec(&self, entry: &GeneratorEntry) -> Result<GeneratorSpec<f64>, ConfigError> {
        let spec = match entry {
            GeneratorEntry::Preset(name) => preset_seeded(name, self.model.qubits(), self.rng_seed).map_err(|_| {
                ConfigError::Invalid(format!("unknown preset {name:?}; known presets: {}", PRESET_NAMES.join(", ")))
            })?,
            GeneratorEntry::Spec(spec) => spec.clone(),
        };
        if let Some(l) = spec.qubits() {
            if l != self.model.qubits() {
                return Err(ConfigError::Invalid(format!(
                    "generator {} is sized for {l} qubits, model has {}",
                    spec.tag(),
                    self.model.qubits()
                )));
            }
        }
        Ok(spec)
    }

    /// Generators of the config, or `defaults` when none are listed.
    pub fn generator_entries(&self, defaults: &[&str]) -> Vec<GeneratorEntry> {
        if self.generators.is_empty() {
            defaults.iter().map(|s| GeneratorEntry::Preset(s.to_string())).collect()
        } else {
            self.generators.clone()
        }
    }

    pub fn adaptive_policies(&self) -> Vec<String> {
        if self.policies.is_empty() {
            DEFAULT_ADAPTIVE.iter().map(|s| s.to_string()).collect()
        } else {
            self.policies.clone()
        }
    }

    pub fn parse_policy(&self, text: &str) -> Result<GeneratorPolicy<f64>, ConfigError> {
        let l = self.model.qubits();
        let invalid = |msg: String| ConfigError::Invalid(msg);
        if text == "gww" {
            return Ok(GeneratorPolicy::Canonical);
        }
        if text == "hamming" {
            return Ok(GeneratorPolicy::PauliZSearch);
        }
        if let Some(name) = text.strip_prefix("bhmm:") {
            return Ok(GeneratorPolicy::Fixed(self.generator_spec(&GeneratorEntry::Preset(name.to_string()))?));
        }
        if let Some(family) = text.strip_prefix("gd:") {
            let template = gd_template(family, l).map_err(|e| invalid(e.to_string()))?;
            return Ok(GeneratorPolicy::GradientDescent { template, gd: self.gd.clone() });
        }
        Err(invalid(format!("unknown policy {text:?}; expected gww, hamming, bhmm:<preset> or gd:<family>")))
    }
}
