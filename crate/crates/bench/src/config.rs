//! Experiment configuration, read from TOML.
//!
//! ```toml
//! strategies = ["bilinear", "parameters_fixing", "layerwise"]
//! max_depth = 10
//! trials = 20
//! seed = 0
//! output_dir = "results"
//!
//! [[instances]]
//! class = "regular"
//! n = 10
//! degree = 3
//! seed = 1
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use qaoa_core::opt::{Bounds, OptimizerConfig};
use qaoa_core::{Graph, Strategy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::edgelist::read_edge_list;
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    Regular { n: usize, degree: usize, seed: u64 },
    ErdosRenyi { n: usize, prob: f64, seed: u64 },
    Complete { n: usize },
    EdgeList { path: PathBuf },
}

impl InstanceSpec {
    /// Stable identifier used as the record key.
    pub fn id(&self) -> String {
        match self {
            InstanceSpec::Regular { n, degree, seed } => format!("reg{degree}-n{n}-s{seed}"),
            InstanceSpec::ErdosRenyi { n, prob, seed } => format!("er{prob}-n{n}-s{seed}"),
            InstanceSpec::Complete { n } => format!("k{n}"),
            InstanceSpec::EdgeList { path } => {
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
                format!("file-{}", stem.unwrap_or_default())
            }
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            InstanceSpec::Regular { seed, .. } | InstanceSpec::ErdosRenyi { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// Builds the graph. Relative edge-list paths resolve against `base`.
    pub fn build(&self, base: &Path) -> Result<Graph> {
        let built = match self {
            InstanceSpec::Regular { n, degree, seed } => Graph::random_regular(*n, *degree, *seed),
            InstanceSpec::ErdosRenyi { n, prob, seed } => Graph::erdos_renyi(*n, *prob, *seed),
            InstanceSpec::Complete { n } => Graph::complete(*n),
            InstanceSpec::EdgeList { path } => return read_edge_list(&base.join(path)),
        };
        built.map_err(|e| BenchError::Config(format!("instance {}: {e}", self.id())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySettings {
    pub samples: usize,
    #[serde(default = "default_symmetry_n")]
    pub max_n: usize,
    #[serde(default = "default_symmetry_depth")]
    pub max_depth: usize,
}

fn default_symmetry_n() -> usize {
    10
}

fn default_symmetry_depth() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instances: Vec<InstanceSpec>,
    pub strategies: Vec<Strategy>,
    #[serde(default = "default_depth")]
    pub max_depth: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Seeds the multistart draws of every run.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    /// Replaces the per-class bounds for every instance when set.
    #[serde(default)]
    pub bounds: Option<Bounds>,
    #[serde(default)]
    pub symmetry: Option<SymmetrySettings>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

fn default_depth() -> usize {
    10
}

fn default_trials() -> usize {
    20
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Checks everything that can be checked without generating graphs.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.instances.is_empty() {
            return fail("at least one instance is required".into());
        }
        if self.strategies.is_empty() {
            return fail("at least one strategy is required".into());
        }
        if self.max_depth == 0 {
            return fail("max_depth must be at least 1".into());
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        self.optimizer
            .validate()
            .map_err(|e| BenchError::Config(e.to_string()))?;
        if let Some(b) = self.bounds {
            Bounds::new(b.gamma_min, b.gamma_max, b.beta_min, b.beta_max)
                .map_err(|e| BenchError::Config(format!("bounds: {e}")))?;
        }
        let mut seen = BTreeSet::new();
        for spec in &self.instances {
            if !seen.insert(spec.id()) {
                return fail(format!("duplicate instance {}", spec.id()));
            }
        }
        let mut strategies = BTreeSet::new();
        for s in &self.strategies {
            if !strategies.insert(*s) {
                return fail(format!("strategy {s} listed twice"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding, as lowercase hex.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&canonical)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
