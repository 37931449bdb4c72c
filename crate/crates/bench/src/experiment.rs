//! Runs every (instance, strategy) pair of a config and collects the records.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{SystemTime, UNIX_EPOCH};

use qaoa_core::opt::Bounds;
use qaoa_core::symmetry::run_symmetry_suite;
use qaoa_core::{Classification, DepthRecord, MaxCutProblem, Strategy, StrategyConfig, SymmetryReport};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub id: String,
    pub n: usize,
    pub edges: usize,
    pub classification: Classification,
    pub c_max: u32,
    pub seed: Option<u64>,
    pub bounds: Bounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub config_hash: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceInfo>,
    /// Unix seconds.
    pub started_at: u64,
    pub finished_at: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance: String,
    pub record: DepthRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub meta: Meta,
    /// Sorted by (instance, strategy, depth).
    pub records: Vec<InstanceRecord>,
    pub symmetry_reports: Vec<SymmetryReport>,
}

impl ResultSet {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn records_for<'a>(
        &'a self,
        instance: &'a str,
        strategy: Strategy,
    ) -> impl Iterator<Item = &'a DepthRecord> + 'a {
        self.records
            .iter()
            .filter(move |r| r.instance == instance && r.record.strategy == strategy)
            .map(|r| &r.record)
    }
}

type RunKey = (String, Strategy);

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Runs the experiment. Relative edge-list paths resolve against `base`.
/// The output is independent of thread scheduling.
pub fn run_experiment(cfg: &ExperimentConfig, base: &Path) -> Result<ResultSet> {
    cfg.validate()?;
    let started_at = unix_now();

    let mut problems = Vec::with_capacity(cfg.instances.len());
    let mut instances = Vec::with_capacity(cfg.instances.len());
    for spec in &cfg.instances {
        let id = spec.id();
        let problem = MaxCutProblem::new(spec.build(base)?)
            .map_err(|e| BenchError::Config(format!("instance {id}: {e}")))?;
        if problem.c_max().get() == 0 {
            return Err(BenchError::Config(format!("instance {id} has no edges")));
        }
        let graph = problem.graph();
        let bounds = cfg.bounds.unwrap_or_else(|| Bounds::for_class(graph.classify()));
        instances.push(InstanceInfo {
            id,
            n: graph.num_vertices(),
            edges: graph.num_edges(),
            classification: graph.classify(),
            c_max: problem.c_max().get(),
            seed: spec.seed(),
            bounds,
        });
        problems.push(problem);
    }

    let jobs: Vec<(usize, Strategy)> = (0..problems.len())
        .flat_map(|i| cfg.strategies.iter().map(move |&s| (i, s)))
        .collect();
    let next = AtomicUsize::new(0);
    let done: Mutex<BTreeMap<RunKey, Result<Vec<DepthRecord>>>> = Mutex::new(BTreeMap::new());
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len());

    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| {
                while let Some(&(i, strategy)) = jobs.get(next.fetch_add(1, Ordering::Relaxed)) {
                    let scfg = StrategyConfig {
                        max_depth: cfg.max_depth,
                        trials: cfg.trials,
                        rng_seed: cfg.seed,
                        bounds: instances[i].bounds,
                        optimizer: cfg.optimizer,
                    };
                    let out = strategy.run(&problems[i], &scfg).map_err(BenchError::from);
                    done.lock()
                        .unwrap()
                        .insert((instances[i].id.clone(), strategy), out);
                }
            });
        }
    });

    let mut records = Vec::new();
    for ((instance, _), out) in done.into_inner().unwrap() {
        for record in out? {
            records.push(InstanceRecord {
                instance: instance.clone(),
                record,
            });
        }
    }

    let symmetry_reports = match cfg.symmetry {
        Some(s) if s.samples > 0 => run_symmetry_suite(cfg.seed, s.samples, s.max_n, s.max_depth)?,
        _ => Vec::new(),
    };

    Ok(ResultSet {
        meta: Meta {
            config_hash: cfg.hash(),
            seed: cfg.seed,
            config: cfg.clone(),
            instances,
            started_at,
            finished_at: unix_now(),
        },
        records,
        symmetry_reports,
    })
}
