use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use qaoa_bench::{
    emit_alpha_table, emit_landscape, emit_params_trace, read_edge_list, run_experiment, write_edge_list,
    ExperimentConfig, ResultSet,
};
use qaoa_core::symmetry::run_symmetry_suite;
use qaoa_core::Strategy;

const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "qaoa-bench",
    version,
    about = "QAOA Max-Cut initialization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the config's instances as edge-list files.
    Gen {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment and write results.json and alpha.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximation-ratio table from a results file.
    Table {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal-angle trace for one instance and strategy.
    Trace {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        instance: String,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Depth-one landscape of an edge-list instance.
    Landscape {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the landscape symmetry identities on random graphs and angles.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_results(path: &Path) -> anyhow::Result<ResultSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ResultSet::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn config_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            cfg.validate()?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for spec in &cfg.instances {
                let path = dir.join(format!("{}.edges", spec.id()));
                write_edge_list(&path, &spec.build(config_dir(&config))?)?;
                println!("{}", path.display());
            }
        }
        Command::Run {
            config,
            seed,
            max_depth,
            trials,
            out,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(q) = max_depth {
                cfg.max_depth = q;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            let rs = run_experiment(&cfg, config_dir(&config))?;
            let dir = &cfg.output_dir;
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            emit(Some(&dir.join("results.json")), &rs.to_json()?)?;
            emit(Some(&dir.join("alpha.csv")), &emit_alpha_table(&rs)?)?;
            println!(
                "{} records, config {} -> {}",
                rs.records.len(),
                &rs.meta.config_hash[..12],
                dir.display()
            );
        }
        Command::Table { input, out } => {
            emit(out.as_deref(), &emit_alpha_table(&load_results(&input)?)?)?;
        }
        Command::Trace {
            input,
            instance,
            strategy,
            out,
        } => {
            let Some(strategy) = Strategy::from_name(&strategy) else {
                bail!(
                    "unknown strategy {strategy:?}; expected one of bilinear, parameters_fixing, layerwise"
                );
            };
            emit(
                out.as_deref(),
                &emit_params_trace(&load_results(&input)?, &instance, strategy)?,
            )?;
        }
        Command::Landscape {
            graph,
            resolution,
            out,
        } => {
            emit(
                out.as_deref(),
                &emit_landscape(&read_edge_list(&graph)?, resolution)?,
            )?;
        }
        Command::Verify {
            seed,
            samples,
            max_n,
            max_depth,
            out,
        } => {
            let reports = run_symmetry_suite(seed, samples, max_n, max_depth)?;
            if let Some(path) = out {
                emit(Some(&path), &serde_json::to_string_pretty(&reports)?)?;
            }
            let mut failed = Vec::new();
            for r in &reports {
                let ok = r.max_abs_deviation <= SYMMETRY_TOLERANCE;
                println!(
                    "{:<24} {:>5} samples  max deviation {:.2e}  {}",
                    r.transform,
                    r.samples,
                    r.max_abs_deviation,
                    if ok { "ok" } else { "FAIL" }
                );
                if !ok {
                    failed.push(r.transform.as_str());
                }
            }
            if !failed.is_empty() {
                bail!(
                    "symmetry checks above {SYMMETRY_TOLERANCE:e}: {}",
                    failed.join(", ")
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
