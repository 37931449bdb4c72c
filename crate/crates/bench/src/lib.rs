//! Experiment harness around `qaoa-core`: instance files, TOML experiment
//! configs, JSON result sets and CSV plot data.

pub mod config;
pub mod edgelist;
pub mod emit;
pub mod error;
pub mod experiment;

pub use config::{ExperimentConfig, InstanceSpec, SymmetrySettings};
pub use edgelist::{parse_edge_list, read_edge_list, to_edge_list, write_edge_list};
pub use emit::{emit_alpha_table, emit_landscape, emit_params_trace};
pub use error::{BenchError, Result};
pub use experiment::{run_experiment, InstanceInfo, InstanceRecord, Meta, ResultSet};
