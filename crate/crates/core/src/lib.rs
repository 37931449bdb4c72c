//! Depth-progressive parameter initialization for QAOA on unweighted Max-Cut.
//!
//! The crate is `no_std` (it needs `alloc`) and covers the pure algorithmic
//! side of the workflow:
//!
//! * [`graph`]: problem instances, seeded generators and the exact Max-Cut oracle.
//! * [`sim`]: exact statevector simulation of the alternating ansatz.
//! * [`opt`]: box-constrained quasi-Newton maximization with evaluation accounting.
//! * [`strategy`]: the bilinear strategy and the parameters-fixing, layerwise and
//!   linear-ramp baselines.
//! * [`symmetry`]: numerical checks of the periodicity and symmetry identities of
//!   the Max-Cut expectation landscape.
//!
//! File formats, experiment orchestration and the command line live in the
//! companion `qaoa-bench` crate.

#![no_std]
// `!(a < b)` is how NaN gets rejected alongside out-of-order values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod graph;
pub mod opt;
pub mod sim;
pub mod strategy;
pub mod symmetry;

pub use error::{Error, Result};
pub use graph::{Classification, CutValue, Graph, GraphKind};
pub use opt::{Bounds, OptResult, OptimizerConfig};
pub use sim::{MaxCutProblem, ParameterVector, StateVector};
pub use strategy::{DepthRecord, Strategy, StrategyConfig};
pub use symmetry::SymmetryReport;
