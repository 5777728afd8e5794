//! Pareto frontiers for constrained multi-objective minimization problems by
//! cuckoo optimization with data-envelopment-analysis (CCR) efficiency as the
//! fitness of each habitat.
//!
//! - [`lp`]: dense two-phase simplex plus a vertex-enumeration oracle.
//! - [`dea`]: CCR efficiency of objective vectors.
//! - [`coa`]: the cuckoo optimization loop.
//! - [`problem`]: problem definitions and the built-in test problems.
//! - [`pareto`]: dominance filtering, reference fronts and quality metrics.
//! - [`cli`]: experiment configuration, CSV/SVG export and the runner behind
//!   the `coadea` binary.

pub mod cli;
pub mod coa;
pub mod dea;
pub mod lp;
pub mod pareto;
pub mod problem;

pub use coa::{run, CoaConfig, CoaError, RunResult};
pub use problem::{builtin, ProblemSpec};
