//! Solvers for the closest substring problem and its reoptimization under
//! sequence addition.
//!
//! Given `t` equal-length sequences and a length `l`, the goal is a pattern
//! `v` of length `l` minimizing `Σ_i min_y d(v, y)`, where `y` ranges over the
//! `l`-windows of sequence `i` and `d` is the Hamming distance.
//!
//! * [`model`]: strings, windows, consensus and the objective.
//! * [`exact`]: exhaustive oracles over occurrence tuples and over patterns.
//! * [`ptas`]: the r-sampling approximation scheme and its ratio.
//! * [`reopt`]: greedy extension of a known optimum and the sampling scheme
//!   restricted to samples touching the appended sequences.
//! * [`reduction`]: the t-partite minimum-weight clique construction.
//! * [`gen_io`]: generators and text formats.
//! * [`bench`] and [`verify`]: the harnesses behind the `csp` binary.
//!
//! Enumerations split their search space into fixed chunks and merge the
//! per-chunk minima in order, so results are identical for every worker
//! count. With the default `parallel` feature the chunks run on rayon.

pub mod bench;
pub mod cli;
pub mod error;
pub mod exact;
pub mod gen_io;
pub mod model;
mod options;
mod par;
pub mod ptas;
pub mod reduction;
pub mod reopt;
pub mod verify;

pub use error::{CspError, Result};
pub use options::{SampleMode, SolverOptions, BUDGET_ENV, DEFAULT_BUDGET};
pub use par::parallel_enabled;
