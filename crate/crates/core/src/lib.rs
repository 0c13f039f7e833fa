//! Solver suite for the single-machine total tardiness problem `1 || sum T_j`.
//!
//! * [`problem`]: instances, schedules, tardiness and the sandbox evaluator.
//! * [`datagen`]: Seeded (RDD, TF) class instance generation and the instance file format.
//! * [`heuristics`]: constructive rules (EDD, SPT, MDD, EDDC, MDDC and the
//!   augmented variants) behind a name-keyed registry.
//! * [`exact`]: brute force and subset DP oracles, plus the positional
//!   assignment MIP and its LP export.
//! * [`bench`]: suite runner, gap tables and CSV output.

pub mod bench;
pub mod datagen;
pub mod error;
pub mod exact;
pub mod heuristics;
pub mod problem;

pub use error::{Error, Result};
pub use problem::{
    completion_times, evaluate_candidate, optimality_gap_percent, total_tardiness, EvalOutcome,
    Instance, Schedule,
};
