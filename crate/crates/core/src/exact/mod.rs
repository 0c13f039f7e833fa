//! Exact methods: permutation brute force, the subset dynamic program, and
//! the positional-assignment MIP with its LP-format export.

mod brute;
mod dp;
mod lp;
mod mip;

pub use brute::{brute_force_optimal, BRUTE_FORCE_MAX_JOBS};
pub use dp::{dp_optimal, dp_table_bytes, DpSolver, DpTable, DEFAULT_DP_CAP};
pub use lp::export_lp;
pub use mip::{build_mip, pi_coefficient, Constraint, MipModel, MipSolution, Sense, Var};
