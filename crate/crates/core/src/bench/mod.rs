//! Batch evaluation: run heuristics and an exact oracle over a dataset,
//! aggregate optimality gaps per instance class, and write CSV.

mod oracle;
mod runner;
mod table;

pub use oracle::{load_provided_optima, BruteForceOracle, DpOracle, Oracle, OracleKind, ProvidedOptima};
pub use runner::{read_records_csv, emit_records_csv, run_suite, RunRecord};
pub use table::{aggregate, emit_csv, format_table_csv, GapCell, GapRow, GapTable};
