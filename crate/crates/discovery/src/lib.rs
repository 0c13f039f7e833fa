//! Search for dispatching rules for single-machine total tardiness.
//!
//! Candidate rules are [`PriorityExpr`] trees. The [`Sandbox`] scores them on
//! a fixed training set, an [`IslandDatabase`] keeps the population, and a
//! [`Mutator`] proposes new rules from prompts built out of sampled programs.

pub mod config;
pub mod database;
pub mod dispatch;
pub mod engine;
pub mod error;
pub mod expr;
pub mod mutator;
pub mod prompt;
pub mod sandbox;

pub use config::{DiscoveryConfig, ResetPolicy};
pub use database::{IslandDatabase, ResetEvent};
pub use dispatch::{dispatch, Dispatcher, GreedyDispatcher};
pub use engine::{run_discovery, run_with_sandbox, write_log, DiscoveryOutcome, LogRow, ResetRecord};
pub use error::{DiscoveryError, Result};
pub use expr::{extract_expression, Features, PriorityExpr, Terminal};
pub use mutator::{HttpConfig, HttpMutator, Mutator, MutatorKind, StubMutator};
pub use sandbox::{score_program, Sandbox, SandboxReport, ScoredProgram, TrainingSpec};
