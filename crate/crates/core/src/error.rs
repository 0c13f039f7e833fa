use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("optimal value is zero; zero-optimal instances must be filtered before computing gaps")]
    ZeroOptimal,

    #[error("malformed instance file {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error("unknown heuristic `{0}`")]
    UnknownHeuristic(String),

    #[error("unknown oracle `{0}`")]
    UnknownOracle(String),

    #[error("brute force is limited to {max} jobs, instance has {n}")]
    BruteForceTooLarge { n: usize, max: usize },

    #[error(
        "dynamic program capped at {cap} jobs, instance has {n} \
         (would need about {bytes} bytes for the value table)"
    )]
    DpTooLarge { n: usize, cap: usize, bytes: u128 },

    #[error("invalid index: {0}")]
    Index(String),

    #[error("invalid class parameters: {0}")]
    InvalidClass(String),

    #[error("no optimum provided for instance `{0}`")]
    MissingOptimum(String),

    #[error("optima file: {0}")]
    Optima(String),

    #[error("oracle error on `{instance}`: {method} reached {objective}, below the reported optimum {optimal}")]
    NegativeGap {
        instance: String,
        method: String,
        objective: u64,
        optimal: u64,
    },

    #[error("no records to aggregate")]
    EmptyRecords,

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
