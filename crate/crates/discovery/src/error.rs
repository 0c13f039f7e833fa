use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error("cannot parse expression: {0}")]
    Parse(String),

    #[error("expression depth {depth} exceeds the limit of {max}")]
    TooDeep { depth: usize, max: usize },

    #[error("mutator failed: {0}")]
    Mutator(String),

    #[error("mutator reply contains no expression")]
    NoExpression,

    #[error("program database is empty")]
    EmptyDatabase,

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] smtt_core::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = DiscoveryError> = std::result::Result<T, E>;
