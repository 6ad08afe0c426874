use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("not a probability vector: {0}")]
    NotStochastic(String),

    #[error("axis error: {0}")]
    Axis(String),

    #[error("axis groups overlap")]
    OverlappingGroups,

    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("witness does not match channel: {0}")]
    WitnessMismatch(String),

    #[error("analytic form inapplicable: {0}")]
    AnalyticInapplicable(String),

    #[error("search configuration: {0}")]
    Config(String),

    #[error("channel is not degraded")]
    NotDegraded,

    #[error("simulation parameters: {0}")]
    SimParams(String),

    #[error("memory cap exceeded: {needed} symbols > {cap}")]
    MemoryCap { needed: u128, cap: u128 },

    #[error("grid of {count} points exceeds cap {cap}")]
    GridCap { count: u128, cap: u128 },
}
