use thiserror::Error;

/// Errors raised by the rate-region library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("{name} argument {value} outside domain [{lo}, {hi}]")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("triple ({u1}, {u2}, {u}) is not in the feasible set P")]
    InvalidTriple { u1: f64, u2: f64, u: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("grid of {required} evaluations exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("rate region is unbounded")]
    Unbounded,
}

pub type Result<T> = std::result::Result<T, Error>;
