use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An index, flip length or rank outside its admissible interval.
    #[error("{what} {value} out of range {min}..={max}")]
    Range { what: &'static str, value: u64, min: u64, max: u64 },

    /// The listing size k^n * n! does not fit in 64 bits, or n or k is zero.
    #[error("unsupported size n={n}, k={k}: k^n * n! must be between 1 and 2^64 - 1")]
    Capacity { n: usize, k: u64 },

    /// An operation would need more entries than the configured budget.
    #[error("{what} needs {required} entries, budget is {budget}")]
    Budget { what: &'static str, required: u64, budget: u64 },

    #[error("malformed token `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid coloured permutation: {0}")]
    Invalid(String),

    #[error("flip sequence generator already terminated")]
    Terminated,
}
