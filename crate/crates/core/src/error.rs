use thiserror::Error;

/// Errors produced by construction, analysis, and synthesis operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("k must be in 2..={max}, got {k}")]
    InvalidK { k: u32, max: u32 },

    #[error("value {value} is outside E_{k}")]
    ValueOutOfRange { value: u32, k: u8 },

    #[error("table has {got} entries, expected k^n = {want}")]
    TableLength { got: usize, want: u64 },

    #[error("{k}^{n} exceeds the table storage cap {cap}")]
    TableTooLarge { k: u8, n: u32, cap: u64 },

    #[error(
        "size guard exceeded: {points} points over limit {limit} (raise the limit to override)"
    )]
    SizeGuard { points: u64, limit: u64 },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("circuit has no omega gate")]
    NoOmegaGate,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
