use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("prime bound must be at least 2, got {0}")]
    InvalidBound(u64),

    #[error("valuation of zero is undefined")]
    UndefinedValuation,

    #[error("invalid modulus {0}: must be a non-square integer >= 2")]
    InvalidModulus(BigInt),

    #[error(
        "exact power too large: about {estimated_digits} decimal digits exceeds limit {limit}"
    )]
    TooLarge { estimated_digits: f64, limit: u64 },

    #[error("regulator for d={d} exceeded the budget of {budget} form operations")]
    RegulatorTooLarge { d: BigInt, budget: u64 },

    #[error("compact representation construction failed for d={d}: {reason}")]
    Construction { d: BigInt, reason: String },

    #[error("corrupt compact representation: {0}")]
    CorruptRepresentation(String),

    #[error("internal limit reached: {0}")]
    InternalLimit(String),

    #[error(
        "log test for d={d}, n={n} gave {value:.6}, inside the forbidden band ({lo:.3}, {hi:.3})"
    )]
    ForbiddenBand {
        d: BigInt,
        n: u32,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("convergent check found a Pell solution below the smooth part for d={d}")]
    Inconsistent { d: BigInt },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("checkpoint is corrupt: {0} (restart explicitly to discard it)")]
    CheckpointCorrupt(String),

    #[error("checkpoint does not match this search: {0}")]
    CheckpointMismatch(String),

    #[error("solution set is incomplete: {0}")]
    Incomplete(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
