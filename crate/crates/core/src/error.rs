use thiserror::Error;

/// Errors raised anywhere along the encoding and decoding chain.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of bounds: {0}")]
    BoundsViolation(String),

    #[error("code rate too high: K' = {k_prime} is not below N = {n}")]
    RateTooHigh { k_prime: usize, n: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("mother code length {0} not supported (must be a power of two in 32..=1024)")]
    BadN(usize),

    #[error("requested size {0} exceeds the supported maximum")]
    TooLarge(usize),

    #[error("input interleaver supports K <= 164, got {0}")]
    KTooLarge(usize),

    #[error("invalid sub-block pattern: {0}")]
    PatternInvalid(String),

    #[error("sequence is not a permutation: {0}")]
    NotAPermutation(String),

    #[error("wrong sequence length: expected {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },

    #[error("frozen set infeasible: {pre_frozen} pre-frozen indices exceed N - K' = {budget}")]
    Infeasible { pre_frozen: usize, budget: usize },

    #[error("incomplete allocation: {0}")]
    AllocationIncomplete(String),

    #[error("rate-matching mode {mode} inconsistent with E = {e}, N = {n}")]
    ModeMismatch { mode: String, e: usize, n: usize },

    #[error("repeated observations of position {0} disagree")]
    ConflictingRepeats(usize),

    #[error("invalid decoder policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("data file error: {0}")]
    Data(String),
}

impl Error {
    /// Stable machine-readable identifier for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BoundsViolation(_) => "bounds_violation",
            Error::RateTooHigh { .. } => "rate_too_high",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::NotPowerOfTwo(_) => "not_power_of_two",
            Error::BadN(_) => "bad_n",
            Error::TooLarge(_) => "too_large",
            Error::KTooLarge(_) => "k_too_large",
            Error::PatternInvalid(_) => "pattern_invalid",
            Error::NotAPermutation(_) => "not_a_permutation",
            Error::WrongLength { .. } => "wrong_length",
            Error::Infeasible { .. } => "infeasible",
            Error::AllocationIncomplete(_) => "allocation_incomplete",
            Error::ModeMismatch { .. } => "mode_mismatch",
            Error::ConflictingRepeats(_) => "conflicting_repeats",
            Error::InvalidPolicy(_) => "invalid_policy",
            Error::InvalidInput(_) => "invalid_input",
            Error::Data(_) => "data",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
