use thiserror::Error;

/// Errors produced by code construction, simulation, and reporting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parity-check matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("check {check} has no incident bits")]
    EmptyCheck { check: usize },

    #[error("bit {bit} is not incident to any check")]
    UncoveredBit { bit: usize },

    #[error("bit {bit} appears more than once in check {check}")]
    DuplicateIncidence { check: usize, bit: usize },

    #[error("{what} index {got} is out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("value {value} at position {pos} is not a bit; expected 0 or 1")]
    InvalidBit { pos: usize, value: u8 },

    #[error("length mismatch for {what}: expected {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("n*col_weight = {n}*{col_weight} is not divisible by row_weight = {row_weight}")]
    WeightDivisibility {
        n: usize,
        col_weight: usize,
        row_weight: usize,
    },

    #[error("col_weight must be at least 2, got {0}")]
    ColWeightTooSmall(usize),

    #[error("random construction still had duplicate incidences after {0} repair passes")]
    RetryBudgetExhausted(usize),

    #[error("parity-check matrix has full column rank; the code carries no message bits")]
    ZeroRate,

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must not be negative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },

    #[error("alist parse error: {0}")]
    AlistParse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("fixed iteration count {fixed_l} is below the calibrated l_star = {l_star}")]
    FixedBelowLStar { fixed_l: usize, l_star: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
