use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid magnetic quantum number 2m={twice_m} for spin 2j={twice_j}")]
    InvalidMagnetic { twice_j: u32, twice_m: i32 },
    #[error(
        "total spin 2J={twice_total} outside the coupling range of 2j1={twice_j1}, 2j2={twice_j2}"
    )]
    CouplingRange {
        twice_j1: u32,
        twice_j2: u32,
        twice_total: u32,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operator is not a density matrix: {0}")]
    NotDensity(String),
    #[error("invalid alpha vector: {0}")]
    InvalidAlpha(String),
    #[error("spin pairs differ: ({0}) vs ({1})")]
    SpinMismatch(String, String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("point ({x}, {y}) lies outside the state simplex")]
    OutsideSimplex { x: f64, y: f64 },
    #[error("negative discriminant {0:e} in root selection (region/formula mismatch)")]
    Discriminant(f64),
    #[error("unsupported spin pair j1={j1}, j2={j2}: {reason}")]
    Unsupported {
        j1: String,
        j2: String,
        reason: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("oracle did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
