use thiserror::Error;

use crate::fock::FockIndex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state {state} lies outside the truncated basis (cutoff {cutoff})")]
    OutsideBasis { state: FockIndex, cutoff: usize },

    #[error("operator is not Hermitian: max |A - A^dagger| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error(
        "vanishing denominator: complement state at E = {state_energy} lies within {guard:e} \
         of the level energy {level_energy} but is not spanned by the level members"
    )]
    VanishingDenominator {
        level_energy: f64,
        state_energy: f64,
        guard: f64,
    },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the `dncg` binary.
    ///
    /// 2 for rejected configuration or input, 3 for violated numerical
    /// contracts, 1 for everything else (I/O, serialization).
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::OutsideBasis { .. } => 2,
            Error::NotHermitian { .. }
            | Error::VanishingDenominator { .. }
            | Error::Eigensolver(_) => 3,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
