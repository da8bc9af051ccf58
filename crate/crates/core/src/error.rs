use std::path::PathBuf;

use thiserror::Error;

use crate::qla::Mode;

/// Errors produced by any layer of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate mode label `{0}`")]
    DuplicateMode(Mode),

    #[error("unknown mode label `{0}`")]
    UnknownMode(Mode),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("state is not normalized (squared weight {0})")]
    NotNormalized(f64),

    #[error("cannot normalize: weight {0} is not positive")]
    ZeroWeight(f64),

    #[error("partial trace requires a non-empty set of kept modes")]
    EmptyKeep,

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("eigenvalue computation did not converge")]
    EigenFailure,

    #[error("measurement strength {0} lies outside [0, 1]")]
    StrengthOutOfRange(f64),

    #[error("operator is not a valid measurement element (largest singular value {0})")]
    NotContractive(f64),

    #[error("temperature ratio must be finite and nonnegative, got {0}")]
    InvalidTemperature(f64),

    #[error("black-hole mass must be positive and finite, got {0}")]
    InvalidMass(f64),

    #[error("degenerate protocol: the kept-branch weight vanishes ({0})")]
    DegenerateProtocol(&'static str),

    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
