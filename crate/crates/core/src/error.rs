use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("operation requires constrained parametrization")]
    ModeMismatch,

    #[error("denominator {value:e} below tolerance in {context}")]
    SingularDenominator { context: &'static str, value: f64 },

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("state is rank deficient (smallest eigenvalue {eigenvalue:e})")]
    RankDeficient { eigenvalue: f64 },

    #[error("quantum Fisher information matrix is singular (det {det:e})")]
    SingularQfim { det: f64 },

    #[error("closed-form pseudo-inverse denominator vanishes ({value:e})")]
    AppendixSingular { value: f64 },

    #[error("closed-form pseudo-inverse requires equal inner populations and coherence (r22 = {r22}, r23 = {r23})")]
    AppendixInapplicable { r22: f64, r23: f64 },

    #[error("closed form evaluated outside its domain: {0}")]
    DomainError(&'static str),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("preset file line {line}: {message}")]
    PresetParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
