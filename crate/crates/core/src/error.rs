use thiserror::Error;

/// Errors raised while building or evaluating operators, measurements and bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^dagger| entry = {max_deviation:e}")]
    NotHermitian { max_deviation: f64 },

    #[error("state is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("vectors are not orthonormal: max Gram deviation = {max_deviation:e}")]
    NotOrthonormal { max_deviation: f64 },

    #[error("effect {index} is not positive: min eigenvalue = {min_eigenvalue:e}")]
    EffectNotPositive { index: usize, min_eigenvalue: f64 },

    #[error("effect {index} has eigenvalue {max_eigenvalue} above one")]
    EigenvalueAboveOne { index: usize, max_eigenvalue: f64 },

    #[error("effects do not sum to identity: max residual = {max_residual:e}")]
    CompletenessViolated { max_residual: f64 },

    #[error(
        "spectral decomposition {index} does not reconstruct its effect: residual = {residual:e}"
    )]
    SpectrumMismatch { index: usize, residual: f64 },

    #[error("a measurement needs at least one effect")]
    EmptyPovm,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("construction requires dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error(
        "qubit parameters out of range: need |a| <= a0 <= 2 - |a|, got a0 = {a0}, |a| = {norm}"
    )]
    ParamsOutOfRange { a0: f64, norm: f64 },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("random draw degenerated after {attempts} attempts")]
    DegenerateDraw { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Variant name, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPositive { .. } => "NotPositive",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::NotOrthonormal { .. } => "NotOrthonormal",
            Error::EffectNotPositive { .. } => "EffectNotPositive",
            Error::EigenvalueAboveOne { .. } => "EigenvalueAboveOne",
            Error::CompletenessViolated { .. } => "CompletenessViolated",
            Error::SpectrumMismatch { .. } => "SpectrumMismatch",
            Error::EmptyPovm => "EmptyPovm",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::WrongDimension { .. } => "WrongDimension",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::ParamsOutOfRange { .. } => "ParamsOutOfRange",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::MalformedMatrix(_) => "MalformedMatrix",
            Error::DegenerateDraw { .. } => "DegenerateDraw",
            Error::Parse(_) => "ParseError",
            Error::Config(_) => "ConfigError",
            Error::UnknownSuite(_) => "UnknownSuite",
            Error::Io(_) => "IoError",
        }
    }

    /// Whether the error concerns how the input was written (syntax, shape,
    /// options) rather than what it describes.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Config(_)
                | Error::UnknownSuite(_)
                | Error::Io(_)
                | Error::MalformedMatrix(_)
        )
    }

    pub(crate) fn out_of_range(name: &'static str, value: f64, min: f64, max: f64) -> Self {
        Error::OutOfRange {
            name,
            value,
            min,
            max,
        }
    }

    /// Checks `min <= value <= max`, also rejecting NaN.
    pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
        if value >= min && value <= max {
            Ok(())
        } else {
            Err(Self::out_of_range(name, value, min, max))
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
