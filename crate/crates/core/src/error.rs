use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary (max |U†U - I| = {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "window {window:e} m is smaller than {required:e} m (6 x waist); the field would alias"
    )]
    WindowTooSmall { window: f64, required: f64 },

    #[error(
        "propagation distance {distance:e} m exceeds the transfer-function sampling limit \
         {limit:e} m (N dx^2 / lambda); increase samples or reduce the window"
    )]
    Sampling { distance: f64, limit: f64 },

    #[error("grid is not symmetric about y = 0 (center offset {offset:e} m)")]
    AsymmetricGrid { offset: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate scan: {0}")]
    DegenerateScan(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },

    #[error("line {line}: `{key}` {reason}")]
    Dimension {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("config value `{key}` is invalid: {reason}")]
    InvalidConfig { key: String, reason: String },

    #[error("scenario `{scenario}` requires {requirement}")]
    MissingSection {
        scenario: String,
        requirement: String,
    },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
