use thiserror::Error;

/// Errors raised by the numerics and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{operation} does not support {state} states")]
    UnsupportedState {
        operation: &'static str,
        state: &'static str,
    },

    #[error("truncation n_max = {n_max} cannot hold {what}")]
    TruncationMismatch { n_max: usize, what: String },

    #[error("signal derivative vanishes at phi = {phi} (|dS/dphi| = {derivative:e}); use the zero-phase limit")]
    VanishingDerivative { phi: f64, derivative: f64 },

    #[error("signal is not unit-peaked: S(0) = {value}")]
    NotUnitPeak { value: f64 },

    #[error("state spans {sectors} photon-number sectors, expected exactly one")]
    MultiSector { sectors: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("unknown figure `{0}` (expected fig2a, fig2b, fig3 or fig4)")]
    UnknownFigure(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code for the CLI: 3 for I/O failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
