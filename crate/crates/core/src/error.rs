use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("step {name} must be positive and at most {max}, got {value}")]
    InvalidStep { name: &'static str, value: f64, max: f64 },

    #[error("game {game:?}: {reason}")]
    InvalidGame { game: String, reason: String },

    #[error("payoff tensors disagree: {0}")]
    TensorMismatch(String),

    #[error("{0} points must be non-empty and sorted ascending")]
    BadPointList(&'static str),

    #[error("histogram bin width must be positive, got {0}")]
    BadBinWidth(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
