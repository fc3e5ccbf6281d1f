use thiserror::Error;

/// Errors raised by the geometry and estimator layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} is outside the admissible range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },

    #[error("word budget of {budget} exceeded (needed {needed})")]
    Budget { budget: u64, needed: u64 },

    #[error("eps = {eps} is below the resolution limit {min} (4 cells of size {h})")]
    Resolution { eps: f64, min: f64, h: f64 },

    #[error("parallel set at eps = {eps} would reach the grid border (margin {margin})")]
    Margin { eps: f64, margin: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
