use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{field} = {value} is out of range (max {max})")]
    Range {
        field: &'static str,
        value: u32,
        max: u32,
    },
    #[error("pixel ({x}, {y}) is outside the {width}x{height} mask")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
    #[error("malformed header: {0}")]
    Header(String),
    #[error("dimension mismatch: expected {expected} values, found {found}")]
    Dimensions { expected: usize, found: usize },
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Payload { expected: usize, found: usize },
    #[error("picked color has zero luminance, chromaticity is undefined")]
    DegeneratePick,
    #[error("invalid threshold: {0}")]
    Threshold(String),
    #[error("percent overshoot {0} must lie strictly between 0 and 100")]
    Overshoot(f64),
    #[error("infeasible spec: settling time {ts} s exceeds 8*tau = {limit} s (kp would be negative)")]
    Infeasible { ts: f64, limit: f64 },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("non-finite controller input: {0}")]
    Input(f64),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
