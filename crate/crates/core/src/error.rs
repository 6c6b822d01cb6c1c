use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node count does not fit in 64 bits")]
    CountOverflow,

    #[error("best-first search exceeded its live-node limit of {limit}")]
    MemoryLimit { limit: usize },

    #[error("{what} = {value} is outside its domain [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("fixed items weigh {weight}, more than the capacity {capacity}")]
    Infeasible { weight: u64, capacity: u64 },

    #[error("dynamic-programming table of {cells} cells exceeds the limit of {limit}")]
    TableTooLarge { cells: u128, limit: u128 },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("least-squares fit needs at least 3 distinct n values, got {0}")]
    TooFewPoints(usize),

    #[error("quantum branch-and-bound returned {quantum} but the classical optimum is {classical}")]
    OptimumMismatch { quantum: String, classical: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
