use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("eigensolver did not converge after {matvecs} matvecs (best residual {residual:.3e})")]
    NonConvergence { matvecs: usize, residual: f64 },
    #[error("embedding vector of vertex {0} is zero; re-randomize the eigenbasis")]
    ZeroEmbedding(usize),
    #[error("separator calibration failed: {0}")]
    Calibration(String),
    #[error("partitioning failed: {0}")]
    Partition(String),
    #[error("guarantee violated: {0}")]
    Guarantee(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code convention of the command-line tool: 2 when the algorithm
    /// ran but its output (or the lack of one) fails a guarantee.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Guarantee(_) | Error::Partition(_) => 2,
            _ => 1,
        }
    }
}
